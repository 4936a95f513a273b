#include "hdgoc/problems.hpp"

#include "hdgoc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hdgoc {

namespace {

constexpr double pi = std::numbers::pi;

/// Closed-form manufactured fields; f and y_d follow from the optimality system.
struct Manufactured {
    ScalarField y;
    VectorField grad_y;
    ScalarField lap_y;
    ScalarField z;
    VectorField grad_z;
    ScalarField lap_z;
};

ProblemData from_manufactured(std::string name, VectorField beta, ScalarField div_beta, double gamma,
                              const Manufactured& m)
{
    if (!(gamma > 0.0)) {
        throw InvalidArgument("gamma must be positive");
    }
    ProblemData p;
    p.name = std::move(name);
    p.beta = beta;
    p.div_beta = div_beta;
    p.gamma = gamma;
    p.f = [m, beta, gamma](Point x) { return -m.lap_y(x) + dot(beta(x), m.grad_y(x)) - m.z(x) / gamma; };
    p.g = m.y;
    p.y_d = [m, beta, div_beta](Point x) {
        return m.y(x) - m.lap_z(x) - dot(beta(x), m.grad_z(x)) - div_beta(x) * m.z(x);
    };
    p.exact = ExactSolution{m.y, m.grad_y, m.z, m.grad_z};
    return p;
}

Manufactured sine_pair()
{
    Manufactured m;
    m.y = [](Point x) { return std::sin(pi * x.x); };
    m.grad_y = [](Point x) { return Point{pi * std::cos(pi * x.x), 0.0}; };
    m.lap_y = [](Point x) { return -pi * pi * std::sin(pi * x.x); };
    m.z = [](Point x) { return std::sin(pi * x.x) * std::sin(pi * x.y); };
    m.grad_z = [](Point x) {
        return Point{pi * std::cos(pi * x.x) * std::sin(pi * x.y), pi * std::sin(pi * x.x) * std::cos(pi * x.y)};
    };
    m.lap_z = [](Point x) { return -2.0 * pi * pi * std::sin(pi * x.x) * std::sin(pi * x.y); };
    return m;
}

} // namespace

ProblemData example1(double gamma)
{
    return from_manufactured(
        "example1", [](Point) { return Point{1.0, 1.0}; }, [](Point) { return 0.0; }, gamma, sine_pair());
}

ProblemData example2(double gamma)
{
    return from_manufactured(
        "example2", [](Point x) { return Point{x.y, x.x}; }, [](Point) { return 0.0; }, gamma, sine_pair());
}

ProblemData poly_debug(double gamma)
{
    Manufactured m;
    m.y = [](Point x) { return x.x; };
    m.grad_y = [](Point) { return Point{1.0, 0.0}; };
    m.lap_y = [](Point) { return 0.0; };
    m.z = [](Point) { return 0.0; };
    m.grad_z = [](Point) { return Point{0.0, 0.0}; };
    m.lap_z = [](Point) { return 0.0; };
    return from_manufactured(
        "poly_debug", [](Point) { return Point{1.0, 1.0}; }, [](Point) { return 0.0; }, gamma, m);
}

ProblemData make_problem(const std::string& name, double gamma)
{
    if (name == "example1") {
        return example1(gamma);
    }
    if (name == "example2") {
        return example2(gamma);
    }
    if (name == "poly_debug") {
        return poly_debug(gamma);
    }
    throw ConfigError("unknown problem '" + name + "' (expected example1, example2 or poly_debug)");
}

ProblemData with_zero_data(ProblemData problem)
{
    problem.name += "_zero";
    problem.f = [](Point) { return 0.0; };
    problem.g = [](Point) { return 0.0; };
    problem.y_d = [](Point) { return 0.0; };
    problem.exact.reset();
    return problem;
}

namespace {

constexpr double kStep = 1e-3;

/// Fourth-order central difference of a scalar function along one axis.
template <typename F>
double d4(const F& fn, Point x, Point dir)
{
    const double h = kStep;
    return (-fn(x + 2.0 * h * dir) + 8.0 * fn(x + h * dir) - 8.0 * fn(x - h * dir) + fn(x - 2.0 * h * dir)) /
           (12.0 * h);
}

} // namespace

ConsistencyResidual consistency_residual(const ProblemData& p, Point x)
{
    if (!p.exact) {
        throw InvalidArgument("consistency_residual: problem '" + p.name + "' has no exact solution");
    }
    const ExactSolution& ex = *p.exact;
    const Point ex1{1.0, 0.0};
    const Point ex2{0.0, 1.0};

    const double lap_y = d4([&](Point s) { return ex.grad_y(s).x; }, x, ex1) +
                         d4([&](Point s) { return ex.grad_y(s).y; }, x, ex2);
    const double lap_z = d4([&](Point s) { return ex.grad_z(s).x; }, x, ex1) +
                         d4([&](Point s) { return ex.grad_z(s).y; }, x, ex2);
    const double div_beta_z = d4([&](Point s) { return p.beta(s).x * ex.z(s); }, x, ex1) +
                              d4([&](Point s) { return p.beta(s).y * ex.z(s); }, x, ex2);
    const double u = ex.z(x) / p.gamma;

    ConsistencyResidual r;
    r.state = std::abs(-lap_y + dot(p.beta(x), ex.grad_y(x)) - p.f(x) - u);
    r.adjoint = std::abs(p.y_d(x) - ex.y(x) + lap_z + div_beta_z);
    return r;
}

double max_consistency_residual(const ProblemData& problem, std::span<const Point> points)
{
    double worst = 0.0;
    for (const Point& x : points) {
        const auto r = consistency_residual(problem, x);
        worst = std::max({worst, r.state, r.adjoint});
    }
    return worst;
}

std::vector<Point> halton_points(std::size_t count)
{
    const auto radical_inverse = [](std::size_t i, std::size_t base) {
        double f = 1.0;
        double r = 0.0;
        while (i > 0) {
            f /= static_cast<double>(base);
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        return r;
    };
    std::vector<Point> pts;
    pts.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        pts.push_back({radical_inverse(i, 2), radical_inverse(i, 3)});
    }
    return pts;
}

} // namespace hdgoc
