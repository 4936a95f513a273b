#include "hdgoc/checks.hpp"

#include "hdgoc/analysis.hpp"
#include "hdgoc/assembly.hpp"
#include "hdgoc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace hdgoc {

bool CheckSummary::all_passed() const
{
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

FieldSet random_fields(const Discretization& disc, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    FieldSet f = FieldSet::zeros(disc);
    for (Eigen::VectorXd* v : {&f.flux, &f.state, &f.trace}) {
        for (Eigen::Index i = 0; i < v->size(); ++i) {
            (*v)[i] = dist(rng);
        }
    }
    return f;
}

double energy_identity_mismatch(const Discretization& disc, const FieldSet& v, bool state)
{
    const double lhs = state ? b1_apply(disc, v, v) : b2_apply(disc, v, v);
    const double rhs = state ? energy_identity_b1(disc, v) : energy_identity_b2(disc, v);
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

double adjoint_identity_sum(const Discretization& disc, const FieldSet& state, const FieldSet& adjoint)
{
    return b1_apply(disc, state, FieldSet{adjoint.flux, -adjoint.state, -adjoint.trace}) +
           b2_apply(disc, adjoint, FieldSet{-state.flux, state.state, state.trace});
}

double adjoint_identity_residual(const Discretization& disc, const FieldSet& state, const FieldSet& adjoint)
{
    const double t1 = b1_apply(disc, state, FieldSet{adjoint.flux, -adjoint.state, -adjoint.trace});
    const double t2 = b2_apply(disc, adjoint, FieldSet{-state.flux, state.state, state.trace});
    return std::abs(t1 + t2) / std::max({std::abs(t1), std::abs(t2), 1e-300});
}

double projection_orthogonality_residual(const Mesh& mesh, int k)
{
    const ScalarField fn = [](Point x) { return std::sin(std::numbers::pi * x.x) * std::exp(x.y); };
    double worst = 0.0;

    for (int degree : {k, k + 1}) {
        const TriBasis basis(degree);
        const QuadratureRule rule = tri_quadrature(projection_exactness(degree));
        const Table vals = basis.tabulate(rule.points);
        const Eigen::VectorXd c = project_volume(mesh, fn, degree);
        const auto dim = static_cast<Eigen::Index>(basis.dim());
        for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
            const AffineMap map = element_map(mesh, e);
            const Eigen::VectorXd ph = vals.transpose() * c.segment(static_cast<Eigen::Index>(e) * dim, dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                double s = 0.0;
                for (std::size_t q = 0; q < rule.size(); ++q) {
                    const auto qi = static_cast<Eigen::Index>(q);
                    s += rule.weights[q] * map.det * (fn(map.to_physical(rule.points[q])) - ph[qi]) * vals(i, qi);
                }
                worst = std::max(worst, std::abs(s));
            }
        }
    }

    const EdgeBasis ebasis(k);
    const QuadratureRule erule = edge_quadrature(projection_exactness(k));
    const Eigen::VectorXd c = project_face(mesh, fn, k);
    const auto dim = static_cast<Eigen::Index>(ebasis.dim());
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Point a = mesh.vertices[mesh.faces[f][0]];
        const Point d = mesh.vertices[mesh.faces[f][1]] - a;
        const double len = std::sqrt(dot(d, d));
        for (Eigen::Index m = 0; m < dim; ++m) {
            double s = 0.0;
            for (std::size_t q = 0; q < erule.size(); ++q) {
                const double t = erule.points[q].x;
                const auto psi = ebasis.eval(t);
                double ph = 0.0;
                for (Eigen::Index j = 0; j < dim; ++j) {
                    ph += c[static_cast<Eigen::Index>(f) * dim + j] * psi[static_cast<std::size_t>(j)];
                }
                s += erule.weights[q] * len * (fn(a + t * d) - ph) * psi[static_cast<std::size_t>(m)];
            }
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

namespace {

std::string sci(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult check_stabilization_suite(const CheckOptions& opt)
{
    CheckResult r{"stabilization (A2)", true, ""};
    const Mesh mesh = build_uniform(4);
    for (const ProblemData& prob : {example1(), example2()}) {
        const Discretization disc(mesh, prob, 1, StabilizationConfig::constant(opt.tau2, opt.tau1_rule));
        try {
            disc.check_stabilization();
        } catch (const StabilizationInvalid& e) {
            r.passed = false;
            r.detail += prob.name + ": " + e.what() + "; ";
        }
    }
    if (r.passed) {
        r.detail = "tau2 = " + sci(opt.tau2) + " accepted for example1 and example2";
    }
    return r;
}

CheckResult check_energy_suite(const CheckOptions& opt)
{
    CheckResult r{"energy identity", true, ""};
    const Mesh mesh = build_uniform(4);
    double worst = 0.0;
    std::uint64_t seed = opt.seed;
    for (const ProblemData& prob : {example1(), example2()}) {
        for (int k : {0, 1}) {
            const Discretization disc(mesh, prob, k, StabilizationConfig::constant(opt.tau2, opt.tau1_rule));
            for (int trial = 0; trial < 20; ++trial) {
                const FieldSet v = random_fields(disc, seed++);
                worst = std::max({worst, energy_identity_mismatch(disc, v, true),
                                  energy_identity_mismatch(disc, v, false)});
            }
        }
    }
    r.passed = worst <= kIdentityTolerance;
    r.detail = "max relative mismatch " + sci(worst);
    return r;
}

CheckResult check_adjoint_suite(const CheckOptions& opt)
{
    CheckResult r{"adjoint identity", true, ""};
    const Mesh mesh = build_uniform(4);
    double worst = 0.0;
    std::uint64_t seed = opt.seed + 1000;
    for (const ProblemData& prob : {example1(), example2()}) {
        for (int k : {0, 1}) {
            const Discretization disc(mesh, prob, k, StabilizationConfig::constant(opt.tau2, opt.tau1_rule));
            for (int trial = 0; trial < 5; ++trial) {
                const FieldSet s = random_fields(disc, seed++);
                const FieldSet a = random_fields(disc, seed++);
                worst = std::max(worst, adjoint_identity_residual(disc, s, a));
            }
        }
    }
    r.passed = worst <= kIdentityTolerance;
    r.detail = "max relative residual " + sci(worst);
    return r;
}

CheckResult check_uniqueness_suite(const CheckOptions& opt)
{
    CheckResult r{"uniqueness (zero data)", true, ""};
    double worst = 0.0;
    try {
        for (std::size_t n : {2u, 4u}) {
            const Mesh mesh = build_uniform(n);
            for (const ProblemData& base : {example1(), example2()}) {
                const ProblemData prob = with_zero_data(base);
                for (int k : {0, 1}) {
                    const Discretization disc(mesh, prob, k,
                                              StabilizationConfig::constant(opt.tau2, opt.tau1_rule));
                    const DiscreteSolution sol = solve(disc);
                    for (const Eigen::VectorXd* v : {&sol.q, &sol.p, &sol.y, &sol.z, &sol.u, &sol.yhat, &sol.zhat}) {
                        worst = std::max(worst, v->size() ? v->cwiseAbs().maxCoeff() : 0.0);
                    }
                }
            }
        }
    } catch (const Error& e) {
        r.passed = false;
        r.detail = e.what();
        return r;
    }
    r.passed = worst <= kUniquenessTolerance;
    r.detail = "max coefficient " + sci(worst);
    return r;
}

CheckResult check_conservation_suite(const CheckOptions& opt)
{
    CheckResult r{"flux conservation", true, ""};
    double worst = 0.0;
    try {
        const Mesh mesh = build_uniform(4);
        for (const ProblemData& prob : {example1(), example2()}) {
            for (int k : {0, 1}) {
                const Discretization disc(mesh, prob, k, StabilizationConfig::constant(opt.tau2, opt.tau1_rule));
                worst = std::max(worst, flux_conservation_residual(solve(disc)));
            }
        }
    } catch (const Error& e) {
        r.passed = false;
        r.detail = e.what();
        return r;
    }
    r.passed = worst <= kConservationTolerance;
    r.detail = "max face residual " + sci(worst);
    return r;
}

CheckResult check_projection_suite()
{
    CheckResult r{"projection orthogonality", true, ""};
    double worst = 0.0;
    const Mesh mesh = build_uniform(4);
    for (int k : {0, 1, 2}) {
        worst = std::max(worst, projection_orthogonality_residual(mesh, k));
    }
    r.passed = worst <= kOrthogonalityTolerance;
    r.detail = "max residual " + sci(worst);
    return r;
}

} // namespace

CheckSummary run_checks(const CheckOptions& options)
{
    CheckSummary s;
    s.results.push_back(check_stabilization_suite(options));
    s.results.push_back(check_energy_suite(options));
    s.results.push_back(check_adjoint_suite(options));
    s.results.push_back(check_uniqueness_suite(options));
    s.results.push_back(check_conservation_suite(options));
    s.results.push_back(check_projection_suite());
    return s;
}

} // namespace hdgoc
