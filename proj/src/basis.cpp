#include "hdgoc/basis.hpp"

#include "hdgoc/error.hpp"
#include "hdgoc/quadrature.hpp"

#include <cmath>
#include <string>

namespace hdgoc {

namespace {

constexpr double kInsideTol = 1e-12;

void check_inside_triangle(Point p)
{
    if (!(p.x >= -kInsideTol && p.y >= -kInsideTol && p.x + p.y <= 1.0 + kInsideTol)) {
        throw InvalidArgument("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                              ") is outside the reference triangle");
    }
}

} // namespace

void legendre(int n, double x, std::span<double> value, std::span<double> deriv)
{
    value[0] = 1.0;
    deriv[0] = 0.0;
    if (n == 0) {
        return;
    }
    value[1] = x;
    deriv[1] = 1.0;
    for (int k = 2; k <= n; ++k) {
        const double kk = k;
        value[k] = ((2.0 * kk - 1.0) * x * value[k - 1] - (kk - 1.0) * value[k - 2]) / kk;
        // P_k' = P_{k-2}' + (2k-1) P_{k-1}
        deriv[k] = deriv[k - 2] + (2.0 * kk - 1.0) * value[k - 1];
    }
}

TriBasis::TriBasis(int degree) : degree_(degree), dim_(dim_for(degree))
{
    if (degree < 0) {
        throw InvalidArgument("TriBasis: degree must be non-negative");
    }
    for (int total = 0; total <= degree; ++total) {
        for (int b = 0; b <= total; ++b) {
            exponents_.emplace_back(total - b, b);
        }
    }

    const auto n = static_cast<Eigen::Index>(dim_);
    coeffs_ = Eigen::MatrixXd::Identity(n, n);

    const QuadratureRule rule = tri_quadrature(2 * degree);
    Eigen::MatrixXd vals(n, static_cast<Eigen::Index>(rule.size()));
    Eigen::VectorXd v(n), dx(n), dy(n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        seeds(rule.points[q], v, dx, dy);
        vals.col(static_cast<Eigen::Index>(q)) = v;
    }
    const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), static_cast<Eigen::Index>(rule.size()));

    // Two Cholesky passes: the second cleans up the roundoff left by the first.
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::MatrixXd phi = coeffs_ * vals;
        const Eigen::MatrixXd gram = phi * w.asDiagonal() * phi.transpose();
        const Eigen::LLT<Eigen::MatrixXd> llt(gram);
        const Eigen::MatrixXd linv =
            llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
        coeffs_ = linv * coeffs_;
    }
}

void TriBasis::seeds(Point ref, Eigen::Ref<Eigen::VectorXd> val, Eigen::Ref<Eigen::VectorXd> dx,
                     Eigen::Ref<Eigen::VectorXd> dy) const
{
    std::vector<double> px(degree_ + 1), dpx(degree_ + 1), py(degree_ + 1), dpy(degree_ + 1);
    legendre(degree_, 2.0 * ref.x - 1.0, px, dpx);
    legendre(degree_, 2.0 * ref.y - 1.0, py, dpy);
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        const auto [a, b] = exponents_[i];
        const auto ii = static_cast<Eigen::Index>(i);
        val[ii] = px[a] * py[b];
        dx[ii] = 2.0 * dpx[a] * py[b];
        dy[ii] = 2.0 * px[a] * dpy[b];
    }
}

std::vector<double> TriBasis::eval(Point ref) const
{
    check_inside_triangle(ref);
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::VectorXd v(n), dx(n), dy(n);
    seeds(ref, v, dx, dy);
    const Eigen::VectorXd phi = coeffs_ * v;
    return {phi.data(), phi.data() + n};
}

std::vector<Point> TriBasis::eval_grad(Point ref) const
{
    check_inside_triangle(ref);
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::VectorXd v(n), dx(n), dy(n);
    seeds(ref, v, dx, dy);
    const Eigen::VectorXd gx = coeffs_ * dx;
    const Eigen::VectorXd gy = coeffs_ * dy;
    std::vector<Point> out(dim_);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = {gx[i], gy[i]};
    }
    return out;
}

Table TriBasis::tabulate(std::span<const Point> points) const
{
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd raw(n, static_cast<Eigen::Index>(points.size()));
    Eigen::VectorXd v(n), dx(n), dy(n);
    for (std::size_t q = 0; q < points.size(); ++q) {
        check_inside_triangle(points[q]);
        seeds(points[q], v, dx, dy);
        raw.col(static_cast<Eigen::Index>(q)) = v;
    }
    return coeffs_ * raw;
}

void TriBasis::tabulate_grad(std::span<const Point> points, Table& dxi, Table& deta) const
{
    const auto n = static_cast<Eigen::Index>(dim_);
    const auto np = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd rx(n, np), ry(n, np);
    Eigen::VectorXd v(n), dx(n), dy(n);
    for (std::size_t q = 0; q < points.size(); ++q) {
        check_inside_triangle(points[q]);
        seeds(points[q], v, dx, dy);
        rx.col(static_cast<Eigen::Index>(q)) = dx;
        ry.col(static_cast<Eigen::Index>(q)) = dy;
    }
    dxi = coeffs_ * rx;
    deta = coeffs_ * ry;
}

EdgeBasis::EdgeBasis(int degree) : degree_(degree)
{
    if (degree < 0) {
        throw InvalidArgument("EdgeBasis: degree must be non-negative");
    }
}

std::vector<double> EdgeBasis::eval(double t) const
{
    if (!(t >= -kInsideTol && t <= 1.0 + kInsideTol)) {
        throw InvalidArgument("point " + std::to_string(t) + " is outside the reference edge [0,1]");
    }
    std::vector<double> val(dim()), der(dim());
    legendre(degree_, 2.0 * t - 1.0, val, der);
    for (int m = 0; m <= degree_; ++m) {
        val[m] *= std::sqrt(2.0 * m + 1.0);
    }
    return val;
}

Table EdgeBasis::tabulate(std::span<const double> points) const
{
    Table out(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(points.size()));
    for (std::size_t q = 0; q < points.size(); ++q) {
        const auto v = eval(points[q]);
        for (std::size_t m = 0; m < v.size(); ++m) {
            out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(q)) = v[m];
        }
    }
    return out;
}

} // namespace hdgoc
