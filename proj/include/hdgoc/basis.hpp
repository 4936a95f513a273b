#pragma once

#include "hdgoc/mesh.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace hdgoc {

/// Basis functions along rows, evaluation points along columns.
using Table = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// L2-orthonormal basis of P^degree on the reference triangle (0,0),(1,0),(0,1).
///
/// Built by orthonormalizing Legendre products P_a(2x-1) P_b(2y-1), a + b <= degree,
/// ordered by total degree. The ordering makes the first dim(P^m) functions an
/// orthonormal basis of P^m for every m <= degree.
class TriBasis {
public:
    explicit TriBasis(int degree);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    [[nodiscard]] std::vector<double> eval(Point ref) const;
    /// Reference-space gradients; callers apply the affine pullback.
    [[nodiscard]] std::vector<Point> eval_grad(Point ref) const;

    /// dim x points.size() value table.
    [[nodiscard]] Table tabulate(std::span<const Point> points) const;
    /// Reference gradient tables (d/dxi, d/deta), each dim x points.size().
    void tabulate_grad(std::span<const Point> points, Table& dxi, Table& deta) const;

    static constexpr std::size_t dim_for(int degree)
    {
        return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
    }

private:
    void seeds(Point ref, Eigen::Ref<Eigen::VectorXd> val, Eigen::Ref<Eigen::VectorXd> dx,
               Eigen::Ref<Eigen::VectorXd> dy) const;

    int degree_;
    std::size_t dim_;
    std::vector<std::pair<int, int>> exponents_;
    Eigen::MatrixXd coeffs_;  // basis = coeffs_ * seeds
};

/// Orthonormal Legendre basis of P^degree on [0,1].
class EdgeBasis {
public:
    explicit EdgeBasis(int degree);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(degree_ + 1); }

    [[nodiscard]] std::vector<double> eval(double t) const;
    [[nodiscard]] Table tabulate(std::span<const double> points) const;

private:
    int degree_;
};

/// Legendre polynomials P_0..P_n and derivatives on [-1,1].
void legendre(int n, double x, std::span<double> value, std::span<double> deriv);

} // namespace hdgoc
