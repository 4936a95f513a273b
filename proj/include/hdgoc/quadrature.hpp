#pragma once

#include "hdgoc/mesh.hpp"

#include <vector>

namespace hdgoc {

/// Quadrature on the reference triangle (0,0),(1,0),(0,1) or on the reference edge [0,1].
/// Edge rules store their abscissae in Point::x.
struct QuadratureRule {
    std::vector<Point> points;
    std::vector<double> weights;
    int exactness{0};

    [[nodiscard]] std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureExactness = 20;

/// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre(std::size_t npts, std::vector<double>& nodes, std::vector<double>& weights);

/// Collapsed (Duffy) Gauss rule, exact for total degree <= exactness.
[[nodiscard]] QuadratureRule tri_quadrature(int exactness);

[[nodiscard]] QuadratureRule edge_quadrature(int exactness);

} // namespace hdgoc
