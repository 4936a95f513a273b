#include "hdgoc/quadrature.hpp"

#include "hdgoc/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hdgoc {

namespace {

void check_exactness(int exactness)
{
    if (exactness < 0) {
        throw InvalidArgument("quadrature exactness must be non-negative");
    }
    if (exactness > kMaxQuadratureExactness) {
        throw UnsupportedDegree("quadrature exactness " + std::to_string(exactness) + " exceeds " +
                                std::to_string(kMaxQuadratureExactness));
    }
}

} // namespace

void gauss_legendre(std::size_t npts, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(npts, 0.0);
    weights.assign(npts, 0.0);
    const double n = static_cast<double>(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        // Newton iteration on P_n over [-1,1], starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= npts; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            const double pn = npts == 0 ? 1.0 : (npts == 1 ? x : p1);
            const double pnm1 = npts == 1 ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Map [-1,1] -> [0,1]; store in ascending order.
        const std::size_t slot = npts - 1 - i;
        nodes[slot] = 0.5 * (x + 1.0);
        weights[slot] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

QuadratureRule tri_quadrature(int exactness)
{
    check_exactness(exactness);
    // Collapsed map (u,v) -> (u(1-v), v) with Jacobian (1-v): degree p in (x,y)
    // becomes degree p in u and p+1 in v.
    const auto nu = static_cast<std::size_t>(exactness / 2 + 1);
    const auto nv = static_cast<std::size_t>((exactness + 1) / 2 + 1);
    std::vector<double> xu, wu, xv, wv;
    gauss_legendre(nu, xu, wu);
    gauss_legendre(nv, xv, wv);

    QuadratureRule rule;
    rule.exactness = exactness;
    rule.points.reserve(nu * nv);
    rule.weights.reserve(nu * nv);
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < nu; ++i) {
            rule.points.push_back({xu[i] * (1.0 - xv[j]), xv[j]});
            rule.weights.push_back(wu[i] * wv[j] * (1.0 - xv[j]));
        }
    }
    return rule;
}

QuadratureRule edge_quadrature(int exactness)
{
    check_exactness(exactness);
    const auto npts = static_cast<std::size_t>(exactness / 2 + 1);
    std::vector<double> x, w;
    gauss_legendre(npts, x, w);

    QuadratureRule rule;
    rule.exactness = exactness;
    rule.weights = std::move(w);
    rule.points.reserve(npts);
    for (double t : x) {
        rule.points.push_back({t, 0.0});
    }
    return rule;
}

} // namespace hdgoc
