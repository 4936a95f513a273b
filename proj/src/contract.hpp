#pragma once

#include "hdgoc/basis.hpp"
#include "hdgoc/kernels.hpp"

#include <span>
#include <vector>

namespace hdgoc::detail {

/// G(i, j) = alpha * sum_q a(i, q) w[q] b(j, q)
inline Table gram(const Table& a, const Table& b, std::span<const double> w, double alpha = 1.0)
{
    Table out = Table::Zero(a.rows(), b.rows());
    kernels::active().weighted_gram(a.data(), static_cast<std::size_t>(a.rows()), b.data(),
                                    static_cast<std::size_t>(b.rows()), w.data(), w.size(), alpha, out.data(),
                                    static_cast<std::size_t>(out.cols()));
    return out;
}

/// v(i) = sum_q a(i, q) w[q] f[q]
inline Eigen::VectorXd moments(const Table& a, std::span<const double> w, std::span<const double> f)
{
    Eigen::VectorXd out(a.rows());
    const auto& k = kernels::active();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        out[i] = k.weighted_dot(a.row(i).data(), f.data(), w.data(), w.size());
    }
    return out;
}

template <typename Fn>
std::vector<double> scaled(std::span<const double> w, Fn&& fn)
{
    std::vector<double> out(w.size());
    for (std::size_t q = 0; q < w.size(); ++q) {
        out[q] = w[q] * fn(q);
    }
    return out;
}

} // namespace hdgoc::detail
