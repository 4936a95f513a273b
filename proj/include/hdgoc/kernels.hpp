#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace hdgoc::kernels {

/// Quadrature contraction kernels. Every variant computes the same sums; only the
/// evaluation order (and hence the last bits of rounding) differs.
enum class Isa { Scalar, Avx2 };

/// sum_q a[q] * w[q] * b[q]
using WeightedDotFn = double (*)(const double* a, const double* b, const double* w, std::size_t n);

/// out[i * ld + j] += alpha * sum_q a[i * n + q] * w[q] * b[j * n + q]
using WeightedGramFn = void (*)(const double* a, std::size_t rows_a, const double* b, std::size_t rows_b,
                                const double* w, std::size_t n, double alpha, double* out, std::size_t ld);

struct KernelTable {
    Isa isa;
    std::string_view name;
    WeightedDotFn weighted_dot;
    WeightedGramFn weighted_gram;
};

namespace scalar {
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
void weighted_gram(const double* a, std::size_t rows_a, const double* b, std::size_t rows_b, const double* w,
                   std::size_t n, double alpha, double* out, std::size_t ld);
} // namespace scalar

namespace avx2 {
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
void weighted_gram(const double* a, std::size_t rows_a, const double* b, std::size_t rows_b, const double* w,
                   std::size_t n, double alpha, double* out, std::size_t ld);
} // namespace avx2

/// True when the variant was compiled in and the running CPU supports it.
[[nodiscard]] bool available(Isa isa);

/// Best available variant, unless HDGOC_KERNELS=scalar|avx2 overrides it.
[[nodiscard]] Isa detect();

[[nodiscard]] const KernelTable& table(Isa isa);

/// Table used by the library; selected once on first use.
[[nodiscard]] const KernelTable& active();

/// Switch the active variant (throws InvalidArgument when unavailable).
void select(Isa isa);

[[nodiscard]] std::string_view name(Isa isa);

inline double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> w)
{
    return active().weighted_dot(a.data(), b.data(), w.data(), w.size());
}

} // namespace hdgoc::kernels
