#include "hdgoc/kernels.hpp"

namespace hdgoc::kernels::scalar {

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n)
{
    double s = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
        s += a[q] * w[q] * b[q];
    }
    return s;
}

void weighted_gram(const double* a, std::size_t rows_a, const double* b, std::size_t rows_b, const double* w,
                   std::size_t n, double alpha, double* out, std::size_t ld)
{
    for (std::size_t i = 0; i < rows_a; ++i) {
        const double* ai = a + i * n;
        for (std::size_t j = 0; j < rows_b; ++j) {
            out[i * ld + j] += alpha * weighted_dot(ai, b + j * n, w, n);
        }
    }
}

} // namespace hdgoc::kernels::scalar
