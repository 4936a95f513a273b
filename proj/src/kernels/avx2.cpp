#include "hdgoc/kernels.hpp"

#include <immintrin.h>

#include <vector>

namespace hdgoc::kernels::avx2 {

namespace {

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double dot(const double* a, const double* b, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t q = 0;
    for (; q + 8 <= n; q += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + q), _mm256_loadu_pd(b + q), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + q + 4), _mm256_loadu_pd(b + q + 4), acc1);
    }
    if (q + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + q), _mm256_loadu_pd(b + q), acc0);
        q += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; q < n; ++q) {
        s += a[q] * b[q];
    }
    return s;
}

} // namespace

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t q = 0;
    for (; q + 8 <= n; q += 8) {
        const __m256d aw0 = _mm256_mul_pd(_mm256_loadu_pd(a + q), _mm256_loadu_pd(w + q));
        const __m256d aw1 = _mm256_mul_pd(_mm256_loadu_pd(a + q + 4), _mm256_loadu_pd(w + q + 4));
        acc0 = _mm256_fmadd_pd(aw0, _mm256_loadu_pd(b + q), acc0);
        acc1 = _mm256_fmadd_pd(aw1, _mm256_loadu_pd(b + q + 4), acc1);
    }
    if (q + 4 <= n) {
        const __m256d aw = _mm256_mul_pd(_mm256_loadu_pd(a + q), _mm256_loadu_pd(w + q));
        acc0 = _mm256_fmadd_pd(aw, _mm256_loadu_pd(b + q), acc0);
        q += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; q < n; ++q) {
        s += a[q] * w[q] * b[q];
    }
    return s;
}

void weighted_gram(const double* a, std::size_t rows_a, const double* b, std::size_t rows_b, const double* w,
                   std::size_t n, double alpha, double* out, std::size_t ld)
{
    thread_local std::vector<double> aw;
    aw.resize(n);
    for (std::size_t i = 0; i < rows_a; ++i) {
        const double* ai = a + i * n;
        std::size_t q = 0;
        for (; q + 4 <= n; q += 4) {
            _mm256_storeu_pd(aw.data() + q, _mm256_mul_pd(_mm256_loadu_pd(ai + q), _mm256_loadu_pd(w + q)));
        }
        for (; q < n; ++q) {
            aw[q] = ai[q] * w[q];
        }
        for (std::size_t j = 0; j < rows_b; ++j) {
            out[i * ld + j] += alpha * dot(aw.data(), b + j * n, n);
        }
    }
}

} // namespace hdgoc::kernels::avx2
