#if defined(__x86_64__)

#include <immintrin.h>

#include "rept/kernels/orient_moments.hpp"

namespace rept::kernels {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void orient_moments_avx2(const double g[4], const CircleTable& tab, double out[4]) {
    const __m256d g00 = _mm256_set1_pd(g[0]);
    const __m256d g01 = _mm256_set1_pd(g[1]);
    const __m256d g10 = _mm256_set1_pd(g[2]);
    const __m256d g11 = _mm256_set1_pd(g[3]);
    __m256d axx = _mm256_setzero_pd();
    __m256d axy = _mm256_setzero_pd();
    __m256d ayy = _mm256_setzero_pd();
    __m256d b = _mm256_setzero_pd();
    const int n4 = tab.n & ~3;
    for (int i = 0; i < n4; i += 4) {
        const __m256d c = _mm256_loadu_pd(&tab.cs[static_cast<std::size_t>(i)]);
        const __m256d s = _mm256_loadu_pd(&tab.sn[static_cast<std::size_t>(i)]);
        const __m256d x = _mm256_fmadd_pd(g01, s, _mm256_mul_pd(g00, c));
        const __m256d y = _mm256_fmadd_pd(g11, s, _mm256_mul_pd(g10, c));
        const __m256d r = _mm256_sqrt_pd(_mm256_fmadd_pd(y, y, _mm256_mul_pd(x, x)));
        const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), r);
        axx = _mm256_fmadd_pd(_mm256_mul_pd(x, x), inv, axx);
        axy = _mm256_fmadd_pd(_mm256_mul_pd(x, y), inv, axy);
        ayy = _mm256_fmadd_pd(_mm256_mul_pd(y, y), inv, ayy);
        b = _mm256_add_pd(b, r);
    }
    double sxx = hsum(axx), sxy = hsum(axy), syy = hsum(ayy), sb = hsum(b);
    for (int i = n4; i < tab.n; ++i) {
        const double c = tab.cs[static_cast<std::size_t>(i)];
        const double s = tab.sn[static_cast<std::size_t>(i)];
        const double x = g[0] * c + g[1] * s;
        const double y = g[2] * c + g[3] * s;
        const double r = __builtin_sqrt(x * x + y * y);
        sxx += x * x / r;
        sxy += x * y / r;
        syy += y * y / r;
        sb += r;
    }
    out[0] = tab.w * sxx;
    out[1] = tab.w * sxy;
    out[2] = tab.w * syy;
    out[3] = tab.w * sb;
}

void orient_moments_ia_avx2(const double g[4], const CircleTable& tab, double out[4]) {
    const __m256d g00 = _mm256_set1_pd(g[0]);
    const __m256d g01 = _mm256_set1_pd(g[1]);
    const __m256d g10 = _mm256_set1_pd(g[2]);
    const __m256d g11 = _mm256_set1_pd(g[3]);
    __m256d axx = _mm256_setzero_pd();
    __m256d axy = _mm256_setzero_pd();
    __m256d ayy = _mm256_setzero_pd();
    const int n4 = tab.n & ~3;
    for (int i = 0; i < n4; i += 4) {
        const __m256d c = _mm256_loadu_pd(&tab.cs[static_cast<std::size_t>(i)]);
        const __m256d s = _mm256_loadu_pd(&tab.sn[static_cast<std::size_t>(i)]);
        const __m256d x = _mm256_fmadd_pd(g01, s, _mm256_mul_pd(g00, c));
        const __m256d y = _mm256_fmadd_pd(g11, s, _mm256_mul_pd(g10, c));
        const __m256d inv =
            _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_fmadd_pd(y, y, _mm256_mul_pd(x, x)));
        axx = _mm256_fmadd_pd(_mm256_mul_pd(x, x), inv, axx);
        axy = _mm256_fmadd_pd(_mm256_mul_pd(x, y), inv, axy);
        ayy = _mm256_fmadd_pd(_mm256_mul_pd(y, y), inv, ayy);
    }
    double sxx = hsum(axx), sxy = hsum(axy), syy = hsum(ayy);
    for (int i = n4; i < tab.n; ++i) {
        const double c = tab.cs[static_cast<std::size_t>(i)];
        const double s = tab.sn[static_cast<std::size_t>(i)];
        const double x = g[0] * c + g[1] * s;
        const double y = g[2] * c + g[3] * s;
        const double inv = 1.0 / (x * x + y * y);
        sxx += x * x * inv;
        sxy += x * y * inv;
        syy += y * y * inv;
    }
    out[0] = tab.w * sxx;
    out[1] = tab.w * sxy;
    out[2] = tab.w * syy;
    out[3] = tab.w * tab.n;
}

}  // namespace rept::kernels

#endif  // __x86_64__
