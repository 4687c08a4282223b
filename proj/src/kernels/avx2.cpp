// AVX2 + FMA variants. This file is built with -mavx2 -mfma; nothing here
// may run before the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "qbc/kernels.hpp"

namespace qbc::kernels {
namespace {

static_assert(sizeof(cplx) == 2 * sizeof(double));

inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }

// Two complex values per register: [re0, im0, re1, im1].
inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    const double* xd = as_doubles(x);
    double* yd = as_doubles(y);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
        const __m256d t = _mm256_mul_pd(ai, swap_re_im(xv));
        // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
        const __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
        _mm256_storeu_pd(yd + 2 * k, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * k), prod));
    }
    for (; k < n; ++k) y[k] += a * x[k];
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const double* xd = as_doubles(x);
    const double* yd = as_doubles(y);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * k);
        acc_re = _mm256_fmadd_pd(xv, yv, acc_re);                // [xr yr, xi yi]
        acc_im = _mm256_fmadd_pd(xv, swap_re_im(yv), acc_im);    // [xr yi, xi yr]
    }
    // fold the odd lane of acc_im with a sign flip: xr yi - xi yr
    const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
    double re = hsum(acc_re);
    double im = hsum(_mm256_mul_pd(acc_im, sign));
    for (; k < n; ++k) {
        const cplx t = std::conj(x[k]) * y[k];
        re += t.real();
        im += t.imag();
    }
    return {re, im};
}

void rot_avx2(double c, double s, cplx* x, cplx* y, std::size_t n) {
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sv = _mm256_set1_pd(s);
    double* xd = as_doubles(x);
    double* yd = as_doubles(y);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * k);
        _mm256_storeu_pd(xd + 2 * k, _mm256_fnmadd_pd(sv, yv, _mm256_mul_pd(cv, xv)));
        _mm256_storeu_pd(yd + 2 * k, _mm256_fmadd_pd(sv, xv, _mm256_mul_pd(cv, yv)));
    }
    for (; k < n; ++k) {
        const cplx xk = x[k];
        const cplx yk = y[k];
        x[k] = c * xk - s * yk;
        y[k] = s * xk + c * yk;
    }
}

double norm2_avx2(const cplx* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const double* xd = as_doubles(x);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    double r = hsum(acc);
    for (; k < n; ++k) r += std::norm(x[k]);
    return r;
}

void scal_avx2(cplx a, cplx* x, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    double* xd = as_doubles(x);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
        const __m256d t = _mm256_mul_pd(ai, swap_re_im(xv));
        _mm256_storeu_pd(xd + 2 * k, _mm256_fmaddsub_pd(ar, xv, t));
    }
    for (; k < n; ++k) x[k] *= a;
}

}  // namespace

const KernelTable* avx2_table_unchecked() {
    static const KernelTable table{"avx2", axpy_avx2, dotc_avx2, rot_avx2, norm2_avx2, scal_avx2};
    return &table;
}

}  // namespace qbc::kernels
