// AVX2 + FMA variants. Built with -mavx2 -mfma; only reached through the
// dispatcher after a CPUID check.
#include <immintrin.h>

#include "qss/kernels.hpp"

namespace qss::kernels::avx2 {

namespace {

// Lanes hold (re0, im0, re1, im1).
inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Sum of even lanes minus sum of odd lanes.
inline double hsub_pairs(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_sub_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  // re accumulates (ar*br, ai*bi); im accumulates (ar*bi, ai*br).
  __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
  __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va0 = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb0 = _mm256_loadu_pd(pb + 2 * i);
    const __m256d va1 = _mm256_loadu_pd(pa + 2 * i + 4);
    const __m256d vb1 = _mm256_loadu_pd(pb + 2 * i + 4);
    re0 = _mm256_fmadd_pd(va0, vb0, re0);
    re1 = _mm256_fmadd_pd(va1, vb1, re1);
    im0 = _mm256_fmadd_pd(va0, _mm256_permute_pd(vb0, 0b0101), im0);
    im1 = _mm256_fmadd_pd(va1, _mm256_permute_pd(vb1, 0b0101), im1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    re0 = _mm256_fmadd_pd(va, vb, re0);
    im0 = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), im0);
  }
  double re = hsum(_mm256_add_pd(re0, re1));
  double im = hsub_pairs(_mm256_add_pd(im0, im1));
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set_pd(alpha.imag(), -alpha.imag(), alpha.imag(), -alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    __m256d vy = _mm256_loadu_pd(py + 2 * i);
    vy = _mm256_fmadd_pd(vx, ar, vy);
    vy = _mm256_fmadd_pd(_mm256_permute_pd(vx, 0b0101), ai, vy);
    _mm256_storeu_pd(py + 2 * i, vy);
  }
  for (; i < n; ++i) {
    y[i] = cplx(y[i].real() + alpha.real() * x[i].real() - alpha.imag() * x[i].imag(),
                y[i].imag() + alpha.real() * x[i].imag() + alpha.imag() * x[i].real());
  }
}

double norm2(const cplx* x, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(px + 2 * i);
    const __m256d v1 = _mm256_loadu_pd(px + 2 * i + 4);
    s0 = _mm256_fmadd_pd(v0, v0, s0);
    s1 = _mm256_fmadd_pd(v1, v1, s1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(px + 2 * i);
    s0 = _mm256_fmadd_pd(v, v, s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

}  // namespace qss::kernels::avx2
