// AArch64 NEON variants. Advanced SIMD is mandatory on AArch64, so the
// dispatcher treats these as always available there.
#include <arm_neon.h>

#include "qss/kernels.hpp"

namespace qss::kernels::neon {

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  float64x2_t re0 = vdupq_n_f64(0.0), re1 = vdupq_n_f64(0.0);
  float64x2_t im0 = vdupq_n_f64(0.0), im1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va0 = vld1q_f64(pa + 2 * i);
    const float64x2_t vb0 = vld1q_f64(pb + 2 * i);
    const float64x2_t va1 = vld1q_f64(pa + 2 * i + 2);
    const float64x2_t vb1 = vld1q_f64(pb + 2 * i + 2);
    re0 = vfmaq_f64(re0, va0, vb0);
    re1 = vfmaq_f64(re1, va1, vb1);
    im0 = vfmaq_f64(im0, va0, vextq_f64(vb0, vb0, 1));
    im1 = vfmaq_f64(im1, va1, vextq_f64(vb1, vb1, 1));
  }
  const float64x2_t re = vaddq_f64(re0, re1);
  const float64x2_t im = vaddq_f64(im0, im1);
  double r = vgetq_lane_f64(re, 0) + vgetq_lane_f64(re, 1);
  double m = vgetq_lane_f64(im, 0) - vgetq_lane_f64(im, 1);
  for (; i < n; ++i) {
    r += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    m += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {r, m};
}

void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const float64x2_t ar = vdupq_n_f64(alpha.real());
  const double ai_arr[2] = {-alpha.imag(), alpha.imag()};
  const float64x2_t ai = vld1q_f64(ai_arr);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t vx = vld1q_f64(px + 2 * i);
    float64x2_t vy = vld1q_f64(py + 2 * i);
    vy = vfmaq_f64(vy, vx, ar);
    vy = vfmaq_f64(vy, vextq_f64(vx, vx, 1), ai);
    vst1q_f64(py + 2 * i, vy);
  }
}

double norm2(const cplx* x, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  float64x2_t s0 = vdupq_n_f64(0.0), s1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v0 = vld1q_f64(px + 2 * i);
    const float64x2_t v1 = vld1q_f64(px + 2 * i + 2);
    s0 = vfmaq_f64(s0, v0, v0);
    s1 = vfmaq_f64(s1, v1, v1);
  }
  const float64x2_t s = vaddq_f64(s0, s1);
  double r = vgetq_lane_f64(s, 0) + vgetq_lane_f64(s, 1);
  for (; i < n; ++i) r += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return r;
}

}  // namespace qss::kernels::neon
