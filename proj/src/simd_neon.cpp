// NEON backend (aarch64). Two float64x2_t registers emulate the four
// accumulator lanes of the scalar reference ((q0 = lanes 0,1, q1 = lanes
// 2,3)); the final combine is (l0+l2)+(l1+l3) like every other backend, and
// no fused multiply-add is used, so results are bit-identical.

#include "momnes/simd.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)

#include <arm_neon.h>

#include <algorithm>

namespace momnes::simd {

namespace {

inline double combine(float64x2_t a01, float64x2_t a23) {
  const float64x2_t p = vaddq_f64(a01, a23);  // (l0+l2, l1+l3)
  return vgetq_lane_f64(p, 0) + vgetq_lane_f64(p, 1);
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0), a23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a01 = vaddq_f64(a01, vld1q_f64(x + i));
    a23 = vaddq_f64(a23, vld1q_f64(x + i + 2));
  }
  double lanes[4] = {vgetq_lane_f64(a01, 0), vgetq_lane_f64(a01, 1), vgetq_lane_f64(a23, 0),
                     vgetq_lane_f64(a23, 1)};
  if (i < n) lanes[0] += x[i];
  if (i + 1 < n) lanes[1] += x[i + 1];
  if (i + 2 < n) lanes[2] += x[i + 2];
  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0), a23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a01 = vaddq_f64(a01, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    a23 = vaddq_f64(a23, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double lanes[4] = {vgetq_lane_f64(a01, 0), vgetq_lane_f64(a01, 1), vgetq_lane_f64(a23, 0),
                     vgetq_lane_f64(a23, 1)};
  if (i < n) lanes[0] += x[i] * y[i];
  if (i + 1 < n) lanes[1] += x[i + 1] * y[i + 1];
  if (i + 2 < n) lanes[2] += x[i + 2] * y[i + 2];
  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

double l2sq_diff_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0), a23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d01 = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    const float64x2_t d23 = vsubq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    a01 = vaddq_f64(a01, vmulq_f64(d01, d01));
    a23 = vaddq_f64(a23, vmulq_f64(d23, d23));
  }
  double lanes[4] = {vgetq_lane_f64(a01, 0), vgetq_lane_f64(a01, 1), vgetq_lane_f64(a23, 0),
                     vgetq_lane_f64(a23, 1)};
  for (std::size_t l = 0; i < n; ++i, ++l) {
    const double d = x[i] - y[i];
    lanes[l] += d * d;
  }
  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

void shift_scale_neon(double a, double b, const double* x, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vaddq_f64(va, vmulq_f64(vb, vld1q_f64(x + i))));
  for (; i < n; ++i) out[i] = a + b * x[i];
}

void scale_neon(double c, const double* x, double* out, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vc, vld1q_f64(x + i)));
  for (; i < n; ++i) out[i] = c * x[i];
}

void clamp_neon(const double* x, const double* lo, const double* hi, double* out,
                std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t t = vmaxq_f64(vld1q_f64(lo + i), vld1q_f64(x + i));
    vst1q_f64(out + i, vminq_f64(vld1q_f64(hi + i), t));
  }
  for (; i < n; ++i) out[i] = std::min(hi[i], std::max(lo[i], x[i]));
}

void project_step_neon(const double* x, const double* g, double alpha, const double* lo,
                       const double* hi, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t t = vsubq_f64(vld1q_f64(x + i), vmulq_f64(va, vld1q_f64(g + i)));
    const float64x2_t c = vmaxq_f64(vld1q_f64(lo + i), t);
    vst1q_f64(out + i, vminq_f64(vld1q_f64(hi + i), c));
  }
  for (; i < n; ++i) {
    const double t = x[i] - alpha * g[i];
    out[i] = std::min(hi[i], std::max(lo[i], t));
  }
}

void block_means_neon(const double* x, std::size_t b, std::size_t s, double* out) {
  for (std::size_t l = 0; l < b; ++l) out[l] = sum_neon(x + l * s, s) / double(s);
}

constexpr Kernels kNeon = {
    "neon",          sum_neon,   dot_neon,    l2sq_diff_neon, shift_scale_neon,
    scale_neon,      clamp_neon, project_step_neon, block_means_neon,
};

}  // namespace

const Kernels* neon_kernels() { return &kNeon; }

}  // namespace momnes::simd

#endif  // aarch64
