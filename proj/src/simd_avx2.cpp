// AVX2 backend. Mirrors the scalar reference lane-for-lane: reductions keep
// four accumulator lanes (ymm = lanes 0..3) and combine as (l0+l2)+(l1+l3),
// tails go through the same scalar path, and no FMA is used, so every result
// is bit-identical to src/simd.cpp.

#include "momnes/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>

namespace momnes::simd {

namespace {

inline double hsum(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);   // lanes 0,1
  const __m128d hi = _mm256_extractf128_pd(acc, 1); // lanes 2,3
  const __m128d p = _mm_add_pd(lo, hi);             // (l0+l2, l1+l3)
  return _mm_cvtsd_f64(p) + _mm_cvtsd_f64(_mm_unpackhi_pd(p, p));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  if (i < n) lanes[0] += x[i];
  if (i + 1 < n) lanes[1] += x[i + 1];
  if (i + 2 < n) lanes[2] += x[i + 2];
  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  if (i < n) lanes[0] += x[i] * y[i];
  if (i + 1 < n) lanes[1] += x[i + 1] * y[i + 1];
  if (i + 2 < n) lanes[2] += x[i + 2] * y[i + 2];
  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

double l2sq_diff_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t l = 0; i < n; ++i, ++l) {
    const double d = x[i] - y[i];
    lanes[l] += d * d;
  }
  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

void shift_scale_avx2(double a, double b, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(va, _mm256_mul_pd(vb, _mm256_loadu_pd(x + i))));
  for (; i < n; ++i) out[i] = a + b * x[i];
}

void scale_avx2(double c, const double* x, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vc, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = c * x[i];
}

void clamp_avx2(const double* x, const double* lo, const double* hi, double* out,
                std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_max_pd(_mm256_loadu_pd(lo + i), _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(hi + i), t));
  }
  for (; i < n; ++i) out[i] = std::min(hi[i], std::max(lo[i], x[i]));
}

void project_step_avx2(const double* x, const double* g, double alpha, const double* lo,
                       const double* hi, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(va, _mm256_loadu_pd(g + i)));
    const __m256d c = _mm256_max_pd(_mm256_loadu_pd(lo + i), t);
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(hi + i), c));
  }
  for (; i < n; ++i) {
    const double t = x[i] - alpha * g[i];
    out[i] = std::min(hi[i], std::max(lo[i], t));
  }
}

void block_means_avx2(const double* x, std::size_t b, std::size_t s, double* out) {
  for (std::size_t l = 0; l < b; ++l) out[l] = sum_avx2(x + l * s, s) / double(s);
}

constexpr Kernels kAvx2 = {
    "avx2",          sum_avx2,   dot_avx2,    l2sq_diff_avx2, shift_scale_avx2,
    scale_avx2,      clamp_avx2, project_step_avx2, block_means_avx2,
};

}  // namespace

const Kernels* avx2_kernels() { return &kAvx2; }

}  // namespace momnes::simd

#endif  // x86_64
