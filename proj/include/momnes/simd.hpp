#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace momnes::simd {

// Vectorized double-precision kernels for the sample-buffer inner loops.
//
// Every backend is bit-for-bit equivalent to the scalar reference:
//  - reductions accumulate into four lanes (lane = index mod 4, the tail
//    fills lanes 0..) and combine as (l0 + l2) + (l1 + l3);
//  - elementwise kernels apply the identical operation sequence per element;
//  - kernel translation units are compiled with FP contraction off, so no
//    backend fuses a multiply-add the others do not.
// Equivalence is enforced by tests/test_simd.cpp with exact comparison.
struct Kernels {
  const char* name;

  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum of squared differences, sum((x[i]-y[i])^2)
  double (*l2sq_diff)(const double* x, const double* y, std::size_t n);

  // out[i] = a + b * x[i]
  void (*shift_scale)(double a, double b, const double* x, double* out, std::size_t n);
  // out[i] = c * x[i]
  void (*scale)(double c, const double* x, double* out, std::size_t n);
  // out[i] = min(hi[i], max(lo[i], x[i]))
  void (*clamp)(const double* x, const double* lo, const double* hi, double* out, std::size_t n);
  // out[i] = min(hi[i], max(lo[i], x[i] - alpha * g[i]))
  void (*project_step)(const double* x, const double* g, double alpha, const double* lo,
                       const double* hi, double* out, std::size_t n);
  // out[l] = mean of x[l*s .. l*s + s), for l in [0, b)
  void (*block_means)(const double* x, std::size_t b, std::size_t s, double* out);
};

const Kernels& scalar();

// Backend chosen at startup: best available unless the MOMNES_SIMD
// environment variable ("scalar", "avx2", "neon") says otherwise.
const Kernels& active();

// Force a backend by name; returns false if it is not available on this CPU.
bool set_backend(std::string_view name);

std::vector<std::string> available_backends();

}  // namespace momnes::simd
