#include "momnes/simd.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace momnes::simd {

namespace {

// ---- scalar reference ------------------------------------------------------
// Four explicit accumulator lanes; the SIMD backends mirror this layout so
// results match bitwise.

double sum_scalar(const double* x, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  if (i < n) a0 += x[i];
  if (i + 1 < n) a1 += x[i + 1];
  if (i + 2 < n) a2 += x[i + 2];
  return (a0 + a2) + (a1 + a3);
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i] * y[i];
    a1 += x[i + 1] * y[i + 1];
    a2 += x[i + 2] * y[i + 2];
    a3 += x[i + 3] * y[i + 3];
  }
  if (i < n) a0 += x[i] * y[i];
  if (i + 1 < n) a1 += x[i + 1] * y[i + 1];
  if (i + 2 < n) a2 += x[i + 2] * y[i + 2];
  return (a0 + a2) + (a1 + a3);
}

double l2sq_diff_scalar(const double* x, const double* y, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double d0 = x[i] - y[i];
    const double d1 = x[i + 1] - y[i + 1];
    const double d2 = x[i + 2] - y[i + 2];
    const double d3 = x[i + 3] - y[i + 3];
    a0 += d0 * d0;
    a1 += d1 * d1;
    a2 += d2 * d2;
    a3 += d3 * d3;
  }
  for (std::size_t l = 0; i < n; ++i, ++l) {
    const double d = x[i] - y[i];
    if (l == 0) a0 += d * d;
    if (l == 1) a1 += d * d;
    if (l == 2) a2 += d * d;
  }
  return (a0 + a2) + (a1 + a3);
}

void shift_scale_scalar(double a, double b, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a + b * x[i];
}

void scale_scalar(double c, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c * x[i];
}

void clamp_scalar(const double* x, const double* lo, const double* hi, double* out,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(hi[i], std::max(lo[i], x[i]));
}

void project_step_scalar(const double* x, const double* g, double alpha, const double* lo,
                         const double* hi, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = x[i] - alpha * g[i];
    out[i] = std::min(hi[i], std::max(lo[i], t));
  }
}

void block_means_scalar(const double* x, std::size_t b, std::size_t s, double* out) {
  for (std::size_t l = 0; l < b; ++l) out[l] = sum_scalar(x + l * s, s) / double(s);
}

constexpr Kernels kScalar = {
    "scalar",        sum_scalar,   dot_scalar,          l2sq_diff_scalar,
    shift_scale_scalar, scale_scalar, clamp_scalar,     project_step_scalar,
    block_means_scalar,
};

}  // namespace

const Kernels& scalar() { return kScalar; }

#if defined(__x86_64__) || defined(_M_X64)
const Kernels* avx2_kernels();  // src/simd_avx2.cpp
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
const Kernels* neon_kernels();  // src/simd_neon.cpp
#endif

namespace {

const Kernels* lookup(std::string_view name) {
  if (name == "scalar") return &kScalar;
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2" && __builtin_cpu_supports("avx2")) return avx2_kernels();
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
  if (name == "neon") return neon_kernels();
#endif
  return nullptr;
}

const Kernels* pick_default() {
  if (const char* env = std::getenv("MOMNES_SIMD")) {
    if (const Kernels* k = lookup(env)) return k;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return avx2_kernels();
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
  return neon_kernels();
#endif
  return &kScalar;
}

std::atomic<const Kernels*> g_active{nullptr};

}  // namespace

const Kernels& active() {
  const Kernels* k = g_active.load(std::memory_order_acquire);
  if (!k) {
    k = pick_default();
    g_active.store(k, std::memory_order_release);
  }
  return *k;
}

bool set_backend(std::string_view name) {
  const Kernels* k = lookup(name);
  if (!k) return false;
  g_active.store(k, std::memory_order_release);
  return true;
}

std::vector<std::string> available_backends() {
  std::vector<std::string> out{"scalar"};
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) out.emplace_back("avx2");
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
  out.emplace_back("neon");
#endif
  return out;
}

}  // namespace momnes::simd
