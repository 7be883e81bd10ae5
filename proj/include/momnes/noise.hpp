#pragma once

#include "momnes/common.hpp"
#include "momnes/rng.hpp"

namespace momnes {

enum class NoiseKind { none, gaussian, symmetrized_pareto, shifted_pareto };

const char* to_string(NoiseKind k);

// Per-sample gradient noise distribution. All kinds have mean zero; the
// certified pair (delta, nu) bounds E|xi|^delta <= nu^delta and is filled in
// by certify() / certify_moment().
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double alpha = 1.8;  // Pareto tail index (moments of order >= alpha diverge)
  double sigma = 1.0;  // gaussian standard deviation
  double delta = 2.0;  // certified moment order, in (1,2]
  double nu = 0.0;     // certified moment bound; 0 until certified

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double sigma);
  static NoiseModel sym_pareto(double alpha);
  static NoiseModel shift_pareto(double alpha);

  // returns a copy carrying (delta, certify_moment(*this, delta))
  NoiseModel certified(double delta) const;
};

inline double pareto_mean(double alpha) { return alpha / (alpha - 1.0); }

// Applies the inverse CDF to a uniform u in (0,1]: Z = u^(-1/alpha), Z >= 1.
double pareto_from_uniform(double u, double alpha);

// One Pareto(alpha) draw via inverse CDF; requires alpha > 1 (finite mean).
double draw_pareto(double alpha, RngStream& rng);

// One zero-mean draw from the model.
double draw_noise(const NoiseModel& m, RngStream& rng);

// Fills out[] with independent draws; same sequence as repeated draw_noise.
void draw_noise_batch(const NoiseModel& m, RngStream& rng, MutSpan out);

// E|xi|^delta by adaptive quadrature of the known density. Throws if the
// moment diverges (delta >= alpha for Pareto kinds) or delta outside (0,2].
double noise_abs_moment(const NoiseModel& m, double delta);

// Certified nu: (E|xi|^delta)^(1/delta) inflated by a 5% safety margin.
double certify_moment(const NoiseModel& m, double delta);

// ---- adversarial corruption -------------------------------------------------

enum class CorruptionMode { none, fixed_count, half_blocks, probabilistic };

struct CorruptionModel {
  CorruptionMode mode = CorruptionMode::none;
  std::size_t c_blocks = 0;  // fixed_count: whole blocks replaced per iteration
  double p = 0.0;            // probabilistic: per-sample replacement probability
  double magnitude = 0.0;    // value written into corrupted samples

  static CorruptionModel none() { return {}; }
  static CorruptionModel fixed(std::size_t blocks, double magnitude);
  // floor((b-1)/2) blocks per iteration: the strongest whole-block attack the
  // median provably absorbs, tracking the iteration's own block count
  static CorruptionModel half(double magnitude);
  static CorruptionModel prob(double p, double magnitude);
  bool active() const { return mode != CorruptionMode::none; }
};

// Overwrites the selected entries of samples with model.magnitude.
// fixed_count picks c_blocks distinct blocks of block_size consecutive
// samples; throws if c_blocks >= floor(samples.size() / block_size).
void corrupt(MutSpan samples, const CorruptionModel& m, std::size_t block_size, RngStream& rng);

}  // namespace momnes
