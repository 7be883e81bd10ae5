#pragma once

#include "momnes/common.hpp"

namespace momnes {

// Block layout for a median-of-means estimate from m raw samples at
// confidence gamma:
//   b = floor(min{8 ln(e^(1/8) / gamma), m/2}), clamped below at 1
//   s = floor(m / b),  m_used = b * s  (leftover samples are discarded)
// theory_valid records whether m >= 16 ln(e^(1/8)/gamma) + 2 and gamma < 1,
// the regime in which the deviation bound applies.
struct BlockPlan {
  std::size_t m = 0;
  double gamma = 0.0;
  std::size_t b = 0;
  std::size_t s = 0;
  std::size_t m_used = 0;
  bool theory_valid = false;
};

// Throws for m < 2 or gamma outside (0,1]. gamma = 1 is accepted because the
// confidence schedule gamma_k = (k+1)^-2 starts there at k = 0.
BlockPlan plan_blocks(std::size_t m, double gamma);

// Sample median; even length averages the two middle values. Sorts a copy.
double median(ConstSpan values);
// Same, but reorders the input instead of copying (hot path).
double median_inplace(MutSpan values);

struct MomResult {
  double estimate = 0.0;
  Vec block_means;
};

// Partitions the first plan.m_used samples into plan.b consecutive blocks of
// plan.s, averages each block and returns the median of the block means.
MomResult mom_estimate(ConstSpan samples, const BlockPlan& plan);

// Allocation-free variant: block means land in `scratch` (resized to plan.b).
double mom_estimate_into(ConstSpan samples, const BlockPlan& plan, Vec& scratch);

// Deviation threshold parameters: C1 = (12 nu^delta)^(1/delta).
struct ThresholdParams {
  double delta = 2.0;
  double nu = 1.0;
  double c1 = 0.0;

  static ThresholdParams from(double delta, double nu);
};

// E(gamma) = C1 * (16 ln(e^(1/8)/gamma) / m)^((delta-1)/delta)
double deviation_threshold(const ThresholdParams& p, std::size_t m, double gamma);

// (1 - eta) * median(block_means) + eta * mean(block_means); eta in [0,1].
double bias_corrected_estimate(ConstSpan block_means, double eta);

// Norm clipping: v * min(1, tau / ||v||); zero vector stays zero.
void clip(MutSpan v, double tau);
double clip(double g, double tau);  // scalar form: sign(g) * min(|g|, tau)

}  // namespace momnes
