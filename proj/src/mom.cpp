#include "momnes/mom.hpp"

#include <algorithm>
#include <cmath>

#include "momnes/simd.hpp"

namespace momnes {

BlockPlan plan_blocks(std::size_t m, double gamma) {
  if (m < 2) throw InvalidArgument("plan_blocks: need at least 2 samples");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("plan_blocks: gamma outside (0,1]");
  const double log_term = std::log(std::exp(0.125) / gamma);  // = 1/8 + ln(1/gamma)
  BlockPlan plan;
  plan.m = m;
  plan.gamma = gamma;
  const double raw = std::min(8.0 * log_term, double(m) / 2.0);
  plan.b = std::max<std::size_t>(1, std::size_t(std::floor(raw)));
  plan.s = m / plan.b;
  plan.m_used = plan.b * plan.s;
  plan.theory_valid = gamma < 1.0 && double(m) >= 16.0 * log_term + 2.0;
  return plan;
}

double median_inplace(MutSpan values) {
  if (values.empty()) throw InvalidArgument("median of empty range");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (n % 2 == 1) return values[mid];
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

double median(ConstSpan values) {
  Vec copy(values.begin(), values.end());
  return median_inplace(copy);
}

double mom_estimate_into(ConstSpan samples, const BlockPlan& plan, Vec& scratch) {
  if (samples.size() < plan.m_used) throw InvalidArgument("mom_estimate: too few samples");
  scratch.resize(plan.b);
  simd::active().block_means(samples.data(), plan.b, plan.s, scratch.data());
  return median_inplace(scratch);
}

MomResult mom_estimate(ConstSpan samples, const BlockPlan& plan) {
  MomResult r;
  Vec means;
  if (samples.size() < plan.m_used) throw InvalidArgument("mom_estimate: too few samples");
  means.resize(plan.b);
  simd::active().block_means(samples.data(), plan.b, plan.s, means.data());
  r.block_means = means;  // keep unsorted order for callers
  r.estimate = median_inplace(means);
  return r;
}

ThresholdParams ThresholdParams::from(double delta, double nu) {
  if (!(delta > 1.0 && delta <= 2.0)) throw InvalidArgument("threshold: delta outside (1,2]");
  if (!(nu > 0.0)) throw InvalidArgument("threshold: nu must be positive");
  ThresholdParams p;
  p.delta = delta;
  p.nu = nu;
  p.c1 = std::pow(12.0 * std::pow(nu, delta), 1.0 / delta);
  return p;
}

double deviation_threshold(const ThresholdParams& p, std::size_t m, double gamma) {
  const double log_term = std::log(std::exp(0.125) / gamma);
  return p.c1 * std::pow(16.0 * log_term / double(m), (p.delta - 1.0) / p.delta);
}

double bias_corrected_estimate(ConstSpan block_means, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("bias correction: eta outside [0,1]");
  if (block_means.empty()) throw InvalidArgument("bias correction: empty block means");
  const double med = median(block_means);
  const double mean =
      simd::active().sum(block_means.data(), block_means.size()) / double(block_means.size());
  return (1.0 - eta) * med + eta * mean;
}

void clip(MutSpan v, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("clip: tau must be positive");
  const double nsq = simd::active().dot(v.data(), v.data(), v.size());
  const double norm = std::sqrt(nsq);
  if (norm <= tau || norm == 0.0) return;
  simd::active().scale(tau / norm, v.data(), v.data(), v.size());
}

double clip(double g, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("clip: tau must be positive");
  return std::copysign(std::min(std::fabs(g), tau), g);
}

}  // namespace momnes
