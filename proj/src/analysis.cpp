#include "momnes/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "momnes/simd.hpp"

namespace momnes {

ChungResult chung_oracle(const ChungInstance& inst, std::size_t horizon) {
  if (!(inst.r > inst.p) || !(inst.p >= 0.0))
    throw InvalidArgument("chung_oracle: requires r > p >= 0");
  if (!(inst.d >= 0.0) || !(inst.tau >= 0.0))
    throw InvalidArgument("chung_oracle: requires d >= 0 and tau >= 0");
  if (inst.k0 < 1 || horizon <= inst.k0)
    throw InvalidArgument("chung_oracle: need horizon > k0 >= 1");

  ChungResult res;
  res.k0 = inst.k0;
  res.y.resize(horizon - inst.k0 + 1);
  res.y[0] = inst.y0;
  for (std::size_t k = inst.k0; k < horizon; ++k) {
    const double yk = res.y[k - inst.k0];
    const double forcing =
        inst.d * std::pow(std::log(double(k)), inst.tau) / std::pow(double(k), inst.p + 1.0);
    // the recursion models a nonnegative sequence; clamp when 1 - r/k < 0
    res.y[k - inst.k0 + 1] = std::max(0.0, (1.0 - inst.r / double(k)) * yk + forcing);
  }

  // scaled[j] = Y_k k^p / (ln k)^tau; certificate at K holds iff the suffix
  // maximum from K on stays below A(K).
  const std::size_t k_min = std::max<std::size_t>({inst.k0, 2, std::size_t(std::ceil(inst.r))});
  if (k_min > horizon) return res;
  Vec scaled(horizon - k_min + 1);
  for (std::size_t k = k_min; k <= horizon; ++k)
    scaled[k - k_min] = res.y[k - inst.k0] * std::pow(double(k), inst.p) /
                        std::pow(std::log(double(k)), inst.tau);
  Vec suffix_max(scaled.size());
  double run = 0.0;
  for (std::size_t j = scaled.size(); j-- > 0;) {
    run = std::max(run, scaled[j]);
    suffix_max[j] = run;
  }
  for (std::size_t k = k_min; k <= horizon; ++k) {
    const double a = std::max(2.0 * inst.d / (inst.r - inst.p), scaled[k - k_min]) + 1.0;
    if (suffix_max[k - k_min] <= a) {
      res.cert.valid = true;
      res.cert.bound_const = a;
      res.cert.onset = k;
      break;
    }
  }
  return res;
}

double envelope_shape(const EnvelopeParams& p, double k) {
  if (!(k > 1.0)) throw InvalidArgument("envelope_shape: needs k > 1");
  const double expo = 2.0 * (p.delta - 1.0) / p.delta;
  double shape = std::max(1.0 / k, std::pow(std::log(k) / std::pow(k, p.beta), expo));
  if (p.bias_branch) shape = std::max(shape, std::pow(k, -(2.0 * p.rho + 2.0 * p.zeta)));
  return shape;
}

namespace {

double ls_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
  const std::size_t n = lx.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = double(n) * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgument("slope fit: degenerate abscissa");
  return (double(n) * sxy - sx * sy) / denom;
}

// positive-valued points with k >= lo, as (ln k, ln v)
void log_window(std::span<const CurvePoint> curve, double lo, std::vector<double>& lx,
                std::vector<double>& ly) {
  lx.clear();
  ly.clear();
  for (const auto& pt : curve) {
    if (pt.k >= lo && pt.k > 1.0 && pt.value > 0.0) {
      lx.push_back(std::log(pt.k));
      ly.push_back(std::log(pt.value));
    }
  }
}

double max_k(std::span<const CurvePoint> curve) {
  double m = 0.0;
  for (const auto& pt : curve) m = std::max(m, pt.k);
  return m;
}

}  // namespace

double fit_loglog_slope(std::span<const CurvePoint> curve, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw InvalidArgument("fit_loglog_slope: window fraction outside (0,1]");
  std::vector<double> lx, ly;
  log_window(curve, window_fraction * max_k(curve), lx, ly);
  if (lx.size() < 10) throw InvalidArgument("fit_loglog_slope: fewer than 10 points in window");
  return ls_slope(lx, ly);
}

RateEnvelope fit_envelope(std::span<const CurvePoint> sq_error, const EnvelopeParams& params,
                          double window_fraction) {
  if (sq_error.size() < 20) throw InvalidArgument("fit_envelope: trajectory shorter than 20");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw InvalidArgument("fit_envelope: window fraction outside (0,1]");

  RateEnvelope out;
  out.params = params;
  const double km = max_k(sq_error);
  // the envelope branches are monotone only from k = 3 on
  out.k_start = std::max(3.0, window_fraction * km);

  // fitted constant over the window, trend over the final decade of iterations
  const double decade_start = std::max(3.0, km / 10.0);
  std::vector<CurvePoint> ratio;
  ratio.reserve(sq_error.size());
  out.fitted_A = 0.0;
  for (const auto& pt : sq_error) {
    if (pt.k < 3.0 || !(pt.value > 0.0)) continue;
    const double r = pt.value / envelope_shape(params, pt.k);
    if (pt.k >= out.k_start) out.fitted_A = std::max(out.fitted_A, r);
    if (pt.k >= decade_start) ratio.push_back({pt.k, r});
  }
  if (ratio.size() < 10) throw InvalidArgument("fit_envelope: window too small");

  std::vector<double> lx, ly;
  log_window(ratio, 0.0, lx, ly);
  out.ratio_slope = ls_slope(lx, ly);
  out.satisfied = std::isfinite(out.fitted_A) && out.fitted_A > 0.0 && out.ratio_slope <= 0.1;
  return out;
}

TailBoundResult tail_bound_test(const Game& game, const Vec& x, const NoiseModel& noise,
                                const ThresholdParams& params, std::size_t m, double gamma,
                                std::size_t trials, RngStream rng, unsigned n_threads) {
  if (trials < 1000) throw InvalidArgument("tail_bound_test: needs at least 1000 trials");
  const BlockPlan plan = plan_blocks(m, gamma);
  if (!plan.theory_valid)
    throw InvalidArgument("tail_bound_test: (m, gamma) outside the theory-valid regime");
  const std::size_t n = game.n_players();
  if (x.size() != n) throw InvalidArgument("tail_bound_test: profile dimension mismatch");

  TailBoundResult res;
  res.threshold = deviation_threshold(params, m, gamma);
  res.bound = 2.0 * gamma;
  res.slack = 3.0 * std::sqrt(res.bound * (1.0 - res.bound) / double(trials));

  Vec true_grad(n);
  game.mean_gradient(x, true_grad);

  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, 64);

  std::atomic<std::size_t> next_chunk{0};
  const std::size_t chunk = 256;
  std::vector<std::uint64_t> counts(n_threads, 0);
  auto worker = [&](unsigned tid) {
    Vec noise_buf(m), grad_buf(m), scratch;
    std::uint64_t local = 0;
    for (;;) {
      const std::size_t begin = next_chunk.fetch_add(chunk);
      if (begin >= trials) break;
      const std::size_t end = std::min(trials, begin + chunk);
      for (std::size_t t = begin; t < end; ++t) {
        RngStream stream = rng.substream(t);
        for (std::size_t i = 0; i < n; ++i) {
          draw_noise_batch(noise, stream, noise_buf);
          game.sample_gradient_batch(i, x, noise_buf, grad_buf);
          const double est =
              mom_estimate_into(ConstSpan(grad_buf.data(), plan.m_used), plan, scratch);
          if (std::fabs(est - true_grad[i]) > res.threshold) ++local;
        }
      }
    }
    counts[tid] = local;
  };

  std::vector<std::thread> pool;
  for (unsigned tid = 1; tid < n_threads; ++tid) pool.emplace_back(worker, tid);
  worker(0);
  for (auto& th : pool) th.join();

  for (std::uint64_t c : counts) res.violations += c;
  res.trials = std::uint64_t(trials) * n;
  res.violation_rate = double(res.violations) / double(res.trials);
  res.pass = res.violation_rate <= res.bound + res.slack;
  return res;
}

}  // namespace momnes
