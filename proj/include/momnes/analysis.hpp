#pragma once

#include "momnes/common.hpp"
#include "momnes/game.hpp"
#include "momnes/mom.hpp"
#include "momnes/noise.hpp"

namespace momnes {

// ---- recursion oracle --------------------------------------------------------
// Worst-case simulation of  Y_{k+1} = (1 - r/k) Y_k + d (ln k)^tau / k^{p+1}
// together with a certificate (A, K) such that Y_k <= A (ln k)^tau / k^p on
// [K, horizon], with the constant pinned to
// A = max{2d/(r-p), Y_K K^p / (ln K)^tau} + 1.
struct ChungInstance {
  double r = 2.0;
  double p = 1.0;
  double d = 1.0;
  double tau = 0.0;
  std::size_t k0 = 2;
  double y0 = 1.0;
};

struct ChungCertificate {
  bool valid = false;
  double bound_const = 0.0;  // A
  std::size_t onset = 0;     // K
};

struct ChungResult {
  std::size_t k0 = 0;
  Vec y;  // y[j] = Y_{k0 + j}
  ChungCertificate cert;

  double at(std::size_t k) const { return y.at(k - k0); }
};

ChungResult chung_oracle(const ChungInstance& inst, std::size_t horizon);

// ---- rate envelopes ----------------------------------------------------------

struct CurvePoint {
  double k = 0.0;
  double value = 0.0;
};

// Envelope for squared errors:
//   max{ 1/k, (ln k / k^beta)^(2(delta-1)/delta) }            (plain)
//   ... with the extra branch 1/k^(2 rho + 2 zeta)            (bias-corrected)
struct EnvelopeParams {
  double delta = 2.0;
  double beta = 1.0;
  double rho = 0.0;
  double zeta = 0.0;
  bool bias_branch = false;
};

double envelope_shape(const EnvelopeParams& p, double k);

struct RateEnvelope {
  EnvelopeParams params;
  double fitted_A = 0.0;     // max value / shape over the window
  double k_start = 0.0;      // first k of the fitted window
  double ratio_slope = 0.0;  // log-log slope of value/shape over the final decade
  bool satisfied = false;    // fitted_A finite and ratio_slope <= 0.1
};

// Fits the path constant of the envelope to a squared-error curve and tests
// that the ratio does not trend upward. window_fraction selects the fitted
// range as k >= window_fraction * k_max (0.5 = final half of the iterations).
RateEnvelope fit_envelope(std::span<const CurvePoint> sq_error, const EnvelopeParams& params,
                          double window_fraction = 0.5);

// Least-squares slope of ln(value) against ln(k) over k >= window_fraction *
// k_max. Needs at least 10 points in the window.
double fit_loglog_slope(std::span<const CurvePoint> curve, double window_fraction);

// ---- empirical deviation-bound test -----------------------------------------

struct TailBoundResult {
  std::uint64_t trials = 0;      // MoM estimates performed (trials x players)
  std::uint64_t violations = 0;
  double violation_rate = 0.0;
  double threshold = 0.0;
  double bound = 0.0;  // 2 gamma
  double slack = 0.0;  // 3 binomial standard errors
  bool pass = false;
};

// Repeats the MoM gradient estimate at a fixed profile `trials` times per
// player and counts deviations beyond the threshold. params must certify the
// per-sample *gradient* noise (game noise scale times the raw bound).
// Requires a theory-valid (m, gamma) pair and trials >= 1000.
TailBoundResult tail_bound_test(const Game& game, const Vec& x, const NoiseModel& noise,
                                const ThresholdParams& params, std::size_t m, double gamma,
                                std::size_t trials, RngStream rng, unsigned n_threads = 0);

}  // namespace momnes
