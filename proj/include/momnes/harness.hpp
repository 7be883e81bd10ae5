#pragma once

#include <map>

#include "momnes/common.hpp"
#include "momnes/game.hpp"
#include "momnes/noise.hpp"
#include "momnes/seekers.hpp"

namespace momnes {

enum class ErrorKind { absolute, relative, squared };

const char* to_string(ErrorKind k);
ErrorKind parse_error_kind(const std::string& name);

// Full description of a multi-trial comparison run. Every seeker shares the
// game, the noise, the budget and the trial seeds.
struct ExperimentSpec {
  std::string game_id = "benchmark15";  // "benchmark15" | "benchmark" | "diag"
  std::size_t n_players = 15;
  double diag_a = 2.0;   // diag game: A = diag_a * I
  double diag_r = -2.0;  // diag game: r = diag_r * ones
  NoiseModel noise;
  std::vector<std::pair<std::string, SeekerConfig>> seekers;
  std::uint64_t budget = 100000;
  std::size_t trials = 20;
  std::uint64_t base_seed = 1;
  BudgetAccounting accounting = BudgetAccounting::per_player;
  ErrorKind error_kind = ErrorKind::relative;
  double x0_value = 0.0;  // initial action, broadcast to every player
};

AffineGame make_game(const std::string& game_id, std::size_t n_players, double diag_a,
                     double diag_r);
AffineGame make_game(const ExperimentSpec& spec);

// Trial-mean (and median) error on a common grid. The samples axis uses
// checkpoints at each 1% of the budget with last-observation-carried-forward
// interpolation; the iterations axis is exact since every trial of a seeker
// shares the same deterministic iteration structure.
struct AggregateCurve {
  std::string axis;  // "samples" | "iterations"
  std::vector<std::uint64_t> grid;
  Vec mean_error;
  Vec median_error;
  Vec per_trial_final;
  std::size_t trials = 0;
};

struct SeekerOutput {
  AggregateCurve by_samples;
  AggregateCurve by_iterations;
  // shared iteration structure (k, samples) and per-trial absolute errors
  std::vector<IterationTrace> structure;
  std::vector<Vec> trial_abs_error;
  bool beta_condition_warning = false;
  std::size_t theory_invalid_iters = 0;
};

struct ExperimentResult {
  std::vector<std::pair<std::string, SeekerOutput>> seekers;
  Vec x_star;
  double x_star_norm = 0.0;
};

// Runs trials in parallel (n_threads = 0 picks the hardware count); trial t
// of every seeker uses RngStream(base_seed, t), so results are independent of
// the thread count and identical across repeats.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned n_threads = 0);

// ---- persistence --------------------------------------------------------------
// Curve CSV schema: header "axis,grid,mean_error,median_error,trials".
// Doubles are written with 17 significant digits so they round-trip exactly.
void write_curve_csv(const AggregateCurve& curve, const std::string& path);
AggregateCurve read_curve_csv(const std::string& path);

// Long format, one row per recorded iteration per trial:
// "trial,k,samples,abs_error,rel_error,sq_error". Trajectories longer than
// max_rows_per_trial are strided down deterministically.
void write_trials_csv(const SeekerOutput& out, double x_star_norm, const std::string& path,
                      std::size_t max_rows_per_trial = 2048);

// key=value dump of every config field plus the per-seeker warning flags.
void write_metadata(const ExperimentSpec& spec, const ExperimentResult& result,
                    const std::string& path);

// The four canned comparison protocols (1: symmetric tail 1.8, 2: symmetric
// tail 1.2, 3: asymmetric with sample growth 2.1, 4: asymmetric with sample
// growth 3). Five seekers for 1-2, six (adds the bias-corrected variant) for
// 3-4; shared step/clipping schedules; budget 1e5, 20 trials.
ExperimentSpec figure_preset(int fig);

}  // namespace momnes
