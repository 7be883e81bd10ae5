#pragma once

#include <optional>
#include <string>

#include "momnes/common.hpp"
#include "momnes/game.hpp"
#include "momnes/mom.hpp"
#include "momnes/noise.hpp"

namespace momnes {

enum class Algorithm { mom, mom_bc, gc_sun, clipped_sgda, clipped_seg };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

// All schedule constants, k counted from 0:
//   alpha_k = step_b * (k+1)^-step_a          step size
//   m_k     = sample_c * ceil((k+1)^sample_beta)   (or fixed_m when set)
//   gamma_k = (k+1)^-conf_exponent            block-plan confidence
//   eta_k   = min(1, eta0 * (k+1)^-rho)       bias-correction weight
//   tau_k   = clip_tau0 * (k+1)^clip_p        clipping threshold
struct Schedules {
  double step_a = 1.0;
  double step_b = 1.0;
  double sample_beta = 1.0;
  std::size_t sample_c = 1;
  double conf_exponent = 2.0;
  double eta0 = 0.0;
  double rho = 0.0;
  double clip_tau0 = 20.0;
  double clip_p = 0.2;
  std::optional<std::size_t> fixed_m;
  std::optional<double> fixed_step;  // constant step for clipped SGDA / SEG
};

struct ScheduleValues {
  double alpha;
  std::size_t m;
  double gamma;
  double eta;
  double tau;
};

ScheduleValues schedule_values(const Schedules& s, std::size_t k);

struct SeekerConfig {
  Algorithm algorithm = Algorithm::mom;
  Schedules schedules;
  CorruptionModel corruption;
};

// One row of a trajectory: iterate index (0 = initial point), cumulative
// charged samples, and the absolute distance to the equilibrium.
struct IterationTrace {
  std::size_t k = 0;
  std::uint64_t samples = 0;
  double abs_error = 0.0;
};

// The sample budget either counts draws per player (each player's local draw
// counter must stay within budget) or the total across players.
enum class BudgetAccounting { per_player, total };

const char* to_string(BudgetAccounting a);

struct StepResult {
  Vec x_next;
  std::uint64_t samples_per_player = 0;
};

// Single iterations, exposed for tests. Each draws its own noise from rng.
StepResult step_mom(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                    const NoiseModel& noise, const CorruptionModel& corruption, RngStream& rng);
StepResult step_mom_bc(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                       const NoiseModel& noise, const CorruptionModel& corruption,
                       RngStream& rng);
StepResult step_gc_sun(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                       const NoiseModel& noise, RngStream& rng);
StepResult step_clipped_sgda(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                             const NoiseModel& noise, RngStream& rng);
StepResult step_clipped_seg(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                            const NoiseModel& noise, RngStream& rng);

struct RunResult {
  std::vector<IterationTrace> trace;
  Vec final_x;
  std::size_t theory_invalid_iters = 0;  // MoM iterations outside the bound's regime
  bool beta_condition_warning = false;   // mom_bc with beta <= 1/(delta-1)
};

// Iterates the configured algorithm until the next iteration would push the
// charged sample count past the budget. trace[0] records the initial point.
RunResult run_seeker(const Game& game, const SeekerConfig& cfg, const NoiseModel& noise,
                     const Vec& x0, std::uint64_t budget, BudgetAccounting accounting,
                     RngStream rng, const Vec& x_star);

}  // namespace momnes
