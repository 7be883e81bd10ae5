#include "momnes/seekers.hpp"

#include <cmath>

#include "momnes/simd.hpp"

namespace momnes {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::mom: return "mom";
    case Algorithm::mom_bc: return "mom_bc";
    case Algorithm::gc_sun: return "gc_sun";
    case Algorithm::clipped_sgda: return "clipped_sgda";
    case Algorithm::clipped_seg: return "clipped_seg";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "mom") return Algorithm::mom;
  if (name == "mom_bc") return Algorithm::mom_bc;
  if (name == "gc_sun") return Algorithm::gc_sun;
  if (name == "clipped_sgda") return Algorithm::clipped_sgda;
  if (name == "clipped_seg") return Algorithm::clipped_seg;
  throw InvalidArgument("unknown algorithm: " + name +
                        " (expected mom|mom_bc|gc_sun|clipped_sgda|clipped_seg)");
}

const char* to_string(BudgetAccounting a) {
  return a == BudgetAccounting::per_player ? "per_player" : "total";
}

ScheduleValues schedule_values(const Schedules& s, std::size_t k) {
  const double k1 = double(k + 1);
  ScheduleValues v{};
  v.alpha = s.step_b * std::pow(k1, -s.step_a);
  if (s.fixed_m) {
    v.m = *s.fixed_m;
  } else {
    v.m = s.sample_c * std::size_t(std::ceil(std::pow(k1, s.sample_beta)));
  }
  v.gamma = std::pow(k1, -s.conf_exponent);
  v.eta = std::min(1.0, s.eta0 * std::pow(k1, -s.rho));
  v.tau = s.clip_tau0 * std::pow(k1, s.clip_p);
  return v;
}

namespace {

struct Workspace {
  Vec noise_buf;
  Vec grad_buf;
  Vec block_means;
  Vec ghat;
  Vec x_mid;
};

// m = 1 cannot be block-planned (the block count formula floors to zero);
// the estimate degenerates to the single sample.
BlockPlan degenerate_plan() {
  BlockPlan p;
  p.m = p.b = p.s = p.m_used = 1;
  p.gamma = 1.0;
  p.theory_valid = false;
  return p;
}

// Shared core of the two MoM steps.
StepResult mom_step_impl(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                         const NoiseModel& noise, const CorruptionModel& corruption,
                         RngStream& rng, bool bias_corrected, Workspace& ws,
                         std::size_t* theory_invalid) {
  const std::size_t n = game.n_players();
  if (x.size() != n) throw InvalidArgument("step: profile dimension mismatch");
  const ScheduleValues sv = schedule_values(s, k);
  const BlockPlan plan = sv.m >= 2 ? plan_blocks(sv.m, std::min(sv.gamma, 1.0))
                                   : degenerate_plan();
  if (theory_invalid && !plan.theory_valid) ++*theory_invalid;

  ws.noise_buf.resize(sv.m);
  ws.grad_buf.resize(sv.m);
  ws.ghat.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    draw_noise_batch(noise, rng, ws.noise_buf);
    game.sample_gradient_batch(i, x, ws.noise_buf, ws.grad_buf);
    if (corruption.active())
      corrupt(MutSpan(ws.grad_buf.data(), plan.m_used), corruption, plan.s, rng);
    if (bias_corrected) {
      ws.block_means.resize(plan.b);
      simd::active().block_means(ws.grad_buf.data(), plan.b, plan.s, ws.block_means.data());
      const double mean =
          simd::active().sum(ws.block_means.data(), plan.b) / double(plan.b);
      const double med = median_inplace(ws.block_means);
      ws.ghat[i] = (1.0 - sv.eta) * med + sv.eta * mean;
    } else {
      ws.ghat[i] = mom_estimate_into(ConstSpan(ws.grad_buf.data(), plan.m_used), plan,
                                     ws.block_means);
    }
  }

  StepResult out;
  out.x_next.resize(n);
  simd::active().project_step(x.data(), ws.ghat.data(), sv.alpha, game.box().lower.data(),
                              game.box().upper.data(), out.x_next.data(), n);
  out.samples_per_player = sv.m;
  return out;
}

StepResult one_sample_clip_step(const Game& game, ConstSpan x, std::size_t k,
                                const Schedules& s, const NoiseModel& noise,
                                const CorruptionModel& corruption, RngStream& rng,
                                bool per_player_clip, Workspace& ws) {
  const std::size_t n = game.n_players();
  if (x.size() != n) throw InvalidArgument("step: profile dimension mismatch");
  const ScheduleValues sv = schedule_values(s, k);
  ws.ghat.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = draw_noise(noise, rng);
    ws.ghat[i] = game.sample_gradient(i, x, xi);
    // opted-in corruption sees each player's one-sample buffer
    if (corruption.active()) corrupt(MutSpan(&ws.ghat[i], 1), corruption, 1, rng);
  }
  double step_size;
  if (per_player_clip) {
    for (double& g : ws.ghat) g = clip(g, sv.tau);
    step_size = sv.alpha;
  } else {
    clip(MutSpan(ws.ghat), sv.tau);
    step_size = s.fixed_step.value_or(0.005);
  }
  StepResult out;
  out.x_next.resize(n);
  simd::active().project_step(x.data(), ws.ghat.data(), step_size, game.box().lower.data(),
                              game.box().upper.data(), out.x_next.data(), n);
  out.samples_per_player = 1;
  return out;
}

StepResult seg_step_impl(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                         const NoiseModel& noise, const CorruptionModel& corruption,
                         RngStream& rng, Workspace& ws) {
  StepResult probe = one_sample_clip_step(game, x, k, s, noise, corruption, rng, false, ws);
  ws.x_mid = std::move(probe.x_next);
  const std::size_t n = game.n_players();
  const ScheduleValues sv = schedule_values(s, k);
  const double gamma_step = s.fixed_step.value_or(0.005);
  ws.ghat.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = draw_noise(noise, rng);
    ws.ghat[i] = game.sample_gradient(i, ws.x_mid, xi);
    if (corruption.active()) corrupt(MutSpan(&ws.ghat[i], 1), corruption, 1, rng);
  }
  clip(MutSpan(ws.ghat), sv.tau);
  StepResult out;
  out.x_next.resize(n);
  // anchor the second step at x, not at the probe point
  simd::active().project_step(x.data(), ws.ghat.data(), gamma_step, game.box().lower.data(),
                              game.box().upper.data(), out.x_next.data(), n);
  out.samples_per_player = 2;
  return out;
}

}  // namespace

StepResult step_mom(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                    const NoiseModel& noise, const CorruptionModel& corruption,
                    RngStream& rng) {
  Workspace ws;
  return mom_step_impl(game, x, k, s, noise, corruption, rng, false, ws, nullptr);
}

StepResult step_mom_bc(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                       const NoiseModel& noise, const CorruptionModel& corruption,
                       RngStream& rng) {
  Workspace ws;
  return mom_step_impl(game, x, k, s, noise, corruption, rng, true, ws, nullptr);
}

StepResult step_gc_sun(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                       const NoiseModel& noise, RngStream& rng) {
  Workspace ws;
  return one_sample_clip_step(game, x, k, s, noise, CorruptionModel::none(), rng, true, ws);
}

StepResult step_clipped_sgda(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                             const NoiseModel& noise, RngStream& rng) {
  Workspace ws;
  return one_sample_clip_step(game, x, k, s, noise, CorruptionModel::none(), rng, false, ws);
}

StepResult step_clipped_seg(const Game& game, ConstSpan x, std::size_t k, const Schedules& s,
                            const NoiseModel& noise, RngStream& rng) {
  Workspace ws;
  return seg_step_impl(game, x, k, s, noise, CorruptionModel::none(), rng, ws);
}

RunResult run_seeker(const Game& game, const SeekerConfig& cfg, const NoiseModel& noise,
                     const Vec& x0, std::uint64_t budget, BudgetAccounting accounting,
                     RngStream rng, const Vec& x_star) {
  const std::size_t n = game.n_players();
  if (x0.size() != n || x_star.size() != n)
    throw InvalidArgument("run_seeker: profile dimension mismatch");
  if (!game.box().contains(x0)) throw InvalidArgument("run_seeker: x0 outside the box");
  if (budget == 0) throw InvalidArgument("run_seeker: budget must be positive");

  RunResult res;
  if (cfg.algorithm == Algorithm::mom_bc && !cfg.schedules.fixed_m) {
    const double delta = noise.delta;
    res.beta_condition_warning =
        !(delta > 1.0) || !(cfg.schedules.sample_beta > 1.0 / (delta - 1.0));
  }

  const auto err = [&](const Vec& x) {
    return std::sqrt(simd::active().l2sq_diff(x.data(), x_star.data(), n));
  };

  Vec x = x0;
  std::uint64_t cum = 0;
  res.trace.push_back({0, 0, err(x)});

  Workspace ws;
  const std::uint64_t factor = accounting == BudgetAccounting::per_player ? 1 : n;
  for (std::size_t k = 0;; ++k) {
    std::uint64_t per_player;
    switch (cfg.algorithm) {
      case Algorithm::mom:
      case Algorithm::mom_bc:
        per_player = schedule_values(cfg.schedules, k).m;
        break;
      case Algorithm::clipped_seg:
        per_player = 2;
        break;
      default:
        per_player = 1;
    }
    const std::uint64_t charge = per_player * factor;
    if (cum + charge > budget) break;

    StepResult step;
    switch (cfg.algorithm) {
      case Algorithm::mom:
        step = mom_step_impl(game, x, k, cfg.schedules, noise, cfg.corruption, rng, false, ws,
                             &res.theory_invalid_iters);
        break;
      case Algorithm::mom_bc:
        step = mom_step_impl(game, x, k, cfg.schedules, noise, cfg.corruption, rng, true, ws,
                             &res.theory_invalid_iters);
        break;
      case Algorithm::gc_sun:
        step = one_sample_clip_step(game, x, k, cfg.schedules, noise, cfg.corruption, rng,
                                    true, ws);
        break;
      case Algorithm::clipped_sgda:
        step = one_sample_clip_step(game, x, k, cfg.schedules, noise, cfg.corruption, rng,
                                    false, ws);
        break;
      case Algorithm::clipped_seg:
        step = seg_step_impl(game, x, k, cfg.schedules, noise, cfg.corruption, rng, ws);
        break;
    }
    x = std::move(step.x_next);
    cum += charge;
    res.trace.push_back({k + 1, cum, err(x)});
  }

  res.final_x = std::move(x);
  return res;
}

}  // namespace momnes
