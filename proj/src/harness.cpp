#include "momnes/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "momnes/simd.hpp"

namespace momnes {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::absolute: return "absolute";
    case ErrorKind::relative: return "relative";
    case ErrorKind::squared: return "squared";
  }
  return "?";
}

ErrorKind parse_error_kind(const std::string& name) {
  if (name == "absolute") return ErrorKind::absolute;
  if (name == "relative") return ErrorKind::relative;
  if (name == "squared") return ErrorKind::squared;
  throw InvalidArgument("unknown error kind: " + name);
}

AffineGame make_game(const std::string& game_id, std::size_t n_players, double diag_a,
                     double diag_r) {
  if (game_id == "benchmark15") return benchmark_game(15);
  if (game_id == "benchmark") return benchmark_game(n_players);
  if (game_id == "diag") return diag_game(n_players, diag_a, diag_r);
  throw InvalidArgument("unknown game id: " + game_id +
                        " (expected benchmark15|benchmark|diag)");
}

AffineGame make_game(const ExperimentSpec& spec) {
  return make_game(spec.game_id, spec.n_players, spec.diag_a, spec.diag_r);
}

namespace {

double transform_error(double abs_err, ErrorKind kind, double x_star_norm) {
  switch (kind) {
    case ErrorKind::absolute: return abs_err;
    case ErrorKind::relative: return x_star_norm > 0.0 ? abs_err / x_star_norm : abs_err;
    case ErrorKind::squared: return abs_err * abs_err;
  }
  return abs_err;
}

double median_of(Vec values) {
  return median_inplace(values);
}

// iteration-axis aggregation is exact: all trials share the structure
AggregateCurve aggregate_iterations(const SeekerOutput& out, ErrorKind kind,
                                    double x_star_norm) {
  AggregateCurve curve;
  curve.axis = "iterations";
  curve.trials = out.trial_abs_error.size();
  const std::size_t rows = out.structure.size();
  curve.grid.resize(rows);
  curve.mean_error.resize(rows);
  curve.median_error.resize(rows);
  Vec column(curve.trials);
  for (std::size_t j = 0; j < rows; ++j) {
    curve.grid[j] = out.structure[j].k;
    double sum = 0.0;
    for (std::size_t t = 0; t < curve.trials; ++t) {
      column[t] = transform_error(out.trial_abs_error[t][j], kind, x_star_norm);
      sum += column[t];
    }
    curve.mean_error[j] = sum / double(curve.trials);
    curve.median_error[j] = median_of(column);
  }
  for (std::size_t t = 0; t < curve.trials; ++t)
    curve.per_trial_final.push_back(
        transform_error(out.trial_abs_error[t].back(), kind, x_star_norm));
  return curve;
}

AggregateCurve aggregate_samples(const SeekerOutput& out, ErrorKind kind, double x_star_norm,
                                 std::uint64_t budget) {
  AggregateCurve curve;
  curve.axis = "samples";
  curve.trials = out.trial_abs_error.size();
  // checkpoints at every 1% of the budget, strictly increasing
  for (std::uint64_t j = 1; j <= 100; ++j) {
    const std::uint64_t c = budget * j / 100;
    if (curve.grid.empty() || c > curve.grid.back()) curve.grid.push_back(c);
  }
  const std::size_t rows = curve.grid.size();
  curve.mean_error.resize(rows);
  curve.median_error.resize(rows);
  Vec column(curve.trials);
  for (std::size_t j = 0; j < rows; ++j) {
    // last record with samples <= checkpoint (records are sorted by samples)
    std::size_t idx = 0;
    for (std::size_t i = 0; i < out.structure.size(); ++i) {
      if (out.structure[i].samples <= curve.grid[j]) idx = i;
      else break;
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < curve.trials; ++t) {
      column[t] = transform_error(out.trial_abs_error[t][idx], kind, x_star_norm);
      sum += column[t];
    }
    curve.mean_error[j] = sum / double(curve.trials);
    curve.median_error[j] = median_of(column);
  }
  for (std::size_t t = 0; t < curve.trials; ++t)
    curve.per_trial_final.push_back(
        transform_error(out.trial_abs_error[t].back(), kind, x_star_norm));
  return curve;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned n_threads) {
  if (spec.trials < 1) throw InvalidArgument("experiment: trials must be >= 1");
  if (spec.budget < 1) throw InvalidArgument("experiment: budget must be >= 1");
  if (spec.seekers.empty()) throw InvalidArgument("experiment: no seekers configured");

  const AffineGame game = make_game(spec);
  const std::size_t n = game.n_players();
  ExperimentResult result;
  result.x_star = solve_equilibrium(game);
  result.x_star_norm =
      std::sqrt(simd::active().dot(result.x_star.data(), result.x_star.data(), n));

  Vec x0(n, spec.x0_value);
  if (!game.box().contains(x0)) throw InvalidArgument("experiment: x0 outside the box");

  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>({n_threads, unsigned(spec.trials), 64});

  for (const auto& [name, cfg] : spec.seekers) {
    SeekerOutput out;
    std::vector<RunResult> runs(spec.trials);
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(n_threads);
    auto worker = [&](unsigned tid) {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= spec.trials) return;
        try {
          runs[t] = run_seeker(game, cfg, spec.noise, x0, spec.budget, spec.accounting,
                               RngStream(spec.base_seed, t), result.x_star);
        } catch (const std::exception& e) {
          errors[tid] = "seeker '" + name + "' trial " + std::to_string(t) + ": " + e.what();
          next.store(spec.trials);
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned tid = 1; tid < n_threads; ++tid) pool.emplace_back(worker, tid);
    worker(0);
    for (auto& th : pool) th.join();
    for (const auto& msg : errors)
      if (!msg.empty()) throw std::runtime_error("experiment aborted: " + msg);

    // deterministic sampling makes every trial share the iteration structure
    out.structure = runs[0].trace;
    for (std::size_t t = 1; t < spec.trials; ++t) {
      if (runs[t].trace.size() != out.structure.size())
        throw std::runtime_error("experiment: trial structures diverged for '" + name + "'");
    }
    out.trial_abs_error.resize(spec.trials);
    for (std::size_t t = 0; t < spec.trials; ++t) {
      out.trial_abs_error[t].resize(runs[t].trace.size());
      for (std::size_t j = 0; j < runs[t].trace.size(); ++j)
        out.trial_abs_error[t][j] = runs[t].trace[j].abs_error;
      out.beta_condition_warning |= runs[t].beta_condition_warning;
      out.theory_invalid_iters = std::max(out.theory_invalid_iters,
                                          runs[t].theory_invalid_iters);
    }
    out.by_iterations = aggregate_iterations(out, spec.error_kind, result.x_star_norm);
    out.by_samples = aggregate_samples(out, spec.error_kind, result.x_star_norm, spec.budget);
    result.seekers.emplace_back(name, std::move(out));
  }
  return result;
}

ExperimentSpec figure_preset(int fig) {
  if (fig < 1 || fig > 4) throw InvalidArgument("figure preset must be 1..4");
  ExperimentSpec spec;
  spec.game_id = "benchmark15";
  spec.budget = 100000;
  spec.trials = 20;
  spec.error_kind = ErrorKind::relative;

  const bool symmetric = fig <= 2;
  const double alpha = fig == 2 ? 1.2 : 1.8;
  // certified moment order: 1.5 where finite, below the tail index otherwise
  const double delta = fig == 2 ? 1.1 : 1.5;
  spec.noise = symmetric ? NoiseModel::sym_pareto(alpha) : NoiseModel::shift_pareto(alpha);
  spec.noise = spec.noise.certified(delta);

  Schedules base;  // alpha_k = 1/(k+1), tau_k = 20 (k+1)^0.2
  Schedules sgda = base;
  sgda.fixed_step = 0.005;

  Schedules mom_growing = base;
  mom_growing.sample_beta = symmetric ? 1.0 : (fig == 3 ? 2.1 : 3.0);

  Schedules mom_fixed = base;
  mom_fixed.fixed_m = 20;

  spec.seekers.emplace_back("gc_sun", SeekerConfig{Algorithm::gc_sun, base, {}});
  spec.seekers.emplace_back("clipped_sgda", SeekerConfig{Algorithm::clipped_sgda, sgda, {}});
  spec.seekers.emplace_back("clipped_seg", SeekerConfig{Algorithm::clipped_seg, sgda, {}});
  spec.seekers.emplace_back("mom", SeekerConfig{Algorithm::mom, mom_growing, {}});
  spec.seekers.emplace_back("mom_fixed", SeekerConfig{Algorithm::mom, mom_fixed, {}});
  if (!symmetric) {
    Schedules bc = mom_growing;  // eta_k = (k+1)^-0.1
    bc.eta0 = 1.0;
    bc.rho = 0.1;
    spec.seekers.emplace_back("mom_bc", SeekerConfig{Algorithm::mom_bc, bc, {}});
  }
  return spec;
}

// ---- persistence ---------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_curve_csv(const AggregateCurve& curve, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "axis,grid,mean_error,median_error,trials\n";
  for (std::size_t j = 0; j < curve.grid.size(); ++j) {
    f << curve.axis << ',' << curve.grid[j] << ',' << fmt_double(curve.mean_error[j]) << ','
      << fmt_double(curve.median_error[j]) << ',' << curve.trials << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

AggregateCurve read_curve_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty csv: " + path);
  if (line != "axis,grid,mean_error,median_error,trials")
    throw std::runtime_error("unexpected csv header in " + path);
  AggregateCurve curve;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string axis, grid, mean, med, trials;
    if (!std::getline(ss, axis, ',') || !std::getline(ss, grid, ',') ||
        !std::getline(ss, mean, ',') || !std::getline(ss, med, ',') ||
        !std::getline(ss, trials, ','))
      throw std::runtime_error("malformed csv row in " + path);
    curve.axis = axis;
    curve.grid.push_back(std::stoull(grid));
    curve.mean_error.push_back(std::stod(mean));
    curve.median_error.push_back(std::stod(med));
    curve.trials = std::stoull(trials);
  }
  return curve;
}

void write_trials_csv(const SeekerOutput& out, double x_star_norm, const std::string& path,
                      std::size_t max_rows_per_trial) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "trial,k,samples,abs_error,rel_error,sq_error\n";
  const std::size_t rows = out.structure.size();
  const std::size_t stride = rows <= max_rows_per_trial ? 1 : (rows + max_rows_per_trial - 1) / max_rows_per_trial;
  for (std::size_t t = 0; t < out.trial_abs_error.size(); ++t) {
    for (std::size_t j = 0; j < rows; j += stride) {
      const std::size_t jj = std::min(j, rows - 1);
      const double abs = out.trial_abs_error[t][jj];
      const double rel = x_star_norm > 0.0 ? abs / x_star_norm : abs;
      f << t << ',' << out.structure[jj].k << ',' << out.structure[jj].samples << ','
        << fmt_double(abs) << ',' << fmt_double(rel) << ',' << fmt_double(abs * abs) << '\n';
    }
    // always include the final record
    if (stride > 1 && (rows - 1) % stride != 0) {
      const std::size_t jj = rows - 1;
      const double abs = out.trial_abs_error[t][jj];
      const double rel = x_star_norm > 0.0 ? abs / x_star_norm : abs;
      f << t << ',' << out.structure[jj].k << ',' << out.structure[jj].samples << ','
        << fmt_double(abs) << ',' << fmt_double(rel) << ',' << fmt_double(abs * abs) << '\n';
    }
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_metadata(const ExperimentSpec& spec, const ExperimentResult& result,
                    const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "game_id=" << spec.game_id << '\n';
  f << "n_players=" << spec.n_players << '\n';
  if (spec.game_id == "diag") {
    f << "diag_a=" << fmt_double(spec.diag_a) << '\n';
    f << "diag_r=" << fmt_double(spec.diag_r) << '\n';
  }
  f << "noise_kind=" << to_string(spec.noise.kind) << '\n';
  f << "noise_alpha=" << fmt_double(spec.noise.alpha) << '\n';
  f << "noise_sigma=" << fmt_double(spec.noise.sigma) << '\n';
  f << "noise_delta=" << fmt_double(spec.noise.delta) << '\n';
  f << "noise_nu=" << fmt_double(spec.noise.nu) << '\n';
  f << "budget=" << spec.budget << '\n';
  f << "trials=" << spec.trials << '\n';
  f << "base_seed=" << spec.base_seed << '\n';
  f << "accounting=" << to_string(spec.accounting) << '\n';
  f << "error_kind=" << to_string(spec.error_kind) << '\n';
  f << "x0=" << fmt_double(spec.x0_value) << '\n';
  f << "x_star_norm=" << fmt_double(result.x_star_norm) << '\n';
  for (std::size_t s = 0; s < spec.seekers.size(); ++s) {
    const auto& [name, cfg] = spec.seekers[s];
    const std::string p = name + ".";
    f << p << "algorithm=" << to_string(cfg.algorithm) << '\n';
    f << p << "step_a=" << fmt_double(cfg.schedules.step_a) << '\n';
    f << p << "step_b=" << fmt_double(cfg.schedules.step_b) << '\n';
    f << p << "sample_beta=" << fmt_double(cfg.schedules.sample_beta) << '\n';
    f << p << "sample_c=" << cfg.schedules.sample_c << '\n';
    f << p << "conf_exponent=" << fmt_double(cfg.schedules.conf_exponent) << '\n';
    f << p << "eta0=" << fmt_double(cfg.schedules.eta0) << '\n';
    f << p << "rho=" << fmt_double(cfg.schedules.rho) << '\n';
    f << p << "clip_tau0=" << fmt_double(cfg.schedules.clip_tau0) << '\n';
    f << p << "clip_p=" << fmt_double(cfg.schedules.clip_p) << '\n';
    if (cfg.schedules.fixed_m) f << p << "fixed_m=" << *cfg.schedules.fixed_m << '\n';
    if (cfg.schedules.fixed_step)
      f << p << "fixed_step=" << fmt_double(*cfg.schedules.fixed_step) << '\n';
    f << p << "corruption_mode="
      << (cfg.corruption.mode == CorruptionMode::none          ? "none"
          : cfg.corruption.mode == CorruptionMode::fixed_count ? "fixed_count"
          : cfg.corruption.mode == CorruptionMode::half_blocks ? "half_blocks"
                                                               : "probabilistic")
      << '\n';
    if (cfg.corruption.mode == CorruptionMode::fixed_count)
      f << p << "corruption_blocks=" << cfg.corruption.c_blocks << '\n';
    if (cfg.corruption.mode == CorruptionMode::probabilistic)
      f << p << "corruption_p=" << fmt_double(cfg.corruption.p) << '\n';
    if (cfg.corruption.mode != CorruptionMode::none)
      f << p << "corruption_magnitude=" << fmt_double(cfg.corruption.magnitude) << '\n';
    // warning flags from the actual runs
    for (const auto& [rname, rout] : result.seekers) {
      if (rname != name) continue;
      f << p << "warn_beta_condition=" << (rout.beta_condition_warning ? "true" : "false")
        << '\n';
      f << p << "theory_invalid_iters=" << rout.theory_invalid_iters << '\n';
    }
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace momnes
