// momnes - Nash equilibrium seeking under heavy-tailed gradient noise.
//
// Subcommands:
//   solve-eq   exact equilibrium and game constants
//   run        one algorithm, multi-trial, CSV output
//   compare    multi-algorithm comparison, CSVs + SVG charts
//   verify     numerical checks: tail | chung | rate

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "momnes/analysis.hpp"
#include "momnes/harness.hpp"
#include "momnes/svg.hpp"

namespace fs = std::filesystem;
using namespace momnes;

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// ---- shared option blocks ----------------------------------------------------

struct GameOpts {
  std::string id = "benchmark15";
  std::size_t n = 15;
  double a = 2.0;
  double r = -2.0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--game", id, "game id: benchmark15|benchmark|diag")
        ->check(CLI::IsMember({"benchmark15", "benchmark", "diag"}));
    cmd.add_option("--n", n, "player count (benchmark/diag)")->check(CLI::PositiveNumber);
    cmd.add_option("--a", a, "diag game: diagonal coefficient");
    cmd.add_option("--r", r, "diag game: offset per player");
  }
  AffineGame build() const { return make_game(id, n, a, r); }
};

struct NoiseOpts {
  std::string kind = "sym-pareto";
  double alpha = 1.8;
  double sigma = 1.0;
  double delta = 0.0;  // 0 = pick a default for the kind

  void add_to(CLI::App& cmd) {
    cmd.add_option("--noise", kind, "noise kind: none|gaussian|sym-pareto|shift-pareto")
        ->check(CLI::IsMember({"none", "gaussian", "sym-pareto", "shift-pareto"}));
    cmd.add_option("--alpha", alpha, "pareto tail index (> 1)")
        ->check(CLI::Range(1.0000001, 1e9));
    cmd.add_option("--sigma", sigma, "gaussian standard deviation")->check(CLI::PositiveNumber);
    cmd.add_option("--delta", delta, "certified moment order in (1,2]")
        ->check(CLI::Range(0.0, 2.0));
  }

  double effective_delta() const {
    if (delta > 0.0) return delta;
    if (kind == "gaussian" || kind == "none") return 2.0;
    return std::min(1.5, (1.0 + alpha) / 2.0);
  }

  NoiseModel build() const {
    NoiseModel m;
    if (kind == "none") m = NoiseModel::none();
    else if (kind == "gaussian") m = NoiseModel::gaussian(sigma);
    else if (kind == "sym-pareto") m = NoiseModel::sym_pareto(alpha);
    else m = NoiseModel::shift_pareto(alpha);
    if (m.kind != NoiseKind::none) m = m.certified(effective_delta());
    return m;
  }
};

struct ScheduleOpts {
  Schedules s;
  double fixed_m = 0.0;     // >0 enables
  double fixed_step = 0.0;  // >0 enables

  void add_to(CLI::App& cmd) {
    cmd.add_option("--step-a", s.step_a, "step exponent a in alpha_k = b (k+1)^-a")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--step-b", s.step_b, "step coefficient b")->check(CLI::PositiveNumber);
    cmd.add_option("--sample-beta", s.sample_beta, "sample growth exponent beta")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--sample-c", s.sample_c, "sample growth coefficient c")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--conf-exponent", s.conf_exponent,
                   "confidence exponent: gamma_k = (k+1)^-e")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--eta0", s.eta0, "bias correction weight eta_0")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--rho", s.rho, "bias correction decay rho")->check(CLI::NonNegativeNumber);
    cmd.add_option("--tau0", s.clip_tau0, "clipping threshold tau_0")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--clip-p", s.clip_p, "clipping growth: tau_k = tau_0 (k+1)^p");
    cmd.add_option("--fixed-m", fixed_m, "fixed per-iteration sample count (overrides beta)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--fixed-step", fixed_step, "constant step for clipped SGDA/SEG");
  }

  Schedules build() const {
    Schedules out = s;
    if (fixed_m > 0.0) out.fixed_m = std::size_t(fixed_m);
    if (fixed_step > 0.0) out.fixed_step = fixed_step;
    return out;
  }
};

struct CorruptionOpts {
  std::string mode = "none";
  std::size_t blocks = 1;
  double p = 0.0;
  double magnitude = 1e9;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--corrupt-mode", mode,
                   "sample corruption: none|fixed-count|half-blocks|probabilistic")
        ->check(CLI::IsMember({"none", "fixed-count", "half-blocks", "probabilistic"}));
    cmd.add_option("--corrupt-blocks", blocks, "blocks corrupted per iteration (fixed-count)");
    cmd.add_option("--corrupt-p", p, "per-sample corruption probability")
        ->check(CLI::Range(0.0, 0.9999999));
    cmd.add_option("--corrupt-magnitude", magnitude, "value injected into corrupted samples");
  }

  CorruptionModel build() const {
    if (mode == "none") return CorruptionModel::none();
    if (mode == "fixed-count") return CorruptionModel::fixed(blocks, magnitude);
    if (mode == "half-blocks") return CorruptionModel::half(magnitude);
    return CorruptionModel::prob(p, magnitude);
  }
};

struct RunOpts {
  std::uint64_t budget = 100000;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::string accounting = "per-player";
  std::string error_kind = "relative";
  double x0 = 0.0;
  unsigned threads = 0;
  std::string out = "out";

  void add_to(CLI::App& cmd) {
    cmd.add_option("--budget", budget, "noisy-gradient sample budget per run")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", seed, "base seed; trial t uses stream (seed, t)");
    cmd.add_option("--accounting", accounting, "budget counts samples per-player|total")
        ->check(CLI::IsMember({"per-player", "total"}));
    cmd.add_option("--error-kind", error_kind, "aggregated error: relative|absolute|squared")
        ->check(CLI::IsMember({"relative", "absolute", "squared"}));
    cmd.add_option("--x0", x0, "initial action, broadcast to all players");
    cmd.add_option("--threads", threads, "worker threads (0 = hardware)");
    cmd.add_option("--out", out, "output directory");
  }

  void fill(ExperimentSpec& spec) const {
    spec.budget = budget;
    spec.trials = trials;
    spec.base_seed = seed;
    spec.accounting = accounting == "total" ? BudgetAccounting::total
                                            : BudgetAccounting::per_player;
    spec.error_kind = parse_error_kind(error_kind);
    spec.x0_value = x0;
  }
};

// Flat "key = value" config support. CLI11 2.x reads config files only at the
// top app level, so file entries are expanded into --key=value tokens placed
// right after the subcommand name; later command-line flags win (TakeLast).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 2 || args[1] == "verify") return args;
  std::string path;
  for (std::size_t i = 2; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      ++i;
    }
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(f, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line without '=': " + line);
    tokens.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
  }
  args.insert(args.begin() + 2, tokens.begin(), tokens.end());
  return args;
}

void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                              const fs::path& dir, bool with_svg) {
  fs::create_directories(dir);
  std::vector<svg::Series> samples_series, iter_series;
  for (const auto& [name, out] : result.seekers) {
    write_curve_csv(out.by_samples, (dir / (name + "_samples.csv")).string());
    write_curve_csv(out.by_iterations, (dir / (name + "_iterations.csv")).string());
    write_trials_csv(out, result.x_star_norm, (dir / (name + "_trials.csv")).string());
    if (with_svg) {
      svg::Series ss{name, {}}, is{name, {}};
      const auto thin = [](const AggregateCurve& c, svg::Series& s) {
        const std::size_t stride = std::max<std::size_t>(1, c.grid.size() / 2000);
        for (std::size_t j = 0; j < c.grid.size(); j += stride)
          s.points.emplace_back(double(c.grid[j]), c.mean_error[j]);
        if ((c.grid.size() - 1) % stride != 0)
          s.points.emplace_back(double(c.grid.back()), c.mean_error.back());
      };
      thin(out.by_samples, ss);
      thin(out.by_iterations, is);
      samples_series.push_back(std::move(ss));
      iter_series.push_back(std::move(is));
    }
  }
  write_metadata(spec, result, (dir / "metadata.txt").string());
  if (with_svg) {
    const std::string err_name = std::string(to_string(spec.error_kind)) + " error";
    svg::write_loglog_chart((dir / "compare_samples.svg").string(),
                            "error vs consumed samples", "cumulative samples", err_name,
                            samples_series);
    svg::write_loglog_chart((dir / "compare_iterations.svg").string(), "error vs iterations",
                            "iteration", err_name, iter_series);
  }
}

// ---- subcommands ---------------------------------------------------------------

int cmd_solve_eq(const GameOpts& game_opts, double tol) {
  const AffineGame game = game_opts.build();
  const Vec x_star = solve_equilibrium(game, tol);
  const GameAnalysis ga = analyze(game);
  std::printf("game: %s (N=%zu)\n", game_opts.id.c_str(), game.n_players());
  std::printf("x* =");
  for (double v : x_star) std::printf(" %.6f", v);
  std::printf("\n");
  std::printf("mu = %.6f\n", ga.mu);
  std::printf("L = %.6f\n", ga.lipschitz);
  std::printf("G = %.6f\n", ga.grad_bound);
  std::printf("D = %.6f\n", ga.diameter_sq);
  return 0;
}

int cmd_run(const GameOpts& g, const NoiseOpts& n, const ScheduleOpts& sch,
            const CorruptionOpts& cor, const RunOpts& run, const std::string& algo,
            unsigned threads) {
  ExperimentSpec spec;
  spec.game_id = g.id;
  spec.n_players = g.n;
  spec.diag_a = g.a;
  spec.diag_r = g.r;
  spec.noise = n.build();
  run.fill(spec);
  SeekerConfig cfg;
  cfg.algorithm = parse_algorithm(algo);
  cfg.schedules = sch.build();
  cfg.corruption = cor.build();
  spec.seekers.emplace_back(algo, cfg);
  const ExperimentResult result = run_experiment(spec, threads);
  write_experiment_outputs(spec, result, run.out, false);
  std::printf("wrote %s/{%s_samples.csv,%s_iterations.csv,%s_trials.csv,metadata.txt}\n",
              run.out.c_str(), algo.c_str(), algo.c_str(), algo.c_str());
  const auto& out = result.seekers.front().second;
  std::printf("final mean %s error: %s\n", to_string(spec.error_kind),
              fmt(out.by_iterations.mean_error.back()).c_str());
  return 0;
}

int cmd_compare(int preset, const NoiseOpts& n, bool noise_set, const RunOpts& run,
                bool corrupt_baselines, const CorruptionOpts& cor, unsigned threads) {
  ExperimentSpec spec = figure_preset(preset);
  if (noise_set) spec.noise = n.build();
  run.fill(spec);
  const CorruptionModel corruption = cor.build();
  if (corruption.active()) {
    for (auto& [name, cfg] : spec.seekers) {
      const bool is_mom = cfg.algorithm == Algorithm::mom || cfg.algorithm == Algorithm::mom_bc;
      if (is_mom || corrupt_baselines) cfg.corruption = corruption;
    }
  }
  const ExperimentResult result = run_experiment(spec, threads);
  write_experiment_outputs(spec, result, run.out, true);
  std::printf("preset fig%d: %zu seekers, %zu trials, budget %llu\n", preset,
              spec.seekers.size(), spec.trials, (unsigned long long)spec.budget);
  for (const auto& [name, out] : result.seekers)
    std::printf("  %-14s final mean %s error %s\n", name.c_str(), to_string(spec.error_kind),
                fmt(out.by_iterations.mean_error.back(), "%.6g").c_str());
  std::printf("wrote CSVs and SVG charts under %s\n", run.out.c_str());
  return 0;
}

int cmd_verify_tail(const GameOpts& g, const NoiseOpts& n, std::size_t m,
                    std::vector<double> gammas, std::size_t trials, std::uint64_t seed,
                    const std::string& out_dir, unsigned threads) {
  const AffineGame game = g.build();
  const NoiseModel noise = n.build();
  if (noise.kind == NoiseKind::none)
    std::printf("note: verifying with noiseless oracle; violations are impossible\n");
  const double scale = std::fabs(game.noise_gradient_scale());
  const double nu_grad =
      noise.kind == NoiseKind::none ? 1.0 : scale * noise.nu;
  const auto params = ThresholdParams::from(noise.kind == NoiseKind::none ? 2.0 : noise.delta,
                                            nu_grad);
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / "verify_tail.csv").string();
  std::ofstream f(path);
  f << "noise,alpha,sigma,delta,nu_gradient,m,gamma,threshold,estimates,violations,"
       "violation_rate,bound,slack,pass\n";
  bool all_pass = true;
  const Vec x(game.n_players(), 0.0);
  for (double gamma : gammas) {
    const auto res = tail_bound_test(game, x, noise, params, m, gamma, trials,
                                     RngStream(seed, 0), threads);
    all_pass &= res.pass;
    f << to_string(noise.kind) << ',' << fmt(noise.alpha) << ',' << fmt(noise.sigma) << ','
      << fmt(params.delta) << ',' << fmt(params.nu) << ',' << m << ',' << fmt(gamma) << ','
      << fmt(res.threshold) << ',' << res.trials << ',' << res.violations << ','
      << fmt(res.violation_rate) << ',' << fmt(res.bound) << ',' << fmt(res.slack) << ','
      << (res.pass ? "true" : "false") << '\n';
    std::printf("tail gamma=%g: violation rate %.6g vs bound %.4g+%.4g -> %s\n", gamma,
                res.violation_rate, res.bound, res.slack, res.pass ? "PASS" : "FAIL");
  }
  std::printf("wrote %s\n", path.c_str());
  return all_pass ? 0 : 1;
}

int cmd_verify_chung(double r, double p, double tau, double d, double y0, std::size_t k0,
                     double horizon, const std::string& out_dir) {
  ChungInstance inst{r, p, d, tau, k0, y0};
  const auto res = chung_oracle(inst, std::size_t(horizon));
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / "verify_chung.csv").string();
  std::ofstream f(path);
  f << "r,p,d,tau,k0,y0,horizon,certified,onset_K,bound_A\n";
  f << fmt(r) << ',' << fmt(p) << ',' << fmt(d) << ',' << fmt(tau) << ',' << k0 << ','
    << fmt(y0) << ',' << std::size_t(horizon) << ',' << (res.cert.valid ? "true" : "false")
    << ',' << res.cert.onset << ',' << fmt(res.cert.bound_const) << '\n';
  if (res.cert.valid)
    std::printf("chung certificate: Y_k <= %.6g (ln k)^%g / k^%g for k in [%zu, %zu]\n",
                res.cert.bound_const, tau, p, res.cert.onset, std::size_t(horizon));
  else
    std::printf("chung certificate: none found up to horizon %zu\n", std::size_t(horizon));
  std::printf("wrote %s\n", path.c_str());
  return res.cert.valid ? 0 : 1;
}

int cmd_verify_rate(const std::string& from, double delta, double beta, double rho,
                    double zeta, bool bias_branch, double window, const std::string& input,
                    const std::string& out_dir) {
  const AggregateCurve curve = read_curve_csv(from);
  std::vector<CurvePoint> points;
  for (std::size_t j = 0; j < curve.grid.size(); ++j) {
    double v = curve.mean_error[j];
    if (input != "squared") v = v * v;  // absolute or relative: square it
    points.push_back({double(curve.grid[j]), v});
  }
  EnvelopeParams params{delta, beta, rho, zeta, bias_branch};
  const RateEnvelope env = fit_envelope(points, params, window);
  const double slope = fit_loglog_slope(points, 0.1);
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / "verify_rate.csv").string();
  std::ofstream f(path);
  f << "from,delta,beta,rho,zeta,window,fitted_A,k_start,ratio_slope,loglog_slope_decade,"
       "satisfied\n";
  f << from << ',' << fmt(delta) << ',' << fmt(beta) << ',' << fmt(rho) << ',' << fmt(zeta)
    << ',' << fmt(window) << ',' << fmt(env.fitted_A) << ',' << fmt(env.k_start) << ','
    << fmt(env.ratio_slope) << ',' << fmt(slope) << ',' << (env.satisfied ? "true" : "false")
    << '\n';
  std::printf("envelope fit: A=%.6g onset k=%.0f ratio slope %.4f -> %s\n", env.fitted_A,
              env.k_start, env.ratio_slope, env.satisfied ? "PASS" : "FAIL");
  std::printf("log-log slope over the final decade: %.4f\n", slope);
  std::printf("wrote %s\n", path.c_str());
  return env.satisfied ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash equilibrium seeking under heavy-tailed gradient noise"};
  app.require_subcommand(1);

  // solve-eq
  auto* solve = app.add_subcommand("solve-eq", "solve the equilibrium and print constants");
  solve->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  GameOpts solve_game;
  double solve_tol = 1e-10;
  solve_game.add_to(*solve);
  solve->add_option("--tol", solve_tol, "equilibrium tolerance")->check(CLI::PositiveNumber);
  std::string cfg_note;
  solve->add_option("--config", cfg_note, "flat key=value config file");

  // run
  auto* run = app.add_subcommand("run", "run one algorithm, write CSVs");
  run->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  GameOpts run_game;
  NoiseOpts run_noise;
  ScheduleOpts run_sched;
  CorruptionOpts run_cor;
  RunOpts run_run;
  std::string run_algo = "mom";
  run_game.add_to(*run);
  run_noise.add_to(*run);
  run_sched.add_to(*run);
  run_cor.add_to(*run);
  run_run.add_to(*run);
  run->add_option("--algo", run_algo, "mom|mom_bc|gc_sun|clipped_sgda|clipped_seg")
      ->check(CLI::IsMember({"mom", "mom_bc", "gc_sun", "clipped_sgda", "clipped_seg"}));
  run->add_option("--config", cfg_note, "flat key=value config file");

  // compare
  auto* cmp = app.add_subcommand("compare", "multi-algorithm comparison, CSVs + SVGs");
  cmp->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  int cmp_preset = 1;
  NoiseOpts cmp_noise;
  RunOpts cmp_run;
  CorruptionOpts cmp_cor;
  bool cmp_corrupt_baselines = false;
  cmp->add_option("--preset", cmp_preset, "figure preset 1..4")->check(CLI::Range(1, 4));
  cmp_noise.add_to(*cmp);
  cmp_run.add_to(*cmp);
  cmp_cor.add_to(*cmp);
  cmp->add_flag("--corrupt-baselines", cmp_corrupt_baselines,
                "apply corruption to the clipping baselines too");
  cmp->add_option("--config", cfg_note, "flat key=value config file");

  // verify
  auto* verify = app.add_subcommand("verify", "numerical verification of the theory");
  verify->require_subcommand(1);

  auto* vtail = verify->add_subcommand("tail", "empirical deviation-bound check");
  GameOpts vt_game;
  NoiseOpts vt_noise;
  std::size_t vt_m = 200, vt_trials = 100000;
  std::vector<double> vt_gammas{0.05};
  std::uint64_t vt_seed = 1;
  std::string vt_out = "out";
  unsigned vt_threads = 0;
  vt_game.add_to(*vtail);
  vt_noise.add_to(*vtail);
  vtail->add_option("--m", vt_m, "samples per estimate")->check(CLI::PositiveNumber);
  vtail->add_option("--gamma", vt_gammas, "confidence level(s)")
      ->check(CLI::Range(1e-12, 0.49999));
  vtail->add_option("--trials", vt_trials, "estimates per player")
      ->check(CLI::Range(std::size_t(1000), std::size_t(100000000)));
  vtail->add_option("--seed", vt_seed, "rng seed");
  vtail->add_option("--out", vt_out, "output directory");
  vtail->add_option("--threads", vt_threads, "worker threads (0 = hardware)");

  auto* vchung = verify->add_subcommand("chung", "log-factor recursion certificate");
  double vc_r = 2.0, vc_p = 1.0, vc_tau = 0.0, vc_d = 1.0, vc_y0 = 1.0, vc_horizon = 1e6;
  std::size_t vc_k0 = 2;
  std::string vc_out = "out";
  vchung->add_option("--r", vc_r, "contraction coefficient r");
  vchung->add_option("--p", vc_p, "target decay exponent p");
  vchung->add_option("--tau", vc_tau, "log factor exponent tau");
  vchung->add_option("--d", vc_d, "forcing coefficient d");
  vchung->add_option("--y0", vc_y0, "initial value");
  vchung->add_option("--k0", vc_k0, "initial index")->check(CLI::PositiveNumber);
  vchung->add_option("--horizon", vc_horizon, "simulation horizon");
  vchung->add_option("--out", vc_out, "output directory");

  auto* vrate = verify->add_subcommand("rate", "envelope fit on a saved error curve");
  std::string vr_from, vr_input = "relative", vr_out = "out";
  double vr_delta = 2.0, vr_beta = 1.0, vr_rho = 0.0, vr_zeta = 0.0, vr_window = 0.5;
  bool vr_bias = false;
  vrate->add_option("--from", vr_from, "curve CSV (iterations axis)")
      ->required()
      ->check(CLI::ExistingFile);
  vrate->add_option("--delta", vr_delta, "moment order")->check(CLI::Range(1.0000001, 2.0));
  vrate->add_option("--beta", vr_beta, "sample growth exponent")->check(CLI::PositiveNumber);
  vrate->add_option("--rho", vr_rho, "bias correction decay");
  vrate->add_option("--zeta", vr_zeta, "mean concentration exponent");
  vrate->add_flag("--bias-branch", vr_bias, "include the bias-correction branch");
  vrate->add_option("--window", vr_window, "fit window as fraction of max k")
      ->check(CLI::Range(1e-6, 1.0));
  vrate->add_option("--input", vr_input, "curve error kind: squared|absolute|relative")
      ->check(CLI::IsMember({"squared", "absolute", "relative"}));
  vrate->add_option("--out", vr_out, "output directory");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  std::vector<char*> argp;
  argp.reserve(args.size());
  for (auto& a : args) argp.push_back(a.data());
  CLI11_PARSE(app, int(argp.size()), argp.data());

  try {
    if (solve->parsed()) return cmd_solve_eq(solve_game, solve_tol);
    if (run->parsed())
      return cmd_run(run_game, run_noise, run_sched, run_cor, run_run, run_algo,
                     run_run.threads);
    if (cmp->parsed())
      return cmd_compare(cmp_preset, cmp_noise, cmp->count("--noise") > 0, cmp_run,
                         cmp_corrupt_baselines, cmp_cor, cmp_run.threads);
    if (vtail->parsed())
      return cmd_verify_tail(vt_game, vt_noise, vt_m, vt_gammas, vt_trials, vt_seed, vt_out,
                             vt_threads);
    if (vchung->parsed())
      return cmd_verify_chung(vc_r, vc_p, vc_tau, vc_d, vc_y0, vc_k0, vc_horizon, vc_out);
    if (vrate->parsed())
      return cmd_verify_rate(vr_from, vr_delta, vr_beta, vr_rho, vr_zeta, vr_bias, vr_window,
                             vr_input, vr_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
