#include <doctest.h>

#include <cmath>

#include "momnes/game.hpp"
#include "momnes/noise.hpp"
#include "momnes/simd.hpp"

using namespace momnes;

namespace {

// published equilibrium of the 15-player benchmark
const Vec kEquilibrium{0.1292, 0.2523, 0.3697, 0.4817, 0.5887, 0.6911, 0.7891, 0.8831,
                       0.9732, 1.0597, 1.1428, 1.2227, 1.2996, 1.3737, 1.4450};

Vec random_profile(RngStream& rng, const BoxConstraint& box) {
  Vec x(box.dim());
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * rng.next_unit();
  return x;
}

double norm2(ConstSpan v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// independent check of the spectral norm: power iteration on A^T A
double power_iteration_lipschitz(const AffineGame& g) {
  const std::size_t n = g.n_players();
  const Vec& a = g.matrix();
  Vec v(n, 1.0), av(n), atav(n);
  double lambda = 0.0;
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * v[j];
      av[i] = s;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += a[i * n + j] * av[i];
      atav[j] = s;
    }
    const double nrm = norm2(atav);
    lambda = nrm;
    for (std::size_t j = 0; j < n; ++j) v[j] = atav[j] / nrm;
  }
  return std::sqrt(lambda);
}

}  // namespace

TEST_CASE("box validation and construction") {
  CHECK_THROWS_AS(BoxConstraint(Vec{1.0}, Vec{0.0}), InvalidArgument);
  CHECK_THROWS_AS(BoxConstraint(Vec{1.0}, Vec{1.0, 2.0}), InvalidArgument);
  const BoxConstraint box = BoxConstraint::uniform(3, 0.0, 5.0);
  CHECK(box.dim() == 3);
  CHECK(box.diameter_sq() == 75.0);
  CHECK(box.contains(Vec{0.0, 2.5, 5.0}));
  CHECK_FALSE(box.contains(Vec{-0.1, 2.5, 5.0}));
}

TEST_CASE("projection clamps componentwise") {
  const BoxConstraint box = BoxConstraint::uniform(1, 0.0, 5.0);
  CHECK(project(Vec{6.0}, box) == Vec{5.0});
  CHECK(project(Vec{-1.0}, box) == Vec{0.0});
  CHECK(project(Vec{3.0}, box) == Vec{3.0});
  Vec out(2);
  CHECK_THROWS_AS(project(Vec{1.0, 2.0, 3.0}, box, out), InvalidArgument);
}

TEST_CASE("projection is idempotent and nonexpansive") {
  RngStream rng(31, 0);
  const BoxConstraint box = BoxConstraint::uniform(8, -1.0, 2.0);
  for (int c = 0; c < 1000; ++c) {
    Vec x(8), y(8);
    for (std::size_t i = 0; i < 8; ++i) {
      x[i] = -6.0 + 12.0 * rng.next_unit();
      y[i] = -6.0 + 12.0 * rng.next_unit();
    }
    const Vec px = project(x, box), py = project(y, box);
    CHECK(project(px, box) == px);
    Vec dx(8), dy(8);
    for (std::size_t i = 0; i < 8; ++i) {
      dx[i] = px[i] - py[i];
      dy[i] = x[i] - y[i];
    }
    CHECK(norm2(dx) <= norm2(dy) + 1e-12);
  }
}

TEST_CASE("benchmark game coefficients expand the cost gradient") {
  const AffineGame g = benchmark_game(15);
  CHECK(g.matrix()[0] == doctest::Approx(2.1).epsilon(1e-15));   // A_11
  CHECK(g.matrix()[1] == doctest::Approx(0.05).epsilon(1e-15));  // A_12
  CHECK(g.matrix()[15] == doctest::Approx(0.1).epsilon(1e-15));  // A_21
  Vec f(15);
  g.mean_gradient(Vec(15, 0.0), f);
  for (std::size_t i = 0; i < 15; ++i)
    CHECK(f[i] == doctest::Approx(-0.9 * double(i + 1)).epsilon(1e-15));
  CHECK(g.noise_gradient_scale() == 2.0);
}

TEST_CASE("equilibrium of the benchmark matches the published vector") {
  const AffineGame g = benchmark_game(15);
  const Vec x_star = solve_equilibrium(g);
  REQUIRE(x_star.size() == 15);
  for (std::size_t i = 0; i < 15; ++i)
    CHECK(std::fabs(x_star[i] - kEquilibrium[i]) <= 5e-4);
  Vec f(15);
  g.mean_gradient(x_star, f);
  CHECK(norm2(f) < 1e-8);  // interior equilibrium: F(x*) = 0
}

TEST_CASE("decoupled quadratic game solves to all ones") {
  const AffineGame g = diag_game(4, 2.0, -2.0);
  CHECK(solve_equilibrium(g) == Vec{1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("binding lower bound comes out of the projected fixed point") {
  // A = I, r = +1: unconstrained solution -1 clamps to 0
  const AffineGame g = diag_game(1, 1.0, 1.0);
  const Vec x_star = solve_equilibrium(g, 1e-12);
  CHECK(std::fabs(x_star[0]) <= 1e-10);
  // KKT at the lower bound: the gradient pushes outward (positive)
  Vec f(1);
  g.mean_gradient(x_star, f);
  CHECK(f[0] > 0.0);
}

TEST_CASE("binding upper bound pushes the gradient the other way") {
  // A = I, r = -10: unconstrained solution 10 clamps to 5, F(5) = -5 < 0
  const AffineGame g = diag_game(2, 1.0, -10.0);
  const Vec x_star = solve_equilibrium(g, 1e-12);
  Vec f(2);
  g.mean_gradient(x_star, f);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(x_star[i] == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(f[i] < 0.0);
  }
}

TEST_CASE("componentwise optimality at the solved equilibrium") {
  const AffineGame g = benchmark_game(15);
  const Vec x_star = solve_equilibrium(g);
  Vec f(15);
  g.mean_gradient(x_star, f);
  for (std::size_t i = 0; i < 15; ++i) {
    const bool interior = x_star[i] > 1e-9 && x_star[i] < 5.0 - 1e-9;
    if (interior) CHECK(std::fabs(f[i]) < 1e-8);
  }
}

TEST_CASE("non positive definite games are rejected") {
  const AffineGame g = diag_game(2, -1.0, 0.0);
  CHECK_THROWS_AS(solve_equilibrium(g), InvalidArgument);
  CHECK_THROWS_AS(analyze(g), InvalidArgument);
}

TEST_CASE("analysis constants for the benchmark game") {
  const AffineGame g = benchmark_game(15);
  const GameAnalysis ga = analyze(g);
  CHECK(std::fabs(ga.mu - 1.8166) <= 1e-3);
  CHECK(ga.mu <= ga.lipschitz);
  CHECK(ga.lipschitz == doctest::Approx(power_iteration_lipschitz(g)).epsilon(1e-9));
  CHECK(ga.diameter_sq == doctest::Approx(15.0 * 25.0).epsilon(1e-12));
  // the gradient norm peaks at a corner; sampling the box never beats it
  RngStream rng(32, 0);
  Vec f(15);
  for (int c = 0; c < 500; ++c) {
    const Vec x = random_profile(rng, g.box());
    g.mean_gradient(x, f);
    REQUIRE(norm2(f) <= ga.grad_bound + 1e-9);
  }
}

TEST_CASE("scalar matrix game has mu = lipschitz = the coefficient") {
  const GameAnalysis ga = analyze(diag_game(5, 2.0, -2.0));
  CHECK(ga.mu == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ga.lipschitz == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("strong monotonicity and Lipschitz hold at the analyzed constants") {
  const AffineGame g = benchmark_game(15);
  const GameAnalysis ga = analyze(g);
  RngStream rng(33, 0);
  Vec fx(15), fy(15);
  for (int c = 0; c < 1000; ++c) {
    const Vec x = random_profile(rng, g.box());
    const Vec y = random_profile(rng, g.box());
    g.mean_gradient(x, fx);
    g.mean_gradient(y, fy);
    double inner = 0, d2 = 0, df2 = 0;
    for (std::size_t i = 0; i < 15; ++i) {
      const double dx = x[i] - y[i], dg = fx[i] - fy[i];
      inner += dg * dx;
      d2 += dx * dx;
      df2 += dg * dg;
    }
    REQUIRE(inner >= ga.mu * d2 - 1e-9 * (1.0 + d2));
    REQUIRE(std::sqrt(df2) <= ga.lipschitz * std::sqrt(d2) + 1e-9);
  }
}

TEST_CASE("sampled gradients are conditionally unbiased") {
  const AffineGame g = benchmark_game(15);
  const NoiseModel noise = NoiseModel::gaussian(1.0);
  RngStream rng(34, 0);
  const Vec x = random_profile(rng, g.box());
  const std::size_t player = 2;
  const long n = 1000000;
  Vec draws(n);
  draw_noise_batch(noise, rng, draws);
  Vec grads(n);
  g.sample_gradient_batch(player, x, draws, grads);
  const double mean = simd::active().sum(grads.data(), n) / double(n);
  Vec f(15);
  g.mean_gradient(x, f);
  // noise scale 2, sigma 1: the standard error of the mean is 2/sqrt(n)
  CHECK(std::fabs(mean - f[player]) <= 5.0 * 2.0 / std::sqrt(double(n)));
  // batch path equals the per-sample oracle
  for (long j = 0; j < 50; ++j)
    CHECK(grads[j] == g.sample_gradient(player, x, draws[j]));
}
