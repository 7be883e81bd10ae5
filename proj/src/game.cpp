#include "momnes/game.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "momnes/simd.hpp"

namespace momnes {

BoxConstraint::BoxConstraint(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size()) throw InvalidArgument("box: bound dimensions differ");
  if (lower.empty()) throw InvalidArgument("box: empty");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) throw InvalidArgument("box: lower > upper");
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw InvalidArgument("box: bounds must be finite (compact set)");
  }
}

BoxConstraint BoxConstraint::uniform(std::size_t n, double lo, double hi) {
  return BoxConstraint(Vec(n, lo), Vec(n, hi));
}

bool BoxConstraint::contains(ConstSpan x, double tol) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  return true;
}

double BoxConstraint::diameter_sq() const {
  return simd::active().l2sq_diff(upper.data(), lower.data(), dim());
}

void project(ConstSpan x, const BoxConstraint& box, MutSpan out) {
  if (x.size() != box.dim() || out.size() != box.dim())
    throw InvalidArgument("project: dimension mismatch");
  simd::active().clamp(x.data(), box.lower.data(), box.upper.data(), out.data(), x.size());
}

Vec project(Vec x, const BoxConstraint& box) {
  project(x, box, x);
  return x;
}

void Game::sample_gradient_batch(std::size_t player, ConstSpan x, ConstSpan xi,
                                 MutSpan out) const {
  for (std::size_t j = 0; j < xi.size(); ++j) out[j] = sample_gradient(player, x, xi[j]);
}

AffineGame::AffineGame(std::size_t n, Vec matrix, Vec offset, BoxConstraint box,
                       double noise_scale)
    : n_(n), a_(std::move(matrix)), r_(std::move(offset)), box_(std::move(box)),
      noise_scale_(noise_scale) {
  if (n_ == 0) throw InvalidArgument("affine game: need at least one player");
  if (a_.size() != n_ * n_ || r_.size() != n_ || box_.dim() != n_)
    throw InvalidArgument("affine game: dimension mismatch");
}

double AffineGame::mean_gradient_component(std::size_t player, ConstSpan x) const {
  return simd::active().dot(a_.data() + player * n_, x.data(), n_) + r_[player];
}

void AffineGame::mean_gradient(ConstSpan x, MutSpan out) const {
  if (x.size() != n_ || out.size() != n_) throw InvalidArgument("mean_gradient: bad dimension");
  for (std::size_t i = 0; i < n_; ++i) out[i] = mean_gradient_component(i, x);
}

double AffineGame::sample_gradient(std::size_t player, ConstSpan x, double xi) const {
  return mean_gradient_component(player, x) + noise_scale_ * xi;
}

void AffineGame::sample_gradient_batch(std::size_t player, ConstSpan x, ConstSpan xi,
                                       MutSpan out) const {
  const double base = mean_gradient_component(player, x);
  simd::active().shift_scale(base, noise_scale_, xi.data(), out.data(), xi.size());
}

AffineGame benchmark_game(std::size_t n) {
  if (n == 0) throw InvalidArgument("benchmark game: need at least one player");
  Vec a(n * n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pid = double(i + 1);
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.05 * pid;
    a[i * n + i] = 2.0 + 0.1 * pid;
    r[i] = -0.9 * pid;
  }
  return AffineGame(n, std::move(a), std::move(r), BoxConstraint::uniform(n, 0.0, 5.0), 2.0);
}

AffineGame diag_game(std::size_t n, double a, double r0) {
  Vec mat(n * n, 0.0), r(n, r0);
  for (std::size_t i = 0; i < n; ++i) mat[i * n + i] = a;
  return AffineGame(n, std::move(mat), std::move(r), BoxConstraint::uniform(n, 0.0, 5.0), 2.0);
}

namespace {

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
as_eigen(const AffineGame& g) {
  const auto n = Eigen::Index(g.n_players());
  return {g.matrix().data(), n, n};
}

double min_symmetric_eigenvalue(const AffineGame& g) {
  const auto a = as_eigen(g);
  const Eigen::MatrixXd sym = 0.5 * (Eigen::MatrixXd(a) + Eigen::MatrixXd(a.transpose()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NoConvergence("eigensolve failed");
  return es.eigenvalues().minCoeff();
}

}  // namespace

Vec solve_equilibrium(const AffineGame& game, double tol) {
  if (!(tol > 0)) throw InvalidArgument("solve_equilibrium: tol must be positive");
  const std::size_t n = game.n_players();
  const double mu = min_symmetric_eigenvalue(game);
  if (!(mu > 0))
    throw InvalidArgument("solve_equilibrium: symmetric part not positive definite");

  const auto a = as_eigen(game);
  const Eigen::Map<const Eigen::VectorXd> r(game.offset().data(), Eigen::Index(n));
  const Eigen::VectorXd unconstrained = Eigen::MatrixXd(a).partialPivLu().solve(-r);

  Vec x(unconstrained.data(), unconstrained.data() + n);
  if (game.box().contains(x)) return x;

  // Equilibrium touches the box: contract with x <- P(x - theta F(x)).
  const double lips = Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(a))
                          .singularValues()(0);
  const double theta = mu / (lips * lips);
  x = project(std::move(x), game.box());
  Vec grad(n), next(n);
  constexpr std::size_t kMaxIter = 1'000'000;
  for (std::size_t it = 0; it < kMaxIter; ++it) {
    game.mean_gradient(x, grad);
    simd::active().project_step(x.data(), grad.data(), theta, game.box().lower.data(),
                                game.box().upper.data(), next.data(), n);
    const double move_sq = simd::active().l2sq_diff(next.data(), x.data(), n);
    x.swap(next);
    if (move_sq < tol * tol) return x;
  }
  throw NoConvergence("solve_equilibrium: projected iteration cap reached");
}

GameAnalysis analyze(const AffineGame& game) {
  const std::size_t n = game.n_players();
  GameAnalysis out;
  out.mu = min_symmetric_eigenvalue(game);
  if (!(out.mu > 0)) throw InvalidArgument("analyze: symmetric part not positive definite");

  const auto a = as_eigen(game);
  out.lipschitz = Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(a)).singularValues()(0);
  out.diameter_sq = game.box().diameter_sq();

  // ||A x + r|| is convex, so its maximum over the box sits at a corner.
  if (n > 26) throw InvalidArgument("analyze: corner enumeration infeasible beyond 26 players");
  const BoxConstraint& box = game.box();
  Vec corner(n);
  double best_sq = 0.0;
  Vec grad(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i)
      corner[i] = (mask >> i) & 1 ? box.upper[i] : box.lower[i];
    game.mean_gradient(corner, grad);
    const double nsq = simd::active().dot(grad.data(), grad.data(), n);
    best_sq = std::max(best_sq, nsq);
  }
  out.grad_bound = std::sqrt(best_sq);
  return out;
}

}  // namespace momnes
