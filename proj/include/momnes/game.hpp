#pragma once

#include <memory>

#include "momnes/common.hpp"

namespace momnes {

// Box action space: the product of per-player intervals [lower_i, upper_i].
struct BoxConstraint {
  Vec lower;
  Vec upper;

  BoxConstraint() = default;
  BoxConstraint(Vec lo, Vec hi);
  static BoxConstraint uniform(std::size_t n, double lo, double hi);

  std::size_t dim() const { return lower.size(); }
  bool contains(ConstSpan x, double tol = 0.0) const;
  double diameter_sq() const;  // ||upper - lower||^2
};

// Euclidean projection onto the box = componentwise clamp.
void project(ConstSpan x, const BoxConstraint& box, MutSpan out);
Vec project(Vec x, const BoxConstraint& box);

// Stochastic game seen through its pseudo-gradient oracle. Player actions are
// scalar; the pseudo-gradient stacks each player's partial derivative of its
// own expected cost. sample_gradient must be conditionally unbiased:
// E_xi[sample_gradient(i, x, xi)] = mean_gradient(x)[i].
class Game {
 public:
  virtual ~Game() = default;

  virtual std::size_t n_players() const = 0;
  virtual const BoxConstraint& box() const = 0;
  virtual void mean_gradient(ConstSpan x, MutSpan out) const = 0;
  virtual double sample_gradient(std::size_t player, ConstSpan x, double xi) const = 0;

  // Per-sample gradients for a batch of noise draws; out[j] corresponds to
  // xi[j]. Default loops over sample_gradient; implementations override with
  // a vectorized path.
  virtual void sample_gradient_batch(std::size_t player, ConstSpan x, ConstSpan xi,
                                     MutSpan out) const;

  // Per-sample gradient noise magnitude relative to the raw draw:
  // sample_gradient(i,x,xi) - mean_gradient(x)[i] = noise_gradient_scale()*xi
  // for the games built here (state-independent noise).
  virtual double noise_gradient_scale() const = 0;
};

// Affine pseudo-gradient F(x) = A x + r with per-sample noise entering each
// player's gradient as noise_scale * xi.
class AffineGame final : public Game {
 public:
  // matrix is row-major n x n. Requires a positive definite symmetric part
  // (checked lazily by solve/analyze, cheap structural checks here).
  AffineGame(std::size_t n, Vec matrix, Vec offset, BoxConstraint box, double noise_scale);

  std::size_t n_players() const override { return n_; }
  const BoxConstraint& box() const override { return box_; }
  void mean_gradient(ConstSpan x, MutSpan out) const override;
  double sample_gradient(std::size_t player, ConstSpan x, double xi) const override;
  void sample_gradient_batch(std::size_t player, ConstSpan x, ConstSpan xi,
                             MutSpan out) const override;
  double noise_gradient_scale() const override { return noise_scale_; }

  double mean_gradient_component(std::size_t player, ConstSpan x) const;
  const Vec& matrix() const { return a_; }  // row-major
  const Vec& offset() const { return r_; }

 private:
  std::size_t n_;
  Vec a_;  // row-major n x n
  Vec r_;
  BoxConstraint box_;
  double noise_scale_;
};

// The 15-player benchmark family: cost
//   f_i(x, xi) = (x_i - 0.5 i)^2 + (0.05 i (sum_j x_j + 2) + 2 xi) x_i
// on [0,5]^N, so A_ii = 2 + 0.1 i, A_ij = 0.05 i, r_i = -0.9 i and the
// per-sample gradient noise is exactly 2 xi.
AffineGame benchmark_game(std::size_t n_players);

// Decoupled quadratic family: A = a I, r = r0 * ones, box [0,5]^N.
AffineGame diag_game(std::size_t n_players, double a, double r0);

// Unique Nash equilibrium of the affine game: direct solve of A x = -r when
// that lands inside the box, otherwise a projected fixed-point iteration
// x <- P(x - theta F(x)) with theta = mu / L^2. Throws if the symmetric part
// is not positive definite or the iteration cap (1e6) is hit.
Vec solve_equilibrium(const AffineGame& game, double tol = 1e-10);

struct GameAnalysis {
  double mu = 0.0;           // strong monotonicity modulus, lambda_min((A+A^T)/2)
  double lipschitz = 0.0;    // spectral norm of A
  double grad_bound = 0.0;   // max ||F(x)|| over the box (exact, at a corner)
  double diameter_sq = 0.0;  // max ||x-y||^2 over the box
};

GameAnalysis analyze(const AffineGame& game);

}  // namespace momnes
