#include "momnes/noise.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace momnes {

const char* to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::none: return "none";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::symmetrized_pareto: return "sym-pareto";
    case NoiseKind::shifted_pareto: return "shift-pareto";
  }
  return "?";
}

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!(sigma > 0)) throw InvalidArgument("gaussian noise needs sigma > 0");
  NoiseModel m;
  m.kind = NoiseKind::gaussian;
  m.sigma = sigma;
  return m;
}

NoiseModel NoiseModel::sym_pareto(double alpha) {
  if (!(alpha > 1)) throw InvalidArgument("pareto noise needs alpha > 1");
  NoiseModel m;
  m.kind = NoiseKind::symmetrized_pareto;
  m.alpha = alpha;
  return m;
}

NoiseModel NoiseModel::shift_pareto(double alpha) {
  if (!(alpha > 1)) throw InvalidArgument("pareto noise needs alpha > 1");
  NoiseModel m;
  m.kind = NoiseKind::shifted_pareto;
  m.alpha = alpha;
  return m;
}

NoiseModel NoiseModel::certified(double delta) const {
  NoiseModel m = *this;
  m.delta = delta;
  m.nu = certify_moment(*this, delta);
  return m;
}

double pareto_from_uniform(double u, double alpha) {
  if (!(alpha > 1)) throw InvalidArgument("pareto tail index must exceed 1");
  return std::pow(u, -1.0 / alpha);
}

double draw_pareto(double alpha, RngStream& rng) {
  return pareto_from_uniform(rng.next_unit_pos(), alpha);
}

double RngStream::next_gaussian() {
  const double u1 = next_unit_pos();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double draw_noise(const NoiseModel& m, RngStream& rng) {
  switch (m.kind) {
    case NoiseKind::none:
      return 0.0;
    case NoiseKind::gaussian:
      return m.sigma * rng.next_gaussian();
    case NoiseKind::symmetrized_pareto: {
      const double z = draw_pareto(m.alpha, rng);
      return rng.next_sign() * (z - pareto_mean(m.alpha));
    }
    case NoiseKind::shifted_pareto:
      return draw_pareto(m.alpha, rng) - pareto_mean(m.alpha);
  }
  return 0.0;
}

void draw_noise_batch(const NoiseModel& m, RngStream& rng, MutSpan out) {
  if (m.kind == NoiseKind::none) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  for (double& v : out) v = draw_noise(m, rng);
}

namespace {

// E|Z - E[Z]|^delta for Z ~ Pareto(alpha), density alpha z^-(alpha+1) on [1,inf).
// Split at the mean; the tail piece decays like z^(delta-alpha-1).
double pareto_centered_moment(double alpha, double delta) {
  using boost::math::quadrature::gauss_kronrod;
  const double m1 = pareto_mean(alpha);
  auto f = [alpha, delta, m1](double z) {
    return std::pow(std::fabs(z - m1), delta) * alpha * std::pow(z, -alpha - 1.0);
  };
  const double head = gauss_kronrod<double, 31>::integrate(f, 1.0, m1, 12, 1e-10);
  const double tail = gauss_kronrod<double, 31>::integrate(
      f, m1, std::numeric_limits<double>::infinity(), 12, 1e-10);
  return head + tail;
}

double gaussian_abs_moment(double sigma, double delta) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [sigma, delta](double x) {
    const double t = x / sigma;
    return 2.0 * std::pow(x, delta) *
           std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  return gauss_kronrod<double, 31>::integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                              12, 1e-10);
}

}  // namespace

double noise_abs_moment(const NoiseModel& m, double delta) {
  if (!(delta > 0 && delta <= 2)) throw InvalidArgument("moment order must be in (0,2]");
  switch (m.kind) {
    case NoiseKind::none:
      return 0.0;
    case NoiseKind::gaussian:
      return gaussian_abs_moment(m.sigma, delta);
    case NoiseKind::symmetrized_pareto:
    case NoiseKind::shifted_pareto:
      // |xi| has the same law for both: the sign flip does not change |Z - E Z|
      if (delta >= m.alpha)
        throw InvalidArgument("moment diverges: delta >= pareto tail index");
      return pareto_centered_moment(m.alpha, delta);
  }
  return 0.0;
}

double certify_moment(const NoiseModel& m, double delta) {
  if (!(delta > 1 && delta <= 2)) throw InvalidArgument("certified order must be in (1,2]");
  return 1.05 * std::pow(noise_abs_moment(m, delta), 1.0 / delta);
}

CorruptionModel CorruptionModel::fixed(std::size_t blocks, double magnitude) {
  CorruptionModel c;
  c.mode = CorruptionMode::fixed_count;
  c.c_blocks = blocks;
  c.magnitude = magnitude;
  return c;
}

CorruptionModel CorruptionModel::half(double magnitude) {
  CorruptionModel c;
  c.mode = CorruptionMode::half_blocks;
  c.magnitude = magnitude;
  return c;
}

CorruptionModel CorruptionModel::prob(double p, double magnitude) {
  if (!(p >= 0 && p < 1)) throw InvalidArgument("corruption probability must be in [0,1)");
  CorruptionModel c;
  c.mode = CorruptionMode::probabilistic;
  c.p = p;
  c.magnitude = magnitude;
  return c;
}

void corrupt(MutSpan samples, const CorruptionModel& m, std::size_t block_size, RngStream& rng) {
  switch (m.mode) {
    case CorruptionMode::none:
      return;
    case CorruptionMode::probabilistic:
      for (double& v : samples)
        if (rng.next_unit() < m.p) v = m.magnitude;
      return;
    case CorruptionMode::fixed_count:
    case CorruptionMode::half_blocks: {
      if (block_size == 0) throw InvalidArgument("corrupt: block_size must be positive");
      const std::size_t n_blocks = samples.size() / block_size;
      std::size_t count = m.c_blocks;
      if (m.mode == CorruptionMode::half_blocks) count = n_blocks >= 1 ? (n_blocks - 1) / 2 : 0;
      else if (count >= n_blocks && count > 0)
        throw InvalidArgument("corrupt: cannot corrupt all blocks");
      if (count == 0) return;
      // partial Fisher-Yates over block indices
      std::vector<std::size_t> idx(n_blocks);
      for (std::size_t i = 0; i < n_blocks; ++i) idx[i] = i;
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + std::size_t(rng.next_u64() % (n_blocks - i));
        std::swap(idx[i], idx[j]);
        double* blk = samples.data() + idx[i] * block_size;
        std::fill(blk, blk + block_size, m.magnitude);
      }
      return;
    }
  }
}

}  // namespace momnes
