#include "slope/synth.hpp"

#include <cmath>

namespace slope {

GaussianStream::GaussianStream(std::uint64_t seed) : state_(seed * 2862933555777941757ULL + 3037000493ULL) {
  // warm up the mixer so adjacent seeds decorrelate
  for (int i = 0; i < 8; ++i) next_raw();
}

std::uint64_t GaussianStream::next_raw() {
  // splitmix64
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double GaussianStream::uniform() {
  return (static_cast<double>(next_raw() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double GaussianStream::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

LambdaSeq oscar_weights(double w1, double w2, Index n) {
  if (n < 1) throw std::invalid_argument("oscar_weights: n must be at least 1");
  if (w1 < 0.0 || w2 < 0.0) {
    throw std::invalid_argument("oscar_weights: weights must be nonnegative");
  }
  if (w1 + w2 <= 0.0) {
    throw std::invalid_argument("oscar_weights: w1 + w2 must be positive");
  }
  Vector lam(n);
  for (Index i = 1; i <= n; ++i) {
    lam[i - 1] = w1 + w2 * static_cast<double>(n - i);
  }
  return LambdaSeq(std::move(lam));
}

std::pair<ProblemData, Vector> synth_instance(Index m, Index n, Index n_groups,
                                              double noise_sd, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("synth_instance: m, n must be positive");
  if (n_groups < 1 || n_groups > n) {
    throw std::invalid_argument("synth_instance: need 1 <= n_groups <= n");
  }
  if (noise_sd < 0.0) throw std::invalid_argument("synth_instance: noise_sd must be >= 0");

  GaussianStream g(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = scale * g.next();
  }

  const Index support = std::max(n_groups, n / 10);
  Vector x_true = Vector::Zero(n);
  for (Index j = 0; j < support; ++j) {
    const Index group = j * n_groups / support;  // contiguous blocks
    x_true[j] = static_cast<double>(group + 1);
  }

  Vector b = a * x_true;
  if (noise_sd > 0.0) {
    for (Index i = 0; i < m; ++i) b[i] += noise_sd * g.next();
  }
  return {ProblemData(DesignMatrix::from_dense(std::move(a)), std::move(b)), std::move(x_true)};
}

}  // namespace slope
