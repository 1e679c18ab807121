#pragma once

#include <cstdint>
#include <utility>

#include "slope/problem.hpp"

namespace slope {

/// Deterministic Gaussian stream (xorshift-seeded Mersenne engine would be
/// stdlib-dependent for the normal draw, so Box-Muller is done by hand).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed);
  double next();
  double uniform();  // in (0, 1)

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
  std::uint64_t next_raw();
};

/// OSCAR penalty weights lam_i = w1 + w2 (n - i), i = 1..n.
LambdaSeq oscar_weights(double w1, double w2, Index n);

/// Synthetic grouped-regression instance: A has N(0, 1/m) entries, x_true has
/// `n_groups` contiguous blocks of identical nonzero values (block g holds the
/// value g+1) over a support of max(n_groups, n/10) leading coordinates, and
/// b = A x_true + noise_sd * gaussian. Deterministic for a fixed seed.
std::pair<ProblemData, Vector> synth_instance(Index m, Index n, Index n_groups,
                                              double noise_sd, std::uint64_t seed);

}  // namespace slope
