#pragma once

#include "slope/problem.hpp"

namespace slope {

/// Signed permutation pi with (pi y)[i] = signs[i] * y[perm[i]] arranging |y|
/// in non-increasing order. Stable: ties keep original index order, and the
/// sign attached to a zero entry is +1.
struct SignedPermutation {
  std::vector<Index> perm;
  std::vector<double> signs;

  Index size() const { return static_cast<Index>(perm.size()); }

  /// pi y (sorted coordinates from original ones)
  Vector apply(const Vector& y) const;
  /// pi^T w = pi^{-1} w (back to original coordinates)
  Vector apply_inverse(const Vector& w) const;
};

SignedPermutation signed_sort(const Vector& y);

/// One constant run [start, end] (inclusive, sorted coordinates) of the
/// monotone-cone QP solution. Entries of a run share the exact pooled value.
struct ProxBlock {
  Index start;
  Index end;
  double value;
};

struct ProxResult {
  Vector x;  // prox value in original coordinates
  std::vector<ProxBlock> blocks;
  SignedPermutation pi;

  /// Expands the block runs into the sorted-coordinate solution vector.
  Vector sorted_x() const;
};

/// Solves min_x 1/2 ||x - w||^2 + lam^T x  s.t.  x1 >= x2 >= ... >= xn >= 0
/// by stack-based pool-adjacent-violators on w - lam; trailing blocks whose
/// pooled value is negative are clamped to exactly 0 and merged.
std::vector<ProxBlock> x_lambda(const Vector& w, const LambdaSeq& lam);

/// Proximal mapping of the sorted-l1 norm: pi^T x_lambda(pi y).
ProxResult prox_sorted_l1(const Vector& y, const LambdaSeq& lam);

/// Prox of sigma * kappa_lambda, i.e. prox_sorted_l1(y, sigma * lam).
ProxResult prox_scaled(const Vector& y, double sigma, const LambdaSeq& lam);

/// Prox of the conjugate via the Moreau identity:
/// (w - Prox_{sigma kappa}(w)) / sigma; the result is the projection of
/// w / sigma onto the dual-norm unit ball C_lambda.
Vector prox_conjugate_scaled(const Vector& w, double sigma, const LambdaSeq& lam);

/// max{0, max_i sum_{j<=i} (|z|_sorted_j - lam_j)}; zero iff z lies in the
/// dual-norm unit ball C_lambda.
double dual_ball_violation(const Vector& z, const LambdaSeq& lam);

}  // namespace slope
