#pragma once

#include <functional>
#include <optional>

#include "slope/metrics.hpp"

namespace slope {

struct AdmmConfig {
  double sigma = 1.0;    // penalty parameter
  double tau = 1.618;    // dual steplength, in (0, (1+sqrt(5))/2)
  int max_iters = 50000;
  double tol_g = 1e-6;
  double tol_d = 1e-6;
  Index dense_max_m = 4000;  // above this the y-update falls back to CG

  void validate() const;
};

struct AdmmWarmStart {
  Vector y;
  Vector xi;
  Vector x;
};

struct AdmmIterRecord {
  int k = 0;
  double obj_primal = 0.0;
  double eta_g = 0.0;
  double eta_d = -1.0;          // negative when the gated check was skipped
  double feasibility = 0.0;     // ||A^T y + xi||
};

using AdmmObserver =
    std::function<void(const AdmmIterRecord&, const Vector& x, const Vector& y, const Vector& xi)>;

/// Semi-proximal ADMM on the equality-constrained dual (zero proximal
/// weights): the y-update solves (I_m + sigma A A^T) y = A(x - sigma xi) - b
/// through a cached Cholesky factorization, the xi-update is the conjugate
/// prox via the Moreau identity, and the multiplier steps with length
/// tau * sigma. Terminates on the gap/infeasibility rule or at max_iters.
SolveReport admm_solve(const ProblemData& p, const LambdaSeq& lam, const AdmmConfig& cfg,
                       std::optional<AdmmWarmStart> warm = {},
                       const AdmmObserver& observer = {});

}  // namespace slope
