#pragma once

#include <functional>
#include <optional>

#include "slope/metrics.hpp"

namespace slope {

struct ApgConfig {
  int max_iters = 50000;
  double tol_g = 1e-6;
  double tol_d = 1e-6;
  double lipschitz_init = 0.0;  // <= 0 requests a power-iteration estimate
  double backtrack_up = 2.0;    // > 1

  void validate() const;
};

struct ApgIterRecord {
  int k = 0;
  double obj_primal = 0.0;
  double eta_g = 0.0;
  double eta_d = -1.0;  // negative when the gated check was skipped
  double lipschitz = 0.0;
};

using ApgObserver = std::function<void(const ApgIterRecord&, const Vector& x)>;

/// FISTA on the primal problem with backtracking on the Lipschitz estimate.
/// The dual certificate is y := Ax - b; terminates on the duality-gap and
/// dual-infeasibility tolerances or at max_iters (converged = false).
SolveReport apg_solve(const ProblemData& p, const LambdaSeq& lam, const ApgConfig& cfg,
                      std::optional<Vector> warm = {}, const ApgObserver& observer = {});

}  // namespace slope
