#pragma once

#include "slope/metrics.hpp"
#include "slope/ssn.hpp"

namespace slope {

struct AlmConfig {
  double sigma0 = 0.0;       // <= 0 requests the data-scaled default
  double sigma_growth = 3.0; // > 1
  double sigma_max = 1e6;
  double sigma_min = 1e-6;
  // grow sigma only when the inner solve met its stopping bound and shrink it
  // after a failed inner solve; false keeps the unconditional growth schedule
  bool sigma_adapt = true;
  double eps_a0 = 1.0;       // base of the summable eps_k sequence
  double delta_b0 = 1.0;     // base of the summable delta_k sequence
  double delta_p0 = 1.0;     // base of the vanishing delta'_k sequence
  double eps_decay = 0.5;    // in (0, 1)
  double delta_decay = 0.5;
  double delta_p_decay = 0.5;
  double tol_g = 1e-6;
  double tol_d = 1e-6;
  int max_outer = 100;
  SsnConfig ssn;

  void validate() const;
};

/// sigma0 <= 0 default: max(1, ||A^T b||_inf / lam_1) clamped to [1e-3, 1e3].
double default_sigma0(const ProblemData& p, const LambdaSeq& lam);

/// Bound on ||grad Psi_k(y^{k+1})|| making the three stopping criteria hold:
/// min{eps_k / sqrt(sigma), (delta_k / sqrt(sigma)) dx, (delta'_k / sigma) dx}.
/// When dx = 0 the multiplier is already fixed, so the absolute criterion
/// eps_k / sqrt(sigma) alone applies.
double criteria_bound(int k, double sigma, double dx_norm, const AlmConfig& cfg);

struct AlmIterRecord {
  int k = 0;
  double grad_norm = 0.0;  // ||grad Psi_k(y^{k+1})||
  double dx_norm = 0.0;    // ||x^{k+1} - x^k||
  double eta_g = 0.0;
  double eta_d = 0.0;
  double sigma = 0.0;
  int newton_iters = 0;
  int cg_iters = 0;
  double obj_primal = 0.0;
  bool inner_met_bound = true;
  bool inner_stagnated = false;
};

struct AlmState {
  Vector x;
  Vector y;
  double sigma = 0.0;
  int k = 0;
  std::vector<AlmIterRecord> history;
};

using AlmObserver = std::function<void(const AlmIterRecord&, const AlmState&)>;

/// Newt-ALM: outer augmented Lagrangian iterations on the dual with the
/// semismooth Newton inner solver. Terminates when eta_G <= tol_g and
/// eta_D <= tol_d, or after max_outer iterations (converged = false).
SolveReport alm_solve(const ProblemData& p, const LambdaSeq& lam, const AlmConfig& cfg,
                      std::optional<std::pair<Vector, Vector>> warm = {},
                      const AlmObserver& observer = {});

}  // namespace slope
