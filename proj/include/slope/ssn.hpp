#pragma once

#include <functional>

#include "slope/jacobian.hpp"

namespace slope {

struct SsnConfig {
  double mu = 1e-4;        // Armijo slope fraction, in (0, 1/2)
  double eta_bar = 1e-2;   // inexactness cap, in (0, 1)
  double tau = 0.5;        // forcing exponent, in (0, 1]
  double backtrack = 0.5;  // step-halving factor, in (0, 1)
  int max_newton_iters = 50;
  int max_linesearch = 50;
  NewtonSystemConfig newton;

  void validate() const;
};

/// Stop rule supplied by the outer loop: bound on ||grad Psi|| given the
/// tentative multiplier update Prox_{sigma kappa}(x_k - sigma A^T y).
using SsnStopRule = std::function<double(const Vector& x_tentative)>;

struct SsnState {
  Vector y;
  Vector grad;
  ProxResult prox_cache;  // at w = x_k - sigma A^T y for the final y
  double psi = 0.0;
  int newton_iters = 0;
  int cg_iters_total = 0;  // direct solves count as 1
  bool reached_bound = false;
  bool stagnated = false;  // line search exhausted without an Armijo step
  std::vector<double> grad_norm_history;
};

/// Psi_k(y) = 1/2 ||y||^2 + <b, y> - ||x_k||^2 / (2 sigma)
///          + ||Prox_{sigma kappa}(x_k - sigma A^T y)||^2 / (2 sigma)
double psi_value(const Vector& y, const Vector& x_k, double sigma, const ProblemData& p,
                 const LambdaSeq& lam);

/// grad Psi_k(y) = y + b - A Prox_{sigma kappa}(x_k - sigma A^T y); the prox
/// is returned for reuse by Jacobian assembly and the multiplier update.
std::pair<Vector, ProxResult> grad_psi(const Vector& y, const Vector& x_k, double sigma,
                                       const ProblemData& p, const LambdaSeq& lam);

/// Minimizes Psi_k by semismooth Newton steps with inexact forcing
/// ||V d + grad|| <= min{eta_bar, ||grad||^{1+tau}} and Armijo backtracking;
/// stops once ||grad Psi_k|| falls below the stop rule's bound.
SsnState ssn_solve(const Vector& x_k, double sigma, const Vector& y0,
                   const SsnStopRule& stop, const SsnConfig& cfg, const ProblemData& p,
                   const LambdaSeq& lam);

}  // namespace slope
