#include "slope/ssn.hpp"

#include <cmath>

namespace slope {

void SsnConfig::validate() const {
  if (!(mu > 0.0 && mu < 0.5)) throw std::invalid_argument("ssn: mu must lie in (0, 1/2)");
  if (!(eta_bar > 0.0 && eta_bar < 1.0)) {
    throw std::invalid_argument("ssn: eta_bar must lie in (0, 1)");
  }
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("ssn: tau must lie in (0, 1]");
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("ssn: backtrack must lie in (0, 1)");
  }
  if (max_newton_iters < 0 || max_linesearch < 1) {
    throw std::invalid_argument("ssn: iteration limits out of range");
  }
}

namespace {

double psi_from_prox(const Vector& y, const Vector& x_k, double sigma, const ProblemData& p,
                     const Vector& prox_x) {
  return 0.5 * y.squaredNorm() + p.b().dot(y) - x_k.squaredNorm() / (2.0 * sigma) +
         prox_x.squaredNorm() / (2.0 * sigma);
}

}  // namespace

double psi_value(const Vector& y, const Vector& x_k, double sigma, const ProblemData& p,
                 const LambdaSeq& lam) {
  if (sigma <= 0.0) throw std::invalid_argument("psi_value: sigma must be positive");
  const Vector w = x_k - sigma * p.A().apply_transpose(y);
  const ProxResult prox = prox_scaled(w, sigma, lam);
  return psi_from_prox(y, x_k, sigma, p, prox.x);
}

std::pair<Vector, ProxResult> grad_psi(const Vector& y, const Vector& x_k, double sigma,
                                       const ProblemData& p, const LambdaSeq& lam) {
  if (sigma <= 0.0) throw std::invalid_argument("grad_psi: sigma must be positive");
  const Vector w = x_k - sigma * p.A().apply_transpose(y);
  ProxResult prox = prox_scaled(w, sigma, lam);
  Vector grad = y + p.b() - p.A().apply(prox.x);
  return {std::move(grad), std::move(prox)};
}

SsnState ssn_solve(const Vector& x_k, double sigma, const Vector& y0,
                   const SsnStopRule& stop, const SsnConfig& cfg, const ProblemData& p,
                   const LambdaSeq& lam) {
  cfg.validate();
  if (sigma <= 0.0) throw std::invalid_argument("ssn_solve: sigma must be positive");

  SsnState st;
  st.y = y0;
  Vector w = x_k - sigma * p.A().apply_transpose(st.y);
  st.prox_cache = prox_scaled(w, sigma, lam);
  st.grad = st.y + p.b() - p.A().apply(st.prox_cache.x);
  st.psi = psi_from_prox(st.y, x_k, sigma, p, st.prox_cache.x);

  const LambdaSeq lam_sigma = lam.scaled(sigma);

  for (int j = 0; j < cfg.max_newton_iters; ++j) {
    const double grad_norm = st.grad.norm();
    st.grad_norm_history.push_back(grad_norm);
    if (grad_norm <= stop(st.prox_cache.x)) {
      st.reached_bound = true;
      return st;
    }

    // Newton direction with inexact forcing on the true residual
    const JacobianFactors factors =
        jacobian_factors(active_partition(st.prox_cache), st.prox_cache.pi);
    const NewtonOperator op =
        assemble_newton_operator(p, factors, sigma, std::nullopt, cfg.newton);
    const double forcing = std::min(cfg.eta_bar, std::pow(grad_norm, 1.0 + cfg.tau));
    NewtonSolveResult sol = solve_newton_system(op, -st.grad, forcing, cfg.newton.cg_maxit);
    st.cg_iters_total += std::max(1, sol.cg_iters);

    double gd = st.grad.dot(sol.d);
    if (gd >= 0.0) {
      // only possible through CG inexactness; tighten, then fall back to
      // steepest descent for this iteration
      sol = solve_newton_system(op, -st.grad, forcing * 1e-4, cfg.newton.cg_maxit);
      st.cg_iters_total += std::max(1, sol.cg_iters);
      gd = st.grad.dot(sol.d);
      if (gd >= 0.0) {
        sol.d = -st.grad;
        gd = -grad_norm * grad_norm;
      }
    }

    // Armijo backtracking; each trial costs one prox since A^T d is hoisted
    const Vector at_d = p.A().apply_transpose(sol.d);
    double alpha = 1.0;
    bool accepted = false;
    Vector w_trial;
    ProxResult prox_trial;
    double psi_trial = 0.0;
    for (int ls = 0; ls < cfg.max_linesearch; ++ls) {
      if (ls > 0) alpha *= cfg.backtrack;
      w_trial = w - (alpha * sigma) * at_d;
      prox_trial = prox_sorted_l1(w_trial, lam_sigma);
      psi_trial = psi_from_prox(st.y + alpha * sol.d, x_k, sigma, p, prox_trial.x);
      if (psi_trial <= st.psi + cfg.mu * alpha * gd) {
        accepted = true;
        break;
      }
    }
    ++st.newton_iters;

    if (!accepted) {
      st.stagnated = true;
      if (psi_trial >= st.psi) return st;  // no usable decrease at all
      // otherwise keep the final shrunken trial before handing back
    }

    st.y += alpha * sol.d;
    w = std::move(w_trial);
    st.prox_cache = std::move(prox_trial);
    st.grad = st.y + p.b() - p.A().apply(st.prox_cache.x);
    st.psi = psi_trial;
    if (st.stagnated) return st;
  }

  const double grad_norm = st.grad.norm();
  st.grad_norm_history.push_back(grad_norm);
  st.reached_bound = grad_norm <= stop(st.prox_cache.x);
  return st;
}

}  // namespace slope
