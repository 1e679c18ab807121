#include "slope/alm.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace slope {

void AlmConfig::validate() const {
  if (sigma_growth <= 1.0) throw std::invalid_argument("alm: sigma_growth must be > 1");
  if (sigma_max <= 0.0) throw std::invalid_argument("alm: sigma_max must be positive");
  if (eps_a0 <= 0.0 || delta_b0 <= 0.0 || delta_p0 <= 0.0) {
    throw std::invalid_argument("alm: tolerance-sequence bases must be positive");
  }
  if (eps_decay <= 0.0 || eps_decay >= 1.0 || delta_decay <= 0.0 || delta_decay >= 1.0 ||
      delta_p_decay <= 0.0 || delta_p_decay >= 1.0) {
    throw std::invalid_argument("alm: decay ratios must lie in (0, 1)");
  }
  if (tol_g <= 0.0 || tol_d <= 0.0) throw std::invalid_argument("alm: tolerances must be positive");
  if (max_outer < 1) throw std::invalid_argument("alm: max_outer must be at least 1");
  ssn.validate();
}

double default_sigma0(const ProblemData& p, const LambdaSeq& lam) {
  const double atb = p.A().apply_transpose(p.b()).lpNorm<Eigen::Infinity>();
  const double lam_max = lam.max();
  double s = 1.0;
  if (lam_max > 0.0) s = std::max(1.0, atb / lam_max);
  return std::min(1e3, std::max(1e-3, s));
}

double criteria_bound(int k, double sigma, double dx_norm, const AlmConfig& cfg) {
  if (sigma <= 0.0) throw std::invalid_argument("criteria_bound: sigma must be positive");
  if (dx_norm < 0.0) throw std::invalid_argument("criteria_bound: dx_norm must be >= 0");
  const double eps_k = cfg.eps_a0 * std::pow(cfg.eps_decay, k);
  const double bound_a = eps_k / std::sqrt(sigma);
  if (dx_norm == 0.0) return bound_a;
  const double delta_k = cfg.delta_b0 * std::pow(cfg.delta_decay, k);
  const double delta_p_k = cfg.delta_p0 * std::pow(cfg.delta_p_decay, k);
  return std::min({bound_a, (delta_k / std::sqrt(sigma)) * dx_norm,
                   (delta_p_k / sigma) * dx_norm});
}

namespace {

void check_finite_state(const Vector& x, const Vector& y, int k) {
  if (x.allFinite() && y.allFinite()) return;
  std::ostringstream msg;
  msg << "alm_solve: non-finite iterate at outer iteration " << k
      << " (|x|_inf=" << x.cwiseAbs().maxCoeff() << ", |y|_inf=" << y.cwiseAbs().maxCoeff()
      << ")";
  throw std::runtime_error(msg.str());
}

}  // namespace

SolveReport alm_solve(const ProblemData& p, const LambdaSeq& lam, const AlmConfig& cfg,
                      std::optional<std::pair<Vector, Vector>> warm,
                      const AlmObserver& observer) {
  cfg.validate();
  if (lam.size() != p.n()) throw std::invalid_argument("alm_solve: lambda length mismatch");

  const auto t0 = std::chrono::steady_clock::now();

  AlmState st;
  st.x = warm ? warm->first : Vector::Zero(p.n());
  st.y = warm ? warm->second : Vector::Zero(p.m());
  if (st.x.size() != p.n() || st.y.size() != p.m()) {
    throw std::invalid_argument("alm_solve: warm-start dimensions mismatch");
  }
  st.sigma = cfg.sigma0 > 0.0 ? cfg.sigma0 : default_sigma0(p, lam);

  SolveReport rep;
  rep.algorithm = Algorithm::NewtAlm;

  for (st.k = 0; st.k < cfg.max_outer; ++st.k) {
    const int k = st.k;
    const double sigma = st.sigma;
    const Vector x_prev = st.x;

    SsnStopRule stop = [&](const Vector& x_tentative) {
      return criteria_bound(k, sigma, (x_tentative - x_prev).norm(), cfg);
    };
    SsnState inner = ssn_solve(x_prev, sigma, st.y, stop, cfg.ssn, p, lam);

    st.y = inner.y;
    st.x = inner.prox_cache.x;  // Prox_{sigma kappa}(x^k - sigma A^T y^{k+1})
    check_finite_state(st.x, st.y, k);

    AlmIterRecord rec;
    rec.k = k;
    rec.grad_norm = inner.grad.norm();
    rec.dx_norm = (st.x - x_prev).norm();
    rec.sigma = sigma;
    rec.newton_iters = inner.newton_iters;
    rec.cg_iters = inner.cg_iters_total;
    rec.obj_primal = objective_primal(st.x, p, lam);
    rec.eta_g = relative_duality_gap(st.x, st.y, p, lam);
    rec.eta_d = dual_infeasibility(st.x, p, lam);
    rec.inner_met_bound = inner.reached_bound;
    rec.inner_stagnated = inner.stagnated;
    st.history.push_back(rec);
    if (observer) observer(rec, st);

    rep.outer_iters = k + 1;
    rep.inner_iters_total += inner.cg_iters_total;

    if (rec.eta_g <= cfg.tol_g && rec.eta_d <= cfg.tol_d) {
      rep.converged = true;
      break;
    }
    if (!cfg.sigma_adapt || inner.reached_bound) {
      st.sigma = std::min(cfg.sigma_max, cfg.sigma_growth * st.sigma);
    } else {
      // the subproblem was too hard at this penalty; back off instead
      st.sigma = std::max(cfg.sigma_min, st.sigma / cfg.sigma_growth);
    }
  }

  rep.x = st.x;
  rep.y = st.y;
  rep.obj_primal = objective_primal(st.x, p, lam);
  rep.obj_dual = objective_dual(st.y, p);
  rep.eta_g = st.history.empty() ? 0.0 : st.history.back().eta_g;
  rep.eta_d = st.history.empty() ? 0.0 : st.history.back().eta_d;
  rep.eta_kkt = kkt_residual(st.x, p, lam);
  rep.nnz999 = nnz999(st.x);
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

}  // namespace slope
