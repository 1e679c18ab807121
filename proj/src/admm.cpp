#include "slope/admm.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>
#include <iostream>

#include "slope/sorted_prox.hpp"

namespace slope {

void AdmmConfig::validate() const {
  if (sigma <= 0.0) throw std::invalid_argument("admm: sigma must be positive");
  const double tau_max = 0.5 * (1.0 + std::sqrt(5.0));
  if (tau <= 0.0 || tau >= tau_max) {
    throw std::invalid_argument("admm: tau must lie in (0, (1+sqrt(5))/2)");
  }
  if (max_iters < 1) throw std::invalid_argument("admm: max_iters must be at least 1");
  if (tol_g <= 0.0 || tol_d <= 0.0) {
    throw std::invalid_argument("admm: tolerances must be positive");
  }
}

namespace {

/// y-update system (I_m + sigma A A^T) y = rhs, factored once when m allows
/// a dense Cholesky and solved by plain CG otherwise.
class YUpdateSolver {
 public:
  YUpdateSolver(const ProblemData& p, double sigma, Index dense_max_m)
      : p_(p), sigma_(sigma), direct_(p.m() <= dense_max_m) {
    if (direct_) {
      Matrix v = Matrix::Identity(p.m(), p.m()) + sigma * p.A().gram_row_space();
      llt_.compute(v);
      if (llt_.info() != Eigen::Success) {
        std::cerr << "admm: Cholesky of I + sigma A A^T failed, using CG fallback\n";
        direct_ = false;
      }
    }
  }

  Vector solve(const Vector& rhs) const {
    if (direct_) return llt_.solve(rhs);
    // CG on v + sigma A (A^T v)
    Vector y = Vector::Zero(rhs.size());
    Vector r = rhs;
    Vector q = r;
    double rr = r.squaredNorm();
    const double tol = 1e-12 * std::max(1.0, std::sqrt(rr));
    for (int it = 0; it < 10000 && std::sqrt(rr) > tol; ++it) {
      const Vector vq = q + sigma_ * p_.A().apply(p_.A().apply_transpose(q));
      const double alpha = rr / q.dot(vq);
      y += alpha * q;
      r -= alpha * vq;
      const double rr_new = r.squaredNorm();
      q = r + (rr_new / rr) * q;
      rr = rr_new;
    }
    return y;
  }

 private:
  const ProblemData& p_;
  double sigma_;
  bool direct_;
  Eigen::LLT<Matrix> llt_;
};

}  // namespace

SolveReport admm_solve(const ProblemData& p, const LambdaSeq& lam, const AdmmConfig& cfg,
                       std::optional<AdmmWarmStart> warm, const AdmmObserver& observer) {
  cfg.validate();
  if (lam.size() != p.n()) throw std::invalid_argument("admm_solve: lambda length mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  const double sigma = cfg.sigma;

  Vector x = warm ? std::move(warm->x) : Vector::Zero(p.n());
  Vector xi = warm ? std::move(warm->xi) : Vector::Zero(p.n());
  Vector y = warm ? std::move(warm->y) : Vector::Zero(p.m());
  if (x.size() != p.n() || xi.size() != p.n() || y.size() != p.m()) {
    throw std::invalid_argument("admm_solve: warm-start dimensions mismatch");
  }

  const YUpdateSolver linear(p, sigma, cfg.dense_max_m);

  SolveReport rep;
  rep.algorithm = Algorithm::Admm;

  for (int k = 0; k < cfg.max_iters; ++k) {
    const Vector rhs = p.A().apply(x - sigma * xi) - p.b();
    y = linear.solve(rhs);
    const Vector at_y = p.A().apply_transpose(y);
    const Vector w = x - sigma * at_y;
    xi = prox_conjugate_scaled(w, sigma, lam);
    x -= (cfg.tau * sigma) * (at_y + xi);

    if (!x.allFinite() || !y.allFinite()) {
      throw std::runtime_error("admm_solve: non-finite iterate at iteration " +
                               std::to_string(k));
    }

    rep.outer_iters = k + 1;

    const Vector r = p.A().apply(x) - p.b();
    const double obj_p = 0.5 * r.squaredNorm() + penalty_value(x, lam);
    const double obj_d = -p.b().dot(y) - 0.5 * y.squaredNorm();
    const double eta_g = std::abs(obj_p - obj_d) / std::max(1.0, std::abs(obj_p));
    double eta_d = -1.0;
    if (eta_g <= cfg.tol_g) {
      eta_d = dual_ball_violation(p.A().apply_transpose(r), lam);
      if (eta_d <= cfg.tol_d) rep.converged = true;
    }
    if (observer) {
      AdmmIterRecord rec;
      rec.k = k;
      rec.obj_primal = obj_p;
      rec.eta_g = eta_g;
      rec.eta_d = eta_d;
      rec.feasibility = (at_y + xi).norm();
      observer(rec, x, y, xi);
    }
    if (rep.converged) break;
  }

  rep.x = x;
  rep.y = y;
  rep.obj_primal = objective_primal(x, p, lam);
  rep.obj_dual = objective_dual(y, p);
  rep.eta_g = relative_duality_gap(x, y, p, lam);
  rep.eta_d = dual_infeasibility(x, p, lam);
  rep.eta_kkt = kkt_residual(x, p, lam);
  rep.nnz999 = nnz999(x);
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

}  // namespace slope
