#include "slope/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "slope/sorted_prox.hpp"

namespace slope {

double penalty_value(const Vector& x, const LambdaSeq& lam) {
  if (x.size() != lam.size()) {
    throw std::invalid_argument("penalty_value: length mismatch");
  }
  Vector a = x.cwiseAbs();
  std::sort(a.data(), a.data() + a.size(), std::greater<double>());
  return a.dot(lam.values());
}

double objective_primal(const Vector& x, const ProblemData& p, const LambdaSeq& lam) {
  const Vector r = p.A().apply(x) - p.b();
  return 0.5 * r.squaredNorm() + penalty_value(x, lam);
}

double objective_dual(const Vector& y, const ProblemData& p) {
  return -p.b().dot(y) - 0.5 * y.squaredNorm();
}

double relative_duality_gap(const Vector& x, const Vector& y, const ProblemData& p,
                            const LambdaSeq& lam) {
  const double obj_p = objective_primal(x, p, lam);
  const double obj_d = objective_dual(y, p);
  return std::abs(obj_p - obj_d) / std::max(1.0, std::abs(obj_p));
}

double dual_infeasibility(const Vector& x, const ProblemData& p, const LambdaSeq& lam) {
  const Vector g = p.A().apply_transpose(p.A().apply(x) - p.b());
  return dual_ball_violation(g, lam);
}

double kkt_residual(const Vector& x, const ProblemData& p, const LambdaSeq& lam) {
  const Vector g = p.A().apply_transpose(p.A().apply(x) - p.b());
  const Vector prox = prox_sorted_l1(x - g, lam).x;
  return (x - prox).norm() / (1.0 + x.norm() + g.norm());
}

Index nnz999(const Vector& x) {
  Vector a = x.cwiseAbs();
  const double l1 = a.lpNorm<1>();
  if (l1 == 0.0) return 0;
  std::sort(a.data(), a.data() + a.size(), std::greater<double>());
  const double target = 0.999 * l1;
  double run = 0.0;
  for (Index t = 0; t < a.size(); ++t) {
    run += a[t];
    if (run >= target) return t + 1;
  }
  return a.size();
}

}  // namespace slope
