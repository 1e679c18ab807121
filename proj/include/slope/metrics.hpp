#pragma once

#include "slope/problem.hpp"

namespace slope {

/// kappa_lambda(x) = sum_i lam_i |x|_sorted_i (sorted descending by magnitude).
double penalty_value(const Vector& x, const LambdaSeq& lam);

/// 1/2 ||Ax - b||^2 + kappa_lambda(x)
double objective_primal(const Vector& x, const ProblemData& p, const LambdaSeq& lam);

/// -b^T y - 1/2 ||y||^2
double objective_dual(const Vector& y, const ProblemData& p);

/// |Obj_P - Obj_D| / max{1, |Obj_P|}
double relative_duality_gap(const Vector& x, const Vector& y, const ProblemData& p,
                            const LambdaSeq& lam);

/// max{0, max_i sum_{j<=i} (|A^T(Ax-b)|_sorted_j - lam_j)}
double dual_infeasibility(const Vector& x, const ProblemData& p, const LambdaSeq& lam);

/// ||x - Prox(x - A^T(Ax-b))|| / (1 + ||x|| + ||A^T(Ax-b)||)
double kkt_residual(const Vector& x, const ProblemData& p, const LambdaSeq& lam);

/// Smallest t such that the t largest-magnitude entries reach 99.9% of
/// ||x||_1; zero for the zero vector.
Index nnz999(const Vector& x);

}  // namespace slope
