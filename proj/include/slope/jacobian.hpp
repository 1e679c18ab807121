#pragma once

#include <Eigen/Cholesky>

#include <optional>

#include "slope/sorted_prox.hpp"

namespace slope {

enum class RunType { Zero, One };

struct PartitionRun {
  Index length;
  RunType type;
};

/// Active set Gamma of the monotone-cone constraints at a prox solution,
/// together with its run-length decomposition into alternating 0/1 blocks.
struct BlockPartition {
  Index n = 0;
  std::vector<Index> gamma;        // active row indices, 0-based, sorted
  std::vector<PartitionRun> runs;  // alternating Zero/One runs covering 0..n-1
  std::vector<Index> one_runs;     // 0-based indices of One-type runs

  Index num_runs() const { return static_cast<Index>(runs.size()); }
};

/// Reads the maximal admissible active set Gamma = {i : (Bx)_i = 0} off the
/// prox block structure (rows inside a run are active; the trailing
/// nonnegativity row is active iff the last run value is zero).
BlockPartition active_partition(const ProxResult& prox);

/// Rows [start, end] (inclusive, sorted coordinates) sharing one rank-1
/// column of U with entry `scale` = 1/sqrt(rows).
struct UBlock {
  Index start;
  Index end;
  double scale;
};

/// Factored HS-Jacobian element: P = H + U U^T in sorted coordinates, with
/// H diagonal 0/1 and U holding one scaled-indicator column per interior
/// One-run. Together with pi this realizes M = pi^T (H + U U^T) pi.
struct JacobianFactors {
  SignedPermutation pi;
  Eigen::VectorXd h_diag;      // 0/1 diagonal of H, length n
  std::vector<UBlock> u_blocks;
  Index r1 = 0;                // number of ones in h_diag
  Index r2 = 0;                // number of u_blocks
  Index n = 0;
};

JacobianFactors jacobian_factors(const BlockPartition& part, SignedPermutation pi);

/// M v = pi^T (H + U U^T) (pi v), O(n).
Vector m_matvec(const JacobianFactors& f, const Vector& v);

enum class SolveStrategy { DenseCholesky, Smw, Pcg };

std::string strategy_name(SolveStrategy s);

struct NewtonSystemConfig {
  Index direct_max_m = 4000;
  Index smw_max_rank = 2000;
  int cg_maxit = 500;
};

struct NewtonSolveResult {
  Vector d;
  double residual_norm = 0.0;
  int cg_iters = 0;        // 0 for direct solves
  bool converged = true;   // false only when CG hit cg_maxit
};

/// The SPD operator V = I_m + sigma A M A^T in the factored form
/// V = I_m + sigma (V1 V1^T + V2 V2^T), with a cached factorization for the
/// direct strategies. Immutable after assembly.
class NewtonOperator {
 public:
  Index m() const { return m_; }
  double sigma() const { return sigma_; }
  SolveStrategy strategy() const { return strategy_; }
  Index rank() const { return v1_.cols() + v2_.cols(); }
  const Matrix& v1() const { return v1_; }
  const Matrix& v2() const { return v2_; }
  const Vector& jacobi_diag() const { return jacobi_; }

  /// V v = v + sigma (V1 (V1^T v) + V2 (V2^T v))
  Vector apply(const Vector& v) const;

  friend NewtonOperator assemble_newton_operator(const ProblemData& p,
                                                 const JacobianFactors& f, double sigma,
                                                 std::optional<SolveStrategy> strategy_hint,
                                                 const NewtonSystemConfig& cfg);
  friend NewtonSolveResult solve_newton_system(const NewtonOperator& op, const Vector& rhs,
                                               double cg_tol, int cg_maxit);

 private:
  Index m_ = 0;
  double sigma_ = 1.0;
  Matrix v1_;
  Matrix v2_;
  SolveStrategy strategy_ = SolveStrategy::Pcg;
  Eigen::LLT<Matrix> dense_llt_;  // of the full m x m matrix (DenseCholesky)
  Eigen::LLT<Matrix> gram_llt_;   // of I_r + sigma [V1 V2]^T [V1 V2] (Smw)
  Vector jacobi_;                 // diag(V) for the Pcg preconditioner
  bool factor_ok_ = false;
};

NewtonOperator assemble_newton_operator(const ProblemData& p, const JacobianFactors& f,
                                        double sigma,
                                        std::optional<SolveStrategy> strategy_hint = {},
                                        const NewtonSystemConfig& cfg = {});

/// Solves V d = rhs. Direct strategies factor once at assembly; the CG path
/// runs Jacobi-preconditioned CG on the true residual until
/// ||V d - rhs|| <= cg_tol. A failed Cholesky falls back to CG.
NewtonSolveResult solve_newton_system(const NewtonOperator& op, const Vector& rhs,
                                      double cg_tol, int cg_maxit);

}  // namespace slope
