#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slope {

using Index = std::int64_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

/// One (source column -> destination column, weight) assignment used when
/// gathering weighted column combinations of the design matrix.
struct ColumnMix {
  Index src;
  Index dst;
  double weight;
};

/// Design matrix stored either dense or compressed sparse row. Sparse input
/// denser than 25% is converted to dense storage on construction.
class DesignMatrix {
 public:
  static DesignMatrix from_dense(Matrix a);
  static DesignMatrix from_sparse(SparseRowMatrix a);
  static DesignMatrix identity(Index n);

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  bool is_sparse() const { return sparse_storage_; }
  double density() const;

  /// A x
  Vector apply(const Vector& x) const;
  /// A^T y
  Vector apply_transpose(const Vector& y) const;

  /// Accumulates out(:, mix[k].dst) += mix[k].weight * A(:, mix[k].src).
  /// `out` must be m x (number of destination columns), pre-zeroed.
  void add_scaled_columns(const std::vector<ColumnMix>& mix, Matrix& out) const;

  /// Dense A A^T (m x m).
  Matrix gram_row_space() const;

  /// Largest eigenvalue of A^T A estimated by `iters` power-iteration steps.
  double squared_operator_norm_estimate(int iters, std::uint64_t seed = 1) const;

  std::int64_t apply_count() const { return n_apply_.load(); }
  std::int64_t apply_transpose_count() const { return n_apply_t_.load(); }
  void reset_counters() const;

  DesignMatrix(const DesignMatrix& other);
  DesignMatrix& operator=(const DesignMatrix& other);
  DesignMatrix(DesignMatrix&& other) noexcept;
  DesignMatrix& operator=(DesignMatrix&& other) noexcept;

 private:
  DesignMatrix() = default;

  bool sparse_storage_ = false;
  Matrix dense_;
  SparseRowMatrix sparse_;
  Index m_ = 0;
  Index n_ = 0;

  // operation counters for cost instrumentation; shared-state exceptions to
  // the otherwise immutable matrix
  mutable std::atomic<std::int64_t> n_apply_{0};
  mutable std::atomic<std::int64_t> n_apply_t_{0};
};

/// A regression instance: design matrix A (m x n) and response b (m).
/// Immutable after construction and safe to share across concurrent solves.
class ProblemData {
 public:
  ProblemData(DesignMatrix a, Vector b);

  const DesignMatrix& A() const { return a_; }
  const Vector& b() const { return b_; }
  Index m() const { return a_.rows(); }
  Index n() const { return a_.cols(); }

 private:
  DesignMatrix a_;
  Vector b_;
};

/// Non-increasing nonnegative penalty weights with lam[0] > 0.
class LambdaSeq {
 public:
  /// Validates lam[0] >= lam[1] >= ... >= 0 and lam[0] > 0.
  explicit LambdaSeq(Vector lam) : LambdaSeq(std::move(lam), false) {}

  /// Permits lam[0] == 0; intended for test oracles only.
  static LambdaSeq relaxed(Vector lam) { return LambdaSeq(std::move(lam), true); }

  const Vector& values() const { return lam_; }
  double operator[](Index i) const { return lam_[i]; }
  Index size() const { return lam_.size(); }
  double max() const { return lam_.size() > 0 ? lam_[0] : 0.0; }

  LambdaSeq scaled(double sigma) const;

 private:
  LambdaSeq(Vector lam, bool relax);
  Vector lam_;
};

enum class Algorithm { NewtAlm, Admm, Apg };

std::string algorithm_name(Algorithm algo);
Algorithm algorithm_from_name(const std::string& name);

/// Outcome of a single solve: solution, certificates, and counters.
struct SolveReport {
  Vector x;
  Vector y;
  double obj_primal = 0.0;
  double obj_dual = 0.0;
  double eta_g = 0.0;
  double eta_d = 0.0;
  double eta_kkt = 0.0;
  Index nnz999 = 0;
  int outer_iters = 0;
  int inner_iters_total = 0;
  double wall_ms = 0.0;
  Algorithm algorithm = Algorithm::NewtAlm;
  bool converged = false;
};

}  // namespace slope
