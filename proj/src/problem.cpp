#include "slope/problem.hpp"

#include <cmath>

namespace slope {

namespace {

void check_finite(const Matrix& a) {
  if (!a.allFinite()) {
    throw std::invalid_argument("design matrix contains NaN/Inf entries");
  }
}

}  // namespace

DesignMatrix DesignMatrix::from_dense(Matrix a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw std::invalid_argument("design matrix must be at least 1 x 1");
  }
  check_finite(a);
  DesignMatrix d;
  d.sparse_storage_ = false;
  d.m_ = a.rows();
  d.n_ = a.cols();
  d.dense_ = std::move(a);
  return d;
}

DesignMatrix DesignMatrix::from_sparse(SparseRowMatrix a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw std::invalid_argument("design matrix must be at least 1 x 1");
  }
  a.makeCompressed();
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseRowMatrix::InnerIterator it(a, i); it; ++it) {
      if (!std::isfinite(it.value())) {
        throw std::invalid_argument("design matrix contains NaN/Inf entries");
      }
      if (it.col() < 0 || it.col() >= a.cols()) {
        throw std::invalid_argument("sparse column index out of range");
      }
    }
  }
  const double dens =
      static_cast<double>(a.nonZeros()) / (static_cast<double>(a.rows()) * a.cols());
  if (dens > 0.25) {
    return from_dense(Matrix(a));
  }
  DesignMatrix d;
  d.sparse_storage_ = true;
  d.m_ = a.rows();
  d.n_ = a.cols();
  d.sparse_ = std::move(a);
  return d;
}

DesignMatrix DesignMatrix::identity(Index n) {
  return from_dense(Matrix::Identity(n, n));
}

double DesignMatrix::density() const {
  if (!sparse_storage_) return 1.0;
  return static_cast<double>(sparse_.nonZeros()) /
         (static_cast<double>(m_) * static_cast<double>(n_));
}

Vector DesignMatrix::apply(const Vector& x) const {
  if (x.size() != n_) throw std::invalid_argument("apply: dimension mismatch");
  n_apply_.fetch_add(1, std::memory_order_relaxed);
  if (sparse_storage_) return sparse_ * x;
  return dense_ * x;
}

Vector DesignMatrix::apply_transpose(const Vector& y) const {
  if (y.size() != m_) throw std::invalid_argument("apply_transpose: dimension mismatch");
  n_apply_t_.fetch_add(1, std::memory_order_relaxed);
  if (sparse_storage_) return sparse_.transpose() * y;
  return dense_.transpose() * y;
}

void DesignMatrix::add_scaled_columns(const std::vector<ColumnMix>& mix, Matrix& out) const {
  if (out.rows() != m_) throw std::invalid_argument("add_scaled_columns: bad output rows");
  if (!sparse_storage_) {
    for (const auto& cm : mix) {
      out.col(cm.dst) += cm.weight * dense_.col(cm.src);
    }
    return;
  }
  // CSR: one pass over the nonzeros with a column lookup table
  std::vector<Index> dst(static_cast<std::size_t>(n_), -1);
  std::vector<double> wgt(static_cast<std::size_t>(n_), 0.0);
  for (const auto& cm : mix) {
    dst[static_cast<std::size_t>(cm.src)] = cm.dst;
    wgt[static_cast<std::size_t>(cm.src)] = cm.weight;
  }
  for (Index i = 0; i < sparse_.outerSize(); ++i) {
    for (SparseRowMatrix::InnerIterator it(sparse_, i); it; ++it) {
      const Index d = dst[static_cast<std::size_t>(it.col())];
      if (d >= 0) out(i, d) += wgt[static_cast<std::size_t>(it.col())] * it.value();
    }
  }
}

Matrix DesignMatrix::gram_row_space() const {
  if (sparse_storage_) {
    SparseRowMatrix g = sparse_ * SparseRowMatrix(sparse_.transpose());
    return Matrix(g);
  }
  Matrix g(m_, m_);
  g.setZero();
  g.selfadjointView<Eigen::Lower>().rankUpdate(dense_);
  return Matrix(g.selfadjointView<Eigen::Lower>());
}

double DesignMatrix::squared_operator_norm_estimate(int iters, std::uint64_t seed) const {
  // power iteration on A^T A; the caller is expected to guard with
  // backtracking when an exact Lipschitz constant is required
  std::uint64_t s = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  Vector v(n_);
  for (Index i = 0; i < n_; ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    v[i] = static_cast<double>(s >> 11) * (1.0 / 9007199254740992.0) - 0.5;
  }
  double nrm = v.norm();
  if (nrm == 0.0) {
    v.setOnes();
    nrm = v.norm();
  }
  v /= nrm;
  double est = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector av = apply(v);
    Vector atav = apply_transpose(av);
    est = atav.dot(v);
    const double an = atav.norm();
    if (an == 0.0) return 0.0;
    v = atav / an;
  }
  return est;
}

void DesignMatrix::reset_counters() const {
  n_apply_.store(0);
  n_apply_t_.store(0);
}

DesignMatrix::DesignMatrix(const DesignMatrix& other)
    : sparse_storage_(other.sparse_storage_),
      dense_(other.dense_),
      sparse_(other.sparse_),
      m_(other.m_),
      n_(other.n_),
      n_apply_(other.n_apply_.load()),
      n_apply_t_(other.n_apply_t_.load()) {}

DesignMatrix& DesignMatrix::operator=(const DesignMatrix& other) {
  if (this != &other) {
    sparse_storage_ = other.sparse_storage_;
    dense_ = other.dense_;
    sparse_ = other.sparse_;
    m_ = other.m_;
    n_ = other.n_;
    n_apply_.store(other.n_apply_.load());
    n_apply_t_.store(other.n_apply_t_.load());
  }
  return *this;
}

DesignMatrix::DesignMatrix(DesignMatrix&& other) noexcept
    : sparse_storage_(other.sparse_storage_),
      dense_(std::move(other.dense_)),
      sparse_(std::move(other.sparse_)),
      m_(other.m_),
      n_(other.n_),
      n_apply_(other.n_apply_.load()),
      n_apply_t_(other.n_apply_t_.load()) {}

DesignMatrix& DesignMatrix::operator=(DesignMatrix&& other) noexcept {
  if (this != &other) {
    sparse_storage_ = other.sparse_storage_;
    dense_ = std::move(other.dense_);
    sparse_ = std::move(other.sparse_);
    m_ = other.m_;
    n_ = other.n_;
    n_apply_.store(other.n_apply_.load());
    n_apply_t_.store(other.n_apply_t_.load());
  }
  return *this;
}

ProblemData::ProblemData(DesignMatrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
  if (b_.size() != a_.rows()) {
    throw std::invalid_argument("response length does not match matrix rows");
  }
  if (!b_.allFinite()) {
    throw std::invalid_argument("response contains NaN/Inf entries");
  }
}

LambdaSeq::LambdaSeq(Vector lam, bool relax) : lam_(std::move(lam)) {
  if (lam_.size() < 1) {
    throw std::invalid_argument("lambda sequence must be nonempty");
  }
  for (Index i = 0; i < lam_.size(); ++i) {
    if (!std::isfinite(lam_[i]) || lam_[i] < 0.0) {
      throw std::invalid_argument("lambda weights must be finite and nonnegative");
    }
    if (i > 0 && lam_[i] > lam_[i - 1]) {
      throw std::invalid_argument("lambda weights must be non-increasing");
    }
  }
  if (!relax && lam_[0] <= 0.0) {
    throw std::invalid_argument("leading lambda weight must be positive");
  }
}

LambdaSeq LambdaSeq::scaled(double sigma) const {
  if (sigma <= 0.0) throw std::invalid_argument("scale must be positive");
  return LambdaSeq(Vector(sigma * lam_), lam_[0] <= 0.0);
}

std::string algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::NewtAlm: return "newt-alm";
    case Algorithm::Admm: return "admm";
    case Algorithm::Apg: return "apg";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "newt-alm") return Algorithm::NewtAlm;
  if (name == "admm") return Algorithm::Admm;
  if (name == "apg") return Algorithm::Apg;
  throw std::invalid_argument("unknown algorithm: " + name);
}

}  // namespace slope
