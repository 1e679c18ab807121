#include "slope/jacobian.hpp"

#include <cmath>

namespace slope {

BlockPartition active_partition(const ProxResult& prox) {
  const Index n = prox.x.size();
  BlockPartition part;
  part.n = n;

  // indicator over the n rows of B: rows strictly inside a solution run are
  // active; row n-1 (the x_n >= 0 row) is active iff the last run is zero
  std::vector<char> active(static_cast<std::size_t>(n), 0);
  for (const auto& blk : prox.blocks) {
    for (Index i = blk.start; i < blk.end; ++i) active[static_cast<std::size_t>(i)] = 1;
  }
  if (!prox.blocks.empty() && prox.blocks.back().value == 0.0) {
    active[static_cast<std::size_t>(n - 1)] = 1;
  }

  for (Index i = 0; i < n; ++i) {
    if (active[static_cast<std::size_t>(i)]) part.gamma.push_back(i);
    const RunType t = active[static_cast<std::size_t>(i)] ? RunType::One : RunType::Zero;
    if (part.runs.empty() || part.runs.back().type != t) {
      part.runs.push_back({1, t});
    } else {
      ++part.runs.back().length;
    }
  }
  for (Index r = 0; r < part.num_runs(); ++r) {
    if (part.runs[static_cast<std::size_t>(r)].type == RunType::One) part.one_runs.push_back(r);
  }
  return part;
}

JacobianFactors jacobian_factors(const BlockPartition& part, SignedPermutation pi) {
  Index total = 0;
  for (const auto& run : part.runs) {
    if (run.length < 1) throw std::invalid_argument("jacobian_factors: empty run");
    total += run.length;
  }
  if (total != part.n || pi.size() != part.n) {
    throw std::invalid_argument("jacobian_factors: inconsistent partition");
  }
  for (std::size_t r = 1; r < part.runs.size(); ++r) {
    if (part.runs[r].type == part.runs[r - 1].type) {
      throw std::invalid_argument("jacobian_factors: consecutive runs share a type");
    }
  }

  JacobianFactors f;
  f.n = part.n;
  f.pi = std::move(pi);
  f.h_diag = Vector::Zero(part.n);

  // case table for the block-diagonal P = H + U U^T: an interior One-run of
  // length L absorbs the first coordinate of the following Zero-run into one
  // rank-1 block of size L+1; the final One-run contributes a zero block; a
  // Zero-run keeps an identity block (shortened by the absorbed coordinate
  // unless it is the first run)
  const Index num_runs = part.num_runs();
  Index cur = 0;
  for (Index r = 0; r < num_runs; ++r) {
    const auto& run = part.runs[static_cast<std::size_t>(r)];
    if (run.type == RunType::One) {
      if (r + 1 < num_runs) {
        const Index size = run.length + 1;
        f.u_blocks.push_back({cur, cur + size - 1, 1.0 / std::sqrt(static_cast<double>(size))});
        cur += size;
      } else {
        cur += run.length;
      }
    } else {
      const Index size = (r == 0) ? run.length : run.length - 1;
      for (Index i = 0; i < size; ++i) f.h_diag[cur + i] = 1.0;
      cur += size;
    }
  }
  if (cur != part.n) throw std::logic_error("jacobian_factors: block sizes do not cover n");

  f.r1 = static_cast<Index>(f.h_diag.sum());
  f.r2 = static_cast<Index>(f.u_blocks.size());
  return f;
}

Vector m_matvec(const JacobianFactors& f, const Vector& v) {
  if (v.size() != f.n) throw std::invalid_argument("m_matvec: dimension mismatch");
  Vector t = f.pi.apply(v);
  Vector w = f.h_diag.cwiseProduct(t);
  for (const auto& blk : f.u_blocks) {
    const Index len = blk.end - blk.start + 1;
    const double s = blk.scale * t.segment(blk.start, len).sum();
    w.segment(blk.start, len).array() += blk.scale * s;
  }
  return f.pi.apply_inverse(w);
}

std::string strategy_name(SolveStrategy s) {
  switch (s) {
    case SolveStrategy::DenseCholesky: return "dense-cholesky";
    case SolveStrategy::Smw: return "smw";
    case SolveStrategy::Pcg: return "pcg";
  }
  return "unknown";
}

NewtonOperator assemble_newton_operator(const ProblemData& p, const JacobianFactors& f,
                                        double sigma,
                                        std::optional<SolveStrategy> strategy_hint,
                                        const NewtonSystemConfig& cfg) {
  if (sigma <= 0.0) {
    throw std::invalid_argument("assemble_newton_operator: sigma must be positive");
  }
  if (f.n != p.n()) {
    throw std::invalid_argument("assemble_newton_operator: factor/problem size mismatch");
  }

  NewtonOperator op;
  op.m_ = p.m();
  op.sigma_ = sigma;

  // V1 gathers the sign-permuted columns of A selected by alpha = {h_diag=1};
  // each V2 column accumulates one u_block of columns, never materializing
  // pi A as a matrix
  std::vector<ColumnMix> mix1;
  mix1.reserve(static_cast<std::size_t>(f.r1));
  Index slot = 0;
  for (Index i = 0; i < f.n; ++i) {
    if (f.h_diag[i] == 1.0) {
      mix1.push_back({f.pi.perm[static_cast<std::size_t>(i)], slot++,
                      f.pi.signs[static_cast<std::size_t>(i)]});
    }
  }
  op.v1_ = Matrix::Zero(op.m_, f.r1);
  p.A().add_scaled_columns(mix1, op.v1_);

  std::vector<ColumnMix> mix2;
  for (Index j = 0; j < f.r2; ++j) {
    const auto& blk = f.u_blocks[static_cast<std::size_t>(j)];
    for (Index i = blk.start; i <= blk.end; ++i) {
      mix2.push_back({f.pi.perm[static_cast<std::size_t>(i)], j,
                      blk.scale * f.pi.signs[static_cast<std::size_t>(i)]});
    }
  }
  op.v2_ = Matrix::Zero(op.m_, f.r2);
  p.A().add_scaled_columns(mix2, op.v2_);

  const Index rank = f.r1 + f.r2;
  if (strategy_hint) {
    op.strategy_ = *strategy_hint;
  } else if (op.m_ <= cfg.direct_max_m && rank >= (op.m_ + 1) / 2) {
    op.strategy_ = SolveStrategy::DenseCholesky;
  } else if (rank < (op.m_ + 1) / 2 && rank <= cfg.smw_max_rank) {
    op.strategy_ = SolveStrategy::Smw;
  } else {
    op.strategy_ = SolveStrategy::Pcg;
  }

  if (op.strategy_ == SolveStrategy::DenseCholesky) {
    Matrix v = Matrix::Identity(op.m_, op.m_);
    if (f.r1 > 0) v.selfadjointView<Eigen::Lower>().rankUpdate(op.v1_, sigma);
    if (f.r2 > 0) v.selfadjointView<Eigen::Lower>().rankUpdate(op.v2_, sigma);
    op.dense_llt_.compute(v.selfadjointView<Eigen::Lower>());
    op.factor_ok_ = op.dense_llt_.info() == Eigen::Success;
  } else if (op.strategy_ == SolveStrategy::Smw) {
    if (rank > 0) {
      Matrix g = Matrix::Identity(rank, rank);
      g.topLeftCorner(f.r1, f.r1) += sigma * op.v1_.transpose() * op.v1_;
      g.topRightCorner(f.r1, f.r2) += sigma * op.v1_.transpose() * op.v2_;
      g.bottomLeftCorner(f.r2, f.r1) = g.topRightCorner(f.r1, f.r2).transpose();
      g.bottomRightCorner(f.r2, f.r2) += sigma * op.v2_.transpose() * op.v2_;
      op.gram_llt_.compute(g);
      op.factor_ok_ = op.gram_llt_.info() == Eigen::Success;
    } else {
      op.factor_ok_ = true;  // V = I
    }
  }

  op.jacobi_ = Vector::Ones(op.m_) + sigma * (op.v1_.rowwise().squaredNorm() +
                                              op.v2_.rowwise().squaredNorm());
  return op;
}

Vector NewtonOperator::apply(const Vector& v) const {
  Vector out = v;
  if (v1_.cols() > 0) out.noalias() += sigma_ * (v1_ * (v1_.transpose() * v));
  if (v2_.cols() > 0) out.noalias() += sigma_ * (v2_ * (v2_.transpose() * v));
  return out;
}

namespace {

NewtonSolveResult solve_pcg(const NewtonOperator& op, const Vector& rhs, double cg_tol,
                            int cg_maxit) {
  NewtonSolveResult res;
  Vector d = Vector::Zero(op.m());
  Vector r = rhs;  // residual of the zero start
  res.residual_norm = r.norm();
  if (res.residual_norm <= cg_tol) {
    res.d = std::move(d);
    return res;
  }
  Vector z = r.cwiseQuotient(op.jacobi_diag());
  Vector q = z;
  double rz = r.dot(z);
  for (int it = 0; it < cg_maxit; ++it) {
    Vector vq = op.apply(q);
    const double alpha = rz / q.dot(vq);
    d += alpha * q;
    r -= alpha * vq;
    ++res.cg_iters;
    res.residual_norm = r.norm();
    if (res.residual_norm <= cg_tol) {
      res.d = std::move(d);
      return res;
    }
    z = r.cwiseQuotient(op.jacobi_diag());
    const double rz_new = r.dot(z);
    q = z + (rz_new / rz) * q;
    rz = rz_new;
  }
  res.converged = false;
  res.d = std::move(d);
  return res;
}

}  // namespace

NewtonSolveResult solve_newton_system(const NewtonOperator& op, const Vector& rhs,
                                      double cg_tol, int cg_maxit) {
  if (rhs.size() != op.m()) {
    throw std::invalid_argument("solve_newton_system: rhs length mismatch");
  }
  if (cg_tol <= 0.0) throw std::invalid_argument("solve_newton_system: cg_tol must be > 0");

  if (op.strategy_ == SolveStrategy::DenseCholesky && op.factor_ok_) {
    NewtonSolveResult res;
    res.d = op.dense_llt_.solve(rhs);
    res.residual_norm = (op.apply(res.d) - rhs).norm();
    return res;
  }
  if (op.strategy_ == SolveStrategy::Smw && op.factor_ok_) {
    NewtonSolveResult res;
    const Index r1 = op.v1_.cols();
    const Index r2 = op.v2_.cols();
    if (r1 + r2 == 0) {
      res.d = rhs;
      res.residual_norm = 0.0;
      return res;
    }
    Vector wt(r1 + r2);
    wt.head(r1) = op.v1_.transpose() * rhs;
    wt.tail(r2) = op.v2_.transpose() * rhs;
    const Vector s = op.gram_llt_.solve(wt);
    res.d = rhs;
    if (r1 > 0) res.d.noalias() -= op.sigma_ * (op.v1_ * s.head(r1));
    if (r2 > 0) res.d.noalias() -= op.sigma_ * (op.v2_ * s.tail(r2));
    res.residual_norm = (op.apply(res.d) - rhs).norm();
    return res;
  }
  // Pcg strategy, or a direct factorization that failed
  return solve_pcg(op, rhs, cg_tol, cg_maxit);
}

}  // namespace slope
