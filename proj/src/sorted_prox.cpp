#include "slope/sorted_prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slope {

Vector SignedPermutation::apply(const Vector& y) const {
  Vector out(size());
  for (Index i = 0; i < size(); ++i) {
    out[i] = signs[static_cast<std::size_t>(i)] * y[perm[static_cast<std::size_t>(i)]];
  }
  return out;
}

Vector SignedPermutation::apply_inverse(const Vector& w) const {
  Vector out(size());
  for (Index i = 0; i < size(); ++i) {
    out[perm[static_cast<std::size_t>(i)]] = signs[static_cast<std::size_t>(i)] * w[i];
  }
  return out;
}

SignedPermutation signed_sort(const Vector& y) {
  const Index n = y.size();
  SignedPermutation pi;
  pi.perm.resize(static_cast<std::size_t>(n));
  pi.signs.resize(static_cast<std::size_t>(n));
  std::iota(pi.perm.begin(), pi.perm.end(), Index{0});
  std::stable_sort(pi.perm.begin(), pi.perm.end(), [&y](Index a, Index b) {
    return std::abs(y[a]) > std::abs(y[b]);
  });
  for (Index i = 0; i < n; ++i) {
    pi.signs[static_cast<std::size_t>(i)] =
        y[pi.perm[static_cast<std::size_t>(i)]] < 0.0 ? -1.0 : 1.0;
  }
  return pi;
}

Vector ProxResult::sorted_x() const {
  Vector out(x.size());
  for (const auto& blk : blocks) {
    for (Index i = blk.start; i <= blk.end; ++i) out[i] = blk.value;
  }
  return out;
}

std::vector<ProxBlock> x_lambda(const Vector& w, const LambdaSeq& lam) {
  const Index n = w.size();
  if (n != lam.size()) {
    throw std::invalid_argument("x_lambda: length mismatch between w and lambda");
  }

  // PAVA on d = w - lam: maintain a stack of blocks with strictly decreasing
  // pooled averages, merging while the order is violated
  std::vector<Index> start(static_cast<std::size_t>(n));
  std::vector<double> sum(static_cast<std::size_t>(n));
  std::vector<double> avg(static_cast<std::size_t>(n));
  std::size_t k = 0;
  for (Index i = 0; i < n; ++i) {
    start[k] = i;
    sum[k] = w[i] - lam[i];
    avg[k] = sum[k];
    while (k > 0 && avg[k - 1] <= avg[k]) {
      sum[k - 1] += sum[k];
      avg[k - 1] = sum[k - 1] / static_cast<double>(i - start[k - 1] + 1);
      --k;
    }
    ++k;
  }

  std::vector<ProxBlock> blocks;
  blocks.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Index s = start[j];
    const Index e = (j + 1 < k) ? start[j + 1] - 1 : n - 1;
    if (avg[j] <= 0.0) {
      // nonnegativity clamps this and every later block; merge into one run
      blocks.push_back({s, n - 1, 0.0});
      break;
    }
    blocks.push_back({s, e, avg[j]});
  }
  return blocks;
}

ProxResult prox_sorted_l1(const Vector& y, const LambdaSeq& lam) {
  if (y.size() != lam.size()) {
    throw std::invalid_argument("prox_sorted_l1: length mismatch");
  }
  ProxResult res;
  res.pi = signed_sort(y);
  res.blocks = x_lambda(res.pi.apply(y), lam);
  res.x = res.pi.apply_inverse([&] {
    Vector sorted(y.size());
    for (const auto& blk : res.blocks) {
      for (Index i = blk.start; i <= blk.end; ++i) sorted[i] = blk.value;
    }
    return sorted;
  }());
  return res;
}

ProxResult prox_scaled(const Vector& y, double sigma, const LambdaSeq& lam) {
  if (sigma <= 0.0) throw std::invalid_argument("prox_scaled: sigma must be positive");
  return prox_sorted_l1(y, lam.scaled(sigma));
}

Vector prox_conjugate_scaled(const Vector& w, double sigma, const LambdaSeq& lam) {
  if (sigma <= 0.0) {
    throw std::invalid_argument("prox_conjugate_scaled: sigma must be positive");
  }
  return (w - prox_scaled(w, sigma, lam).x) / sigma;
}

double dual_ball_violation(const Vector& z, const LambdaSeq& lam) {
  if (z.size() != lam.size()) {
    throw std::invalid_argument("dual_ball_violation: length mismatch");
  }
  Vector a = z.cwiseAbs();
  std::sort(a.data(), a.data() + a.size(), std::greater<double>());
  double run = 0.0;
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    run += a[i] - lam[i];
    worst = std::max(worst, run);
  }
  return worst;
}

}  // namespace slope
