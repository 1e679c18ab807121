#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slope/alm.hpp"
#include "slope/apg.hpp"

using namespace slope;
using namespace slope::testing;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Index>(vals.size()));
  Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("alm");

TEST_CASE("criteria_bound formula and degenerate fixed point") {
  AlmConfig cfg;
  cfg.eps_a0 = 1.0;
  cfg.delta_b0 = 1.0;
  cfg.delta_p0 = 1.0;

  // k=0, sigma=4, dx=1: min{1/2, 1/2, 1/4}
  CHECK(criteria_bound(0, 4.0, 1.0, cfg) == doctest::Approx(0.25).epsilon(1e-15));

  // dx = 0 accepts the absolute criterion alone
  CHECK(criteria_bound(0, 1.0, 0.0, cfg) == doctest::Approx(1.0).epsilon(1e-15));

  // monotone in k
  double prev = criteria_bound(0, 2.0, 0.7, cfg);
  for (int k = 1; k < 10; ++k) {
    const double cur = criteria_bound(k, 2.0, 0.7, cfg);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("alm_solve nails the closed-form instance") {
  const ProblemData p(DesignMatrix::identity(2), vec({3.0, 3.0}));
  const LambdaSeq lam(vec({2.0, 1.0}));
  AlmConfig cfg;
  cfg.tol_g = 1e-6;
  cfg.tol_d = 1e-6;
  const SolveReport rep = alm_solve(p, lam, cfg);
  CHECK(rep.converged);
  CHECK(rep.outer_iters <= 10);
  CHECK((rep.x - vec({1.5, 1.5})).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK((rep.y - vec({-1.5, -1.5})).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(rep.eta_g <= 1e-6);
  CHECK(rep.eta_d <= 1e-6);
}

TEST_CASE("b = 0 solves in one outer iteration") {
  const ProblemData p(DesignMatrix::identity(3), Vector::Zero(3));
  const LambdaSeq lam(vec({1.0, 0.5, 0.25}));
  const SolveReport rep = alm_solve(p, lam, AlmConfig{});
  CHECK(rep.converged);
  CHECK(rep.outer_iters == 1);
  CHECK(rep.x.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(rep.y.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("over-penalization certifies x = 0") {
  GaussianStream g(51);
  const ProblemData p = random_problem(g, 6, 10);
  const Vector atb = p.A().apply_transpose(p.b());
  // lam_j >= ||A^T b||_1 makes every cumulative slack nonnegative at x = 0
  const double big = atb.cwiseAbs().sum() + 1.0;
  const LambdaSeq lam(Vector::Constant(10, big));
  CHECK(dual_ball_violation(atb, lam) == 0.0);
  const SolveReport rep = alm_solve(p, lam, AlmConfig{});
  CHECK(rep.converged);
  CHECK(rep.x.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(rep.eta_d == 0.0);
}

TEST_CASE("primal objective is non-increasing across outer iterations") {
  GaussianStream g(52);
  for (int trial = 0; trial < 5; ++trial) {
    const Index m = 10 + static_cast<Index>(g.uniform() * 30);
    const Index n = 20 + static_cast<Index>(g.uniform() * 100);
    const ProblemData p = random_problem(g, m, n);
    const LambdaSeq lam = random_lambda(g, n, 1.0);
    std::vector<double> objs;
    AlmObserver obs = [&objs](const AlmIterRecord& rec, const AlmState&) {
      objs.push_back(rec.obj_primal);
    };
    alm_solve(p, lam, AlmConfig{}, {}, obs);
    for (std::size_t i = 1; i < objs.size(); ++i) {
      CHECK(objs[i] <= objs[i - 1] + 1e-12 * (1.0 + std::abs(objs[i - 1])));
    }
  }
}

TEST_CASE("global convergence and KKT quality on random desk-scale instances") {
  GaussianStream g(53);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 5 + static_cast<Index>(g.uniform() * 40);
    const Index n = 10 + static_cast<Index>(g.uniform() * 150);
    const ProblemData p = random_problem(g, m, n);
    const LambdaSeq lam = random_lambda(g, n, 1.0);
    const SolveReport rep = alm_solve(p, lam, AlmConfig{});
    CHECK(rep.converged);
    CHECK(rep.outer_iters <= 100);
    CHECK(rep.eta_kkt <= 1e-5);
  }
}

TEST_CASE("iterates contract geometrically toward the high-accuracy solution") {
  GaussianStream g(54);
  const Index m = 20;
  const Index n = 60;
  const ProblemData p = random_problem(g, m, n);
  const LambdaSeq lam = random_lambda(g, n, 2.0);

  // reference solution from a long, tight APG run (independent iteration)
  ApgConfig ref_cfg;
  ref_cfg.max_iters = 200000;
  ref_cfg.tol_g = 1e-13;
  ref_cfg.tol_d = 1e-13;
  const SolveReport ref = apg_solve(p, lam, ref_cfg);

  std::vector<double> dist;
  AlmConfig cfg;
  cfg.tol_g = 1e-11;
  cfg.tol_d = 1e-11;
  // a deliberately small starting penalty spreads convergence over several
  // outer iterations so the contraction is observable
  cfg.sigma0 = 1e-3;
  cfg.sigma_growth = 2.0;
  AlmObserver obs = [&](const AlmIterRecord&, const AlmState& st) {
    dist.push_back((st.x - ref.x).norm());
  };
  const SolveReport rep = alm_solve(p, lam, cfg, {}, obs);
  CHECK(rep.converged);
  // the distance sequence is eventually geometric: strictly decreasing over
  // the last five steps before it bottoms out at the reference accuracy
  std::size_t floor_at = dist.size();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 1e-8) {
      floor_at = i;
      break;
    }
  }
  REQUIRE(floor_at >= 6);
  for (std::size_t i = floor_at - 5; i <= floor_at; ++i) {
    CHECK(dist[i] < dist[i - 1]);
  }
}

TEST_CASE("warm starts do not cost more outer iterations than cold starts") {
  GaussianStream g(55);
  for (int trial = 0; trial < 5; ++trial) {
    const Index m = 15;
    const Index n = 80;
    const ProblemData p = random_problem(g, m, n);
    const double atb = p.A().apply_transpose(p.b()).lpNorm<Eigen::Infinity>();
    const LambdaSeq lam_a = oscar_weights(2e-2 * atb, 1e-2 * atb / std::sqrt(80.0), n);
    const LambdaSeq lam_b = oscar_weights(1.8e-2 * atb, 1e-2 * atb / std::sqrt(80.0), n);

    const SolveReport first = alm_solve(p, lam_a, AlmConfig{});
    const SolveReport cold = alm_solve(p, lam_b, AlmConfig{});
    const SolveReport warm =
        alm_solve(p, lam_b, AlmConfig{}, std::make_pair(first.x, first.y));
    CHECK(warm.converged);
    CHECK(warm.outer_iters <= cold.outer_iters);
  }
}

TEST_CASE("config validation") {
  AlmConfig cfg;
  cfg.sigma_growth = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AlmConfig{};
  cfg.eps_decay = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AlmConfig{};
  CHECK_NOTHROW(cfg.validate());
}

TEST_SUITE_END();
