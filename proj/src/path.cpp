#include "slope/path.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "slope/admm.hpp"
#include "slope/alm.hpp"
#include "slope/apg.hpp"
#include "slope/synth.hpp"

namespace slope {

void PathGrid::validate() const {
  if (w1_factors.empty()) throw std::invalid_argument("path: empty w1 grid");
  if (w2_rule == W2Rule::Grid && w2_factors.empty()) {
    throw std::invalid_argument("path: empty w2 grid");
  }
  if (w2_rule == W2Rule::Fixed && w2_fixed_factor < 0.0) {
    throw std::invalid_argument("path: fixed w2 factor must be nonnegative");
  }
  for (double f : w1_factors) {
    if (f < 0.0) throw std::invalid_argument("path: w1 factors must be nonnegative");
  }
  if (top_k < 0) throw std::invalid_argument("path: top_k must be nonnegative");
}

std::vector<double> parse_grid_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() != 4) {
    throw std::invalid_argument("grid spec must be lo:hi:count:lin|log, got '" + spec + "'");
  }
  const double lo = std::stod(parts[0]);
  const double hi = std::stod(parts[1]);
  const int count = std::stoi(parts[2]);
  if (count < 1) throw std::invalid_argument("grid spec: count must be >= 1");
  if (lo > hi) throw std::invalid_argument("grid spec: lo must be <= hi");
  GridSpacing spacing;
  if (parts[3] == "lin") {
    spacing = GridSpacing::Linear;
  } else if (parts[3] == "log") {
    spacing = GridSpacing::Log;
  } else {
    throw std::invalid_argument("grid spec: spacing must be lin or log");
  }
  if (spacing == GridSpacing::Log && lo <= 0.0) {
    throw std::invalid_argument("grid spec: log spacing needs lo > 0");
  }

  std::vector<double> vals(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    vals[static_cast<std::size_t>(i)] =
        spacing == GridSpacing::Linear ? lo + t * (hi - lo)
                                       : std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  // largest penalty first
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  return vals;
}

std::vector<PathPoint> expand_grid(const PathGrid& grid, double atb_inf, Index n) {
  grid.validate();
  std::vector<double> w1s = grid.w1_factors;
  std::sort(w1s.begin(), w1s.end(), std::greater<double>());

  std::vector<PathPoint> points;
  const auto emit_row = [&](double w2_abs) {
    for (double f1 : w1s) {
      PathPoint pt;
      pt.w1 = f1 * atb_inf;
      pt.w2 = w2_abs;
      if (pt.w1 + pt.w2 <= 0.0) {
        throw std::invalid_argument("path: grid point with w1 + w2 = 0");
      }
      points.push_back(pt);
    }
  };

  switch (grid.w2_rule) {
    case W2Rule::Fixed:
      emit_row(grid.w2_fixed_factor * atb_inf);
      break;
    case W2Rule::Scaled:
      for (double f1 : w1s) {
        PathPoint pt;
        pt.w1 = f1 * atb_inf;
        pt.w2 = pt.w1 / std::sqrt(static_cast<double>(n));
        if (pt.w1 + pt.w2 <= 0.0) {
          throw std::invalid_argument("path: grid point with w1 + w2 = 0");
        }
        points.push_back(pt);
      }
      break;
    case W2Rule::Grid:
      for (double f2 : grid.w2_factors) emit_row(f2 * atb_inf);
      break;
  }
  return points;
}

namespace {

SolveReport solve_point(const ProblemData& p, const LambdaSeq& lam, const PathRunConfig& cfg,
                        const std::optional<SolveReport>& prev,
                        const std::optional<Vector>& prev_xi) {
  switch (cfg.algorithm) {
    case Algorithm::NewtAlm: {
      AlmConfig ac;
      ac.tol_g = cfg.tol_g;
      ac.tol_d = cfg.tol_d;
      ac.max_outer = cfg.max_outer;
      ac.sigma0 = cfg.sigma0;
      std::optional<std::pair<Vector, Vector>> warm;
      if (prev) warm = std::make_pair(prev->x, prev->y);
      return alm_solve(p, lam, ac, warm);
    }
    case Algorithm::Apg: {
      ApgConfig ac;
      ac.tol_g = cfg.tol_g;
      ac.tol_d = cfg.tol_d;
      ac.max_iters = cfg.max_first_order_iters;
      std::optional<Vector> warm;
      if (prev) warm = prev->x;
      return apg_solve(p, lam, ac, warm);
    }
    case Algorithm::Admm: {
      AdmmConfig ac;
      ac.tol_g = cfg.tol_g;
      ac.tol_d = cfg.tol_d;
      ac.max_iters = cfg.max_first_order_iters;
      std::optional<AdmmWarmStart> warm;
      if (prev && prev_xi) warm = AdmmWarmStart{prev->y, *prev_xi, prev->x};
      return admm_solve(p, lam, ac, warm);
    }
  }
  throw std::logic_error("solve_point: unreachable");
}

}  // namespace

std::vector<ResultRecord> run_path(const ProblemData& p, const PathGrid& grid,
                                   const PathRunConfig& cfg,
                                   const std::string& instance_name) {
  const double atb_inf = p.A().apply_transpose(p.b()).lpNorm<Eigen::Infinity>();
  const std::vector<PathPoint> points = expand_grid(grid, atb_inf, p.n());

  std::vector<ResultRecord> records(points.size());
  const auto record_at = [&](std::size_t i, const SolveReport& rep) {
    records[i] = make_record(instance_name, rep, points[i].w1, points[i].w2,
                             "grid", p.m(), p.n(), grid.top_k);
  };

  if (grid.warm_start || cfg.workers <= 1 || points.size() <= 1) {
    std::optional<SolveReport> prev;
    std::optional<Vector> prev_xi;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const LambdaSeq lam = oscar_weights(points[i].w1, points[i].w2, p.n());
      const std::optional<SolveReport> warm = grid.warm_start ? prev : std::nullopt;
      SolveReport rep = solve_point(p, lam, cfg, warm, prev_xi);
      if (grid.warm_start) {
        if (cfg.algorithm == Algorithm::Admm) prev_xi = -p.A().apply_transpose(rep.y);
        prev = rep;
      }
      record_at(i, rep);
    }
    return records;
  }

  // cold-start fan-out: grid points are independent solves
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= points.size() || failed.load()) return;
        try {
          const LambdaSeq lam = oscar_weights(points[i].w1, points[i].w2, p.n());
          record_at(i, solve_point(p, lam, cfg, std::nullopt, std::nullopt));
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          failed.store(true);
          if (error_message.empty()) error_message = e.what();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error("path worker failed: " + error_message);
  return records;
}

std::string path_csv(const std::vector<ResultRecord>& records, int top_k) {
  std::string out = ResultRecord::csv_header(top_k) + "\n";
  for (const auto& rec : records) out += rec.to_csv_row(top_k) + "\n";
  return out;
}

}  // namespace slope
