#pragma once

#include <optional>
#include <string>

#include "slope/record.hpp"

namespace slope {

enum class GridSpacing { Linear, Log };

enum class W2Rule { Fixed, Scaled, Grid };

/// Regularization-path grid. All w1/w2 values are factors multiplying
/// ||A^T b||_inf, following the factor-a parameterization; the Scaled rule
/// sets w2 = w1 / sqrt(n) per grid point.
struct PathGrid {
  std::vector<double> w1_factors;  // emitted largest-first
  W2Rule w2_rule = W2Rule::Scaled;
  double w2_fixed_factor = 0.0;
  std::vector<double> w2_factors;  // for W2Rule::Grid, row-major outer loop
  int top_k = 10;
  bool warm_start = true;

  void validate() const;
};

/// "lo:hi:count:lin|log" factor range, returned descending (largest first).
std::vector<double> parse_grid_range(const std::string& spec);

struct PathPoint {
  double w1 = 0.0;  // absolute weights, already scaled by ||A^T b||_inf
  double w2 = 0.0;
};

/// Expands the grid into solve order: decreasing regularization within each
/// w2 row, rows iterated in the given w2 order.
std::vector<PathPoint> expand_grid(const PathGrid& grid, double atb_inf, Index n);

struct PathRunConfig {
  Algorithm algorithm = Algorithm::NewtAlm;
  double tol_g = 1e-6;
  double tol_d = 1e-6;
  int max_outer = 100;
  int max_first_order_iters = 20000;
  double sigma0 = 0.0;
  int workers = 1;  // only honored when warm_start is false
};

/// Sweeps the grid in order, warm-starting from the previous solution when
/// the grid asks for it. Non-converged points are recorded and the sweep
/// continues. With warm_start = false and workers > 1 the points are solved
/// concurrently; emission order is always the grid order.
std::vector<ResultRecord> run_path(const ProblemData& p, const PathGrid& grid,
                                   const PathRunConfig& cfg,
                                   const std::string& instance_name);

/// Header plus one CSV row per grid point.
std::string path_csv(const std::vector<ResultRecord>& records, int top_k);

}  // namespace slope
