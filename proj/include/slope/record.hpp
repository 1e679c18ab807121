#pragma once

#include <string>
#include <vector>

#include "slope/problem.hpp"

namespace slope {

/// Serialized outcome of one solve, schema-versioned for stable downstream
/// parsing. wall_ms is the only field excluded from byte-for-byte
/// reproducibility guarantees.
struct ResultRecord {
  int schema_version = 1;
  std::string instance;
  std::string algorithm;
  std::string lambda_source;
  double w1 = 0.0;
  double w2 = 0.0;
  Index m = 0;
  Index n = 0;
  bool converged = false;
  double obj_primal = 0.0;
  double obj_dual = 0.0;
  double eta_g = 0.0;
  double eta_d = 0.0;
  double eta_kkt = 0.0;
  Index nnz999 = 0;
  int outer_iters = 0;
  int inner_iters = 0;
  double wall_ms = 0.0;
  std::vector<std::pair<Index, double>> top_k;  // (index, coefficient)

  std::string to_json() const;

  static std::string csv_header(int top_k);
  std::string to_csv_row(int top_k) const;
};

ResultRecord make_record(const std::string& instance, const SolveReport& rep, double w1,
                         double w2, const std::string& lambda_source, Index m, Index n,
                         int top_k);

/// Top-k coefficients by |value|, descending, ties broken by smaller index.
std::vector<std::pair<Index, double>> top_coefficients(const Vector& x, int k);

/// Shortest-digit formatting that still round-trips 64-bit floats exactly.
std::string format_double(double v);

}  // namespace slope
