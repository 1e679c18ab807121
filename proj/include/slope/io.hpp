#pragma once

#include <string>

#include "slope/problem.hpp"

namespace slope {

/// Parses "label idx:val ..." lines with 1-based feature indices into a CSR
/// instance; n is the largest index seen unless num_features > 0 overrides.
/// Malformed lines, indices < 1, and duplicate indices within a line are
/// reported with their line number.
ProblemData read_libsvm(const std::string& path, Index num_features = 0);

/// Header-less dense CSV rows; the last column is the response b.
ProblemData read_csv_dense(const std::string& path);

/// One weight per line, validated as a LambdaSeq.
LambdaSeq read_lambda_file(const std::string& path);

}  // namespace slope
