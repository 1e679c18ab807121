#include "slope/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace slope {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& path, std::size_t line_no, const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) parse_fail(path, line_no, "trailing characters in number '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    parse_fail(path, line_no, "not a number: '" + tok + "'");
  } catch (const std::out_of_range&) {
    parse_fail(path, line_no, "number out of range: '" + tok + "'");
  }
}

}  // namespace

ProblemData read_libsvm(const std::string& path, Index num_features) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::vector<double> labels;
  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  Index max_index = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // whitespace-only line
    labels.push_back(parse_double(path, line_no, tok));
    const Index row = static_cast<Index>(labels.size()) - 1;

    std::vector<Index> seen;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        parse_fail(path, line_no, "expected idx:val, got '" + tok + "'");
      }
      Index idx = 0;
      const char* first = tok.data();
      const char* last = tok.data() + colon;
      const auto [ptr, ec] = std::from_chars(first, last, idx);
      if (ec != std::errc() || ptr != last) {
        parse_fail(path, line_no, "bad feature index in '" + tok + "'");
      }
      if (idx < 1) parse_fail(path, line_no, "feature indices are 1-based, got " + std::to_string(idx));
      for (Index s : seen) {
        if (s == idx) parse_fail(path, line_no, "duplicate feature index " + std::to_string(idx));
      }
      seen.push_back(idx);
      const double val = parse_double(path, line_no, tok.substr(colon + 1));
      triplets.emplace_back(row, idx - 1, val);
      max_index = std::max(max_index, idx);
    }
  }
  if (labels.empty()) throw std::runtime_error(path + ": no data rows");

  Index n = num_features > 0 ? num_features : max_index;
  if (n < 1) throw std::runtime_error(path + ": no features found; pass --num-features");
  if (max_index > n) {
    throw std::runtime_error(path + ": feature index " + std::to_string(max_index) +
                             " exceeds --num-features " + std::to_string(n));
  }

  const Index m = static_cast<Index>(labels.size());
  SparseRowMatrix a(m, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Vector b = Eigen::Map<Vector>(labels.data(), m);
  return ProblemData(DesignMatrix::from_sparse(std::move(a)), std::move(b));
}

ProblemData read_csv_dense(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      row.push_back(parse_double(path, line_no, cell));
    }
    if (row.size() < 2) parse_fail(path, line_no, "need at least one feature and the response");
    if (width == 0) width = row.size();
    if (row.size() != width) {
      parse_fail(path, line_no, "ragged row: expected " + std::to_string(width) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");

  const Index m = static_cast<Index>(rows.size());
  const Index n = static_cast<Index>(width) - 1;
  Matrix a(m, n);
  Vector b(m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    b[i] = rows[static_cast<std::size_t>(i)].back();
  }
  return ProblemData(DesignMatrix::from_dense(std::move(a)), std::move(b));
}

LambdaSeq read_lambda_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> vals;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    vals.push_back(parse_double(path, line_no, line));
  }
  if (vals.empty()) throw std::runtime_error(path + ": empty lambda file");
  return LambdaSeq(Eigen::Map<Vector>(vals.data(), static_cast<Index>(vals.size())));
}

}  // namespace slope
