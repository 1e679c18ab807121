#include "slope/record.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace slope {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::pair<Index, double>> top_coefficients(const Vector& x, int k) {
  std::vector<Index> idx(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
  std::stable_sort(idx.begin(), idx.end(), [&x](Index a, Index b) {
    return std::abs(x[a]) > std::abs(x[b]);
  });
  std::vector<std::pair<Index, double>> out;
  const int count = std::min<int>(k, static_cast<int>(x.size()));
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.emplace_back(idx[static_cast<std::size_t>(i)], x[idx[static_cast<std::size_t>(i)]]);
  return out;
}

std::string ResultRecord::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["instance"] = instance;
  j["algorithm"] = algorithm;
  j["lambda_source"] = lambda_source;
  j["w1"] = w1;
  j["w2"] = w2;
  j["m"] = m;
  j["n"] = n;
  j["converged"] = converged;
  j["obj_primal"] = obj_primal;
  j["obj_dual"] = obj_dual;
  j["eta_g"] = eta_g;
  j["eta_d"] = eta_d;
  j["eta_kkt"] = eta_kkt;
  j["nnz999"] = nnz999;
  j["outer_iters"] = outer_iters;
  j["inner_iters"] = inner_iters;
  j["wall_ms"] = wall_ms;
  nlohmann::ordered_json top = nlohmann::ordered_json::array();
  for (const auto& [index, value] : top_k) {
    top.push_back({{"index", index}, {"value", value}});
  }
  j["top_k"] = std::move(top);
  return j.dump(2);
}

std::string ResultRecord::csv_header(int top_k) {
  std::string h =
      "w1,w2,algorithm,converged,obj_primal,eta_g,eta_d,eta_kkt,nnz999,outer_iters,"
      "inner_iters,wall_ms";
  for (int i = 1; i <= top_k; ++i) {
    h += ",top_idx_" + std::to_string(i) + ",top_val_" + std::to_string(i);
  }
  return h;
}

std::string ResultRecord::to_csv_row(int k) const {
  std::string row = format_double(w1) + "," + format_double(w2) + "," + algorithm + "," +
                    (converged ? "1" : "0") + "," + format_double(obj_primal) + "," +
                    format_double(eta_g) + "," + format_double(eta_d) + "," +
                    format_double(eta_kkt) + "," + std::to_string(nnz999) + "," +
                    std::to_string(outer_iters) + "," + std::to_string(inner_iters) + "," +
                    format_double(wall_ms);
  for (int i = 0; i < k; ++i) {
    if (i < static_cast<int>(top_k.size())) {
      row += "," + std::to_string(top_k[static_cast<std::size_t>(i)].first) + "," +
             format_double(top_k[static_cast<std::size_t>(i)].second);
    } else {
      row += ",,";
    }
  }
  return row;
}

ResultRecord make_record(const std::string& instance, const SolveReport& rep, double w1,
                         double w2, const std::string& lambda_source, Index m, Index n,
                         int top_k) {
  ResultRecord rec;
  rec.instance = instance;
  rec.algorithm = algorithm_name(rep.algorithm);
  rec.lambda_source = lambda_source;
  rec.w1 = w1;
  rec.w2 = w2;
  rec.m = m;
  rec.n = n;
  rec.converged = rep.converged;
  rec.obj_primal = rep.obj_primal;
  rec.obj_dual = rep.obj_dual;
  rec.eta_g = rep.eta_g;
  rec.eta_d = rep.eta_d;
  rec.eta_kkt = rep.eta_kkt;
  rec.nnz999 = rep.nnz999;
  rec.outer_iters = rep.outer_iters;
  rec.inner_iters = rep.inner_iters_total;
  rec.wall_ms = rep.wall_ms;
  rec.top_k = top_coefficients(rep.x, top_k);
  return rec;
}

}  // namespace slope
