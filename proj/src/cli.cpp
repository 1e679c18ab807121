#include "slope/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "slope/admm.hpp"
#include "slope/alm.hpp"
#include "slope/apg.hpp"
#include "slope/io.hpp"
#include "slope/path.hpp"
#include "slope/record.hpp"
#include "slope/synth.hpp"

namespace slope {

namespace {

struct DataOptions {
  std::string data_path;
  std::string format = "libsvm";
  std::string synthetic;
  Index num_features = 0;
};

struct LambdaOptions {
  std::string lambda_file;
  double w1 = -1.0;
  double w2 = -1.0;
  double oscar_a = -1.0;
};

struct SolveOptions {
  std::string algo = "newt-alm";
  double tol_g = 1e-6;
  double tol_d = 1e-6;
  int max_outer = 100;
  int max_iters = 50000;
  double sigma0 = 0.0;
  std::string out_path;
  std::string trace_path;
};

Index parse_synth_field(const std::map<std::string, std::string>& kv, const std::string& key,
                        Index fallback, bool required) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    if (required) throw std::runtime_error("--synthetic: missing required field '" + key + "'");
    return fallback;
  }
  return static_cast<Index>(std::stoll(it->second));
}

std::pair<ProblemData, std::string> load_data(const DataOptions& opt) {
  if (!opt.synthetic.empty()) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(opt.synthetic);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("--synthetic: expected key=value, got '" + tok + "'");
      }
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    const Index m = parse_synth_field(kv, "m", 0, true);
    const Index n = parse_synth_field(kv, "n", 0, true);
    const Index g = parse_synth_field(kv, "g", 1, false);
    const Index seed = parse_synth_field(kv, "seed", 0, false);
    double sd = 0.0;
    if (auto it = kv.find("sd"); it != kv.end()) sd = std::stod(it->second);
    auto [p, x_true] = synth_instance(m, n, g, sd, static_cast<std::uint64_t>(seed));
    std::ostringstream id;
    id << "synthetic:m=" << m << ",n=" << n << ",g=" << g << ",sd=" << sd << ",seed=" << seed;
    return {std::move(p), id.str()};
  }
  if (opt.data_path.empty()) {
    throw std::runtime_error("either --data or --synthetic is required");
  }
  if (opt.format == "libsvm") return {read_libsvm(opt.data_path, opt.num_features), opt.data_path};
  if (opt.format == "csv") return {read_csv_dense(opt.data_path), opt.data_path};
  throw std::runtime_error("unknown --format '" + opt.format + "' (expected libsvm|csv)");
}

struct LambdaChoice {
  LambdaSeq lam;
  double w1 = 0.0;
  double w2 = 0.0;
  std::string source;
};

LambdaChoice build_lambda(const LambdaOptions& opt, const ProblemData& p) {
  const int given = (!opt.lambda_file.empty() ? 1 : 0) + (opt.w1 >= 0.0 || opt.w2 >= 0.0 ? 1 : 0) +
                    (opt.oscar_a >= 0.0 ? 1 : 0);
  if (given != 1) {
    throw std::runtime_error("exactly one of --lambda-file, --w1/--w2, --oscar-a is required");
  }
  if (!opt.lambda_file.empty()) {
    LambdaSeq lam = read_lambda_file(opt.lambda_file);
    if (lam.size() != p.n()) {
      throw std::runtime_error("--lambda-file: expected " + std::to_string(p.n()) +
                               " weights, got " + std::to_string(lam.size()));
    }
    return {std::move(lam), 0.0, 0.0, "file:" + opt.lambda_file};
  }
  if (opt.oscar_a >= 0.0) {
    const double atb = p.A().apply_transpose(p.b()).lpNorm<Eigen::Infinity>();
    const double w1 = opt.oscar_a * atb;
    const double w2 = w1 / std::sqrt(static_cast<double>(p.n()));
    return {oscar_weights(w1, w2, p.n()), w1, w2, "oscar-a:" + format_double(opt.oscar_a)};
  }
  if (opt.w1 < 0.0 || opt.w2 < 0.0) {
    throw std::runtime_error("--w1 and --w2 must both be given and nonnegative");
  }
  return {oscar_weights(opt.w1, opt.w2, p.n()), opt.w1, opt.w2, "w1w2"};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int effective_workers(int requested) {
  if (const char* env = std::getenv("SLOPE_NEWT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return std::min(requested, cap);
  }
  return requested;
}

int cmd_solve(const DataOptions& dopt, const LambdaOptions& lopt, const SolveOptions& sopt) {
  auto [p, instance] = load_data(dopt);
  LambdaChoice lc = build_lambda(lopt, p);
  const Algorithm algo = algorithm_from_name(sopt.algo);

  std::ostringstream trace;
  SolveReport rep;
  switch (algo) {
    case Algorithm::NewtAlm: {
      AlmConfig cfg;
      cfg.tol_g = sopt.tol_g;
      cfg.tol_d = sopt.tol_d;
      cfg.max_outer = sopt.max_outer;
      cfg.sigma0 = sopt.sigma0;
      AlmObserver obs;
      if (!sopt.trace_path.empty()) {
        trace << "k,sigma,grad_norm,dx_norm,eta_g,eta_d,newton_iters,cg_iters,obj_primal\n";
        obs = [&trace](const AlmIterRecord& r, const AlmState&) {
          trace << r.k << ',' << format_double(r.sigma) << ',' << format_double(r.grad_norm)
                << ',' << format_double(r.dx_norm) << ',' << format_double(r.eta_g) << ','
                << format_double(r.eta_d) << ',' << r.newton_iters << ',' << r.cg_iters << ','
                << format_double(r.obj_primal) << '\n';
        };
      }
      rep = alm_solve(p, lc.lam, cfg, {}, obs);
      break;
    }
    case Algorithm::Apg: {
      ApgConfig cfg;
      cfg.tol_g = sopt.tol_g;
      cfg.tol_d = sopt.tol_d;
      cfg.max_iters = sopt.max_iters;
      ApgObserver obs;
      if (!sopt.trace_path.empty()) {
        trace << "k,lipschitz,obj_primal,eta_g,eta_d\n";
        obs = [&trace](const ApgIterRecord& r, const Vector&) {
          trace << r.k << ',' << format_double(r.lipschitz) << ',' << format_double(r.obj_primal)
                << ',' << format_double(r.eta_g) << ',' << format_double(r.eta_d) << '\n';
        };
      }
      rep = apg_solve(p, lc.lam, cfg, {}, obs);
      break;
    }
    case Algorithm::Admm: {
      AdmmConfig cfg;
      cfg.tol_g = sopt.tol_g;
      cfg.tol_d = sopt.tol_d;
      cfg.max_iters = sopt.max_iters;
      AdmmObserver obs;
      if (!sopt.trace_path.empty()) {
        trace << "k,feasibility,obj_primal,eta_g,eta_d\n";
        obs = [&trace](const AdmmIterRecord& r, const Vector&, const Vector&, const Vector&) {
          trace << r.k << ',' << format_double(r.feasibility) << ',' << format_double(r.obj_primal)
                << ',' << format_double(r.eta_g) << ',' << format_double(r.eta_d) << '\n';
        };
      }
      rep = admm_solve(p, lc.lam, cfg, {}, obs);
      break;
    }
  }

  ResultRecord rec =
      make_record(instance, rep, lc.w1, lc.w2, lc.source, p.m(), p.n(), 10);
  const std::string json = rec.to_json();
  if (sopt.out_path.empty()) {
    std::cout << json << '\n';
  } else {
    write_text(sopt.out_path, json + "\n");
  }
  if (!sopt.trace_path.empty()) write_text(sopt.trace_path, trace.str());
  return rep.converged ? 0 : 1;
}

struct PathOptions {
  std::string w1_grid;
  std::string w2_rule = "scaled";
  int top_k = 10;
  bool warm = true;
  int workers = 1;
};

int cmd_path(const DataOptions& dopt, const SolveOptions& sopt, const PathOptions& popt) {
  auto [p, instance] = load_data(dopt);

  PathGrid grid;
  grid.w1_factors = parse_grid_range(popt.w1_grid);
  grid.top_k = popt.top_k;
  grid.warm_start = popt.warm;
  if (popt.w2_rule == "scaled") {
    grid.w2_rule = W2Rule::Scaled;
  } else if (popt.w2_rule.rfind("fixed:", 0) == 0) {
    grid.w2_rule = W2Rule::Fixed;
    grid.w2_fixed_factor = std::stod(popt.w2_rule.substr(6));
  } else if (popt.w2_rule.rfind("grid:", 0) == 0) {
    grid.w2_rule = W2Rule::Grid;
    std::string range = popt.w2_rule.substr(5);
    // spacing defaults to log for the 2-D grid
    if (std::count(range.begin(), range.end(), ':') == 2) range += ":log";
    grid.w2_factors = parse_grid_range(range);
  } else {
    throw std::runtime_error("--w2-rule must be fixed:F, scaled, or grid:lo:hi:count[:lin|log]");
  }

  PathRunConfig cfg;
  cfg.algorithm = algorithm_from_name(sopt.algo);
  cfg.tol_g = sopt.tol_g;
  cfg.tol_d = sopt.tol_d;
  cfg.max_outer = sopt.max_outer;
  cfg.max_first_order_iters = sopt.max_iters;
  cfg.sigma0 = sopt.sigma0;
  cfg.workers = effective_workers(popt.workers);

  const std::vector<ResultRecord> records = run_path(p, grid, cfg, instance);
  const std::string csv = path_csv(records, grid.top_k);
  if (sopt.out_path.empty()) {
    std::cout << csv;
  } else {
    write_text(sopt.out_path, csv);
  }
  for (const auto& rec : records) {
    if (!rec.converged) return 1;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"SLOPE/OSCAR least-squares solver (semismooth-Newton ALM, ADMM, APG)"};
  app.require_subcommand(1);

  DataOptions dopt;
  LambdaOptions lopt;
  SolveOptions sopt;
  PathOptions popt;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--data", dopt.data_path, "input matrix/response file");
    cmd->add_option("--format", dopt.format, "input format: libsvm|csv")
        ->check(CLI::IsMember({"libsvm", "csv"}));
    cmd->add_option("--num-features", dopt.num_features,
                    "override feature count for libsvm input");
    cmd->add_option("--synthetic", dopt.synthetic, "generate instance: m=..,n=..,g=..,sd=..,seed=..");
    cmd->add_option("--algo", sopt.algo, "newt-alm|admm|apg")
        ->check(CLI::IsMember({"newt-alm", "admm", "apg"}));
    cmd->add_option("--tol-g", sopt.tol_g, "duality-gap tolerance");
    cmd->add_option("--tol-d", sopt.tol_d, "dual-infeasibility tolerance");
    cmd->add_option("--max-outer", sopt.max_outer, "outer iteration cap (newt-alm)");
    cmd->add_option("--max-iters", sopt.max_iters, "iteration cap for admm/apg");
    cmd->add_option("--sigma0", sopt.sigma0, "initial penalty parameter (0 = auto)");
    cmd->add_option("--out", sopt.out_path, "output path (stdout when omitted)");
    cmd->add_option("--workers", popt.workers,
                    "parallel workers (cold-start path sweeps only)");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  add_common(solve);
  solve->add_option("--lambda-file", lopt.lambda_file, "explicit weights, one per line");
  solve->add_option("--w1", lopt.w1, "OSCAR l1 weight");
  solve->add_option("--w2", lopt.w2, "OSCAR pairwise weight");
  solve->add_option("--oscar-a", lopt.oscar_a,
                    "factor a: w1 = a ||A^T b||_inf, w2 = w1 / sqrt(n)");
  solve->add_option("--trace", sopt.trace_path, "per-iteration trace CSV");

  CLI::App* path = app.add_subcommand("path", "warm-started grid sweep");
  add_common(path);
  path->add_option("--w1-grid", popt.w1_grid, "lo:hi:count:lin|log factors of ||A^T b||_inf")
      ->required();
  path->add_option("--w2-rule", popt.w2_rule, "fixed:F | scaled | grid:lo:hi:count[:lin|log]");
  path->add_option("--top-k", popt.top_k, "coefficients reported per grid point");
  path->add_flag("--warm,!--no-warm", popt.warm, "warm-start along the sweep");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(dopt, lopt, sopt);
    return cmd_path(dopt, sopt, popt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace slope
