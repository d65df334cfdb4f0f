// Command-line harness around the sparseica library: dataset simulation,
// single solves, grid sweeps, and structural-assumption reports.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparseica/sparseica.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sparseica;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string fnv1a_hash(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

json sim_config_to_json(const SimConfig& cfg) {
  return json{{"n", cfg.n},
              {"samples", cfg.t},
              {"edge_prob", cfg.edge_prob},
              {"gaussian_ratio", cfg.gaussian_ratio},
              {"weight_lo", cfg.weight_lo},
              {"weight_hi", cfg.weight_hi},
              {"seed", cfg.seed},
              {"max_rejections", cfg.max_rejections}};
}

SimConfig sim_config_from_json(const json& j) {
  SimConfig cfg;
  if (j.contains("n")) cfg.n = j.at("n").get<int>();
  if (j.contains("samples")) cfg.t = j.at("samples").get<long>();
  if (j.contains("edge_prob")) cfg.edge_prob = j.at("edge_prob").get<double>();
  if (j.contains("gaussian_ratio")) cfg.gaussian_ratio = j.at("gaussian_ratio").get<double>();
  if (j.contains("weight_lo")) cfg.weight_lo = j.at("weight_lo").get<double>();
  if (j.contains("weight_hi")) cfg.weight_hi = j.at("weight_hi").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("max_rejections")) cfg.max_rejections = j.at("max_rejections").get<int>();
  return cfg;
}

json solver_config_to_json(const SolverConfig& cfg) {
  return json{{"method", cfg.method == Method::Likelihood ? "likelihood" : "decomposition"},
              {"c1", cfg.c1},
              {"beta", cfg.beta},
              {"k_max", cfg.k_max},
              {"eps1", cfg.eps1},
              {"eps2", cfg.eps2},
              {"inner_iters", cfg.inner_iters},
              {"restarts", cfg.restarts},
              {"init_scale", cfg.init_scale},
              {"lambda", cfg.mcp.lambda},
              {"alpha", cfg.mcp.alpha},
              {"threshold", cfg.threshold},
              {"use_g_constraint", cfg.use_g_constraint},
              {"ridge", cfg.ridge},
              {"seed", cfg.seed}};
}

/// Per-method solver flag overrides collected from the command line.
struct SolverOverrides {
  std::optional<double> c1, beta, eps1, eps2, init_scale, lambda, alpha, threshold, ridge;
  std::optional<int> k_max, inner_iters, restarts, threads;
  std::optional<std::uint64_t> seed;
  bool no_g_constraint = false;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--c1", c1, "initial penalty coefficient");
    cmd->add_option("--beta", beta, "penalty growth factor");
    cmd->add_option("--k-max", k_max, "outer iterations");
    cmd->add_option("--eps1", eps1, "decomposition residual tolerance");
    cmd->add_option("--eps2", eps2, "g constraint tolerance");
    cmd->add_option("--inner-iters", inner_iters, "inner quasi-Newton iterations");
    cmd->add_option("--restarts", restarts, "random restarts");
    cmd->add_option("--init-scale", init_scale, "restart initialization scale");
    cmd->add_option("--lambda", lambda, "MCP lambda");
    cmd->add_option("--alpha", alpha, "MCP alpha");
    cmd->add_option("--threshold", threshold, "post-hoc weight threshold");
    cmd->add_flag("--no-g-constraint", no_g_constraint, "drop the g(A) = 0 constraint");
    cmd->add_option("--ridge", ridge, "covariance ridge eta");
    cmd->add_option("--threads", threads, "restart worker threads (0 = auto)");
  }

  SolverConfig build(Method method, std::uint64_t default_seed) const {
    SolverConfig cfg = method == Method::Likelihood ? SolverConfig::likelihood_defaults()
                                                    : SolverConfig::decomposition_defaults();
    cfg.seed = seed.value_or(default_seed);
    if (c1) cfg.c1 = *c1;
    if (beta) cfg.beta = *beta;
    if (k_max) cfg.k_max = *k_max;
    if (eps1) cfg.eps1 = *eps1;
    if (eps2) cfg.eps2 = *eps2;
    if (inner_iters) cfg.inner_iters = *inner_iters;
    if (restarts) cfg.restarts = *restarts;
    if (init_scale) cfg.init_scale = *init_scale;
    if (lambda) cfg.mcp.lambda = *lambda;
    if (alpha) cfg.mcp.alpha = *alpha;
    if (threshold) cfg.threshold = *threshold;
    if (ridge) cfg.ridge = *ridge;
    if (threads) cfg.threads = *threads;
    cfg.use_g_constraint = !no_g_constraint;
    return cfg;
  }
};

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open for writing: " + path.string());
  f << content;
}

json load_json_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open: " + path.string());
  json j;
  f >> j;
  return j;
}

struct LoadedDataset {
  Dataset data;
  SimConfig sim;
};

LoadedDataset load_dataset(const fs::path& dir) {
  Matrix x = load_matrix_csv((dir / "X.csv").string());
  json truth = load_json_file(dir / "truth.json");
  MixingMatrix a(matrix_from_json(truth.at("matrix")));
  SimConfig sim = sim_config_from_json(truth.at("config"));
  // x = s a^T exactly at generation time, so the sources come back from an
  // exact solve.
  Matrix s = recover_sources(a, x);
  Dataset data{std::move(x), a, std::move(s), sim.gaussian_ratio};
  return LoadedDataset{std::move(data), sim};
}

struct RunRow {
  std::string config_hash;
  std::string method;
  int n = 0;
  long samples = 0;
  double gaussian_ratio = 0.0;
  std::uint64_t seed = 0;
  double mcc = 0.0;
  double amari = 0.0;
  long runtime_ms = 0;
};

constexpr const char* kMetricsHeader =
    "config_hash,method,n,samples,gaussian_ratio,seed,mcc,amari,runtime_ms";

std::string format_row(const RunRow& row) {
  std::ostringstream os;
  os << row.config_hash << ',' << row.method << ',' << row.n << ',' << row.samples << ','
     << detail::format_double(row.gaussian_ratio) << ',' << row.seed << ','
     << detail::format_double(row.mcc) << ',' << detail::format_double(row.amari) << ','
     << row.runtime_ms;
  return os.str();
}

void append_metrics_rows(const fs::path& path, const std::vector<RunRow>& rows) {
  const bool fresh = !fs::exists(path);
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::invalid_argument("cannot open for writing: " + path.string());
  if (fresh) f << kMetricsHeader << '\n';
  for (const auto& row : rows) f << format_row(row) << '\n';
}

json solve_result_to_json(const SolveResult& result) {
  json trace = json::array();
  for (const auto& t : result.trace) {
    trace.push_back(json{{"k", t.k},
                         {"penalty_coeff", t.penalty_coeff},
                         {"objective", t.objective},
                         {"residual", t.residual},
                         {"g_value", t.g_value}});
  }
  return json{{"matrix", matrix_to_json(result.a_hat.entries())},
              {"feasibility",
               json{{"residual", result.feasibility.residual},
                    {"g_value", result.feasibility.g_value},
                    {"feasible", result.feasibility.feasible}}},
              {"objective", result.objective},
              {"score", result.score},
              {"restarts_tried", result.restarts_tried},
              {"trace", std::move(trace)}};
}

bool is_likelihood_method(const std::string& method) {
  return method == "sparseica-likelihood" || method == "vanilla-likelihood";
}

bool is_solver_method(const std::string& method) {
  return method == "sparseica-likelihood" || method == "sparseica-decomposition" ||
         method == "vanilla-likelihood" || method == "vanilla-decomposition";
}

/// Runs one named method on a dataset and produces a metrics row plus the
/// method-specific result json.
RunRow run_method(const std::string& method, const Dataset& data, const SimConfig& sim,
                  const SolverOverrides& overrides, std::uint64_t seed, json* result_json) {
  const auto started = std::chrono::steady_clock::now();
  json result;
  MixingMatrix a_hat = MixingMatrix::identity(data.dim());
  if (is_solver_method(method)) {
    const Method m = is_likelihood_method(method) ? Method::Likelihood : Method::Decomposition;
    SolverConfig cfg = overrides.build(m, seed);
    if (method.rfind("vanilla", 0) == 0) cfg.use_g_constraint = false;
    CovarianceMatrix cov = empirical_covariance(data.x);
    SolveResult solved = m == Method::Likelihood ? solve_likelihood(cov, cfg)
                                                 : solve_decomposition(cov, cfg);
    a_hat = solved.a_hat;
    result = solve_result_to_json(solved);
  } else if (method == "fastica") {
    FastIcaResult fica = fastica_baseline(data.x, data.dim(), seed);
    a_hat = fica.mixing;
    result = json{{"matrix", matrix_to_json(fica.mixing.entries())},
                  {"converged", fica.converged},
                  {"iterations", fica.iterations}};
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }
  const auto finished = std::chrono::steady_clock::now();

  MetricsReport report = evaluate_estimate(a_hat, data);
  json cfg_json{{"method", method},
                {"sim", sim_config_to_json(sim)},
                {"seed", seed}};
  if (is_solver_method(method)) {
    const Method m = is_likelihood_method(method) ? Method::Likelihood : Method::Decomposition;
    cfg_json["solver"] = solver_config_to_json(overrides.build(m, seed));
    if (method.rfind("vanilla", 0) == 0) cfg_json["solver"]["use_g_constraint"] = false;
  }

  RunRow row;
  row.config_hash = fnv1a_hash(cfg_json.dump());
  row.method = method;
  row.n = data.dim();
  row.samples = data.samples();
  row.gaussian_ratio = data.gaussian_ratio;
  row.seed = seed;
  row.mcc = report.mcc;
  row.amari = report.amari;
  row.runtime_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(finished - started).count();
  if (result_json) {
    result["method"] = method;
    result["config_hash"] = row.config_hash;
    result["mcc"] = report.mcc;
    result["amari"] = report.amari;
    *result_json = std::move(result);
  }
  return row;
}

void write_dataset(const fs::path& dir, const SimConfig& cfg, const MixingMatrix& truth,
                   const Matrix& x) {
  fs::create_directories(dir);
  save_matrix_csv((dir / "X.csv").string(), x);
  json truth_json{{"matrix", matrix_to_json(truth.entries())},
                  {"config", sim_config_to_json(cfg)},
                  {"seed", cfg.seed}};
  write_text_file(dir / "truth.json", truth_json.dump(2) + "\n");
}

int cmd_simulate(const SimConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  int attempts = 0;
  MixingMatrix truth = sample_mixing(cfg, rng, &attempts);
  Matrix s = sample_sources(cfg.n, cfg.t, cfg.gaussian_ratio, rng);
  SimulatedData sim = mix_and_covariance(truth, s, cfg.gaussian_ratio);
  write_dataset(out_dir, cfg, truth, sim.dataset.x);
  std::cout << "seed " << cfg.seed << ": accepted support after " << attempts
            << (attempts == 1 ? " draw" : " draws") << " (acceptance rate "
            << detail::format_double(100.0 / attempts) << "%), wrote "
            << (out_dir / "X.csv").string() << "\n";
  return 0;
}

json verify_report(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("verify: matrix must be square");
  const int n = static_cast<int>(m.rows());
  SupportPattern xi = support_of(m, 0.0);
  json report;
  report["assumption1"] = check_structural_variability(xi);
  report["column_subset"] = check_column_subset(xi);
  report["zheng_a5"] = check_row_intersection_isolation(xi);
  if (n <= 12) {
    report["zheng_a4"] = check_union_overlap_dominance(xi);
  } else {
    report["zheng_a4"] = nullptr;  // exhaustive check capped at n = 12
  }
  const bool structurally_nonsingular = bipartite_perfect_matching(xi.mask()).has_value();
  report["nonsingular"] = structurally_nonsingular;
  if (structurally_nonsingular) {
    report["assumption2"] = check_lower_triangularizable(xi);
    SemConversion conv = a_to_sem(MixingMatrix(m));
    const bool dag = dag_check(conv.sem.b);
    report["dag_after_conversion"] = dag;
    report["mec_singleton"] = dag ? mec_is_singleton(conv.sem.b) : false;
  } else {
    report["assumption2"] = nullptr;
    report["dag_after_conversion"] = nullptr;
    report["mec_singleton"] = nullptr;
  }
  return report;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) /
         std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparsity-constrained ICA from second-order statistics"};
  app.require_subcommand(1);

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic dataset");
  std::string sim_config_path;
  std::string sim_out = ".";
  SimConfig sim_cfg;
  std::optional<int> opt_n;
  std::optional<long> opt_samples;
  std::optional<double> opt_ratio, opt_edge_prob;
  std::optional<std::uint64_t> opt_seed;
  sim_cmd->add_option("--config", sim_config_path, "SimConfig JSON file");
  sim_cmd->add_option("--n", opt_n, "number of sources");
  sim_cmd->add_option("--samples", opt_samples, "sample count T");
  sim_cmd->add_option("--gaussian-ratio", opt_ratio, "fraction of Gaussian sources");
  sim_cmd->add_option("--edge-prob", opt_edge_prob, "support edge probability");
  sim_cmd->add_option("--seed", opt_seed, "RNG seed");
  sim_cmd->add_option("--out", sim_out, "output directory");

  // ---- run ----
  auto* run_cmd = app.add_subcommand("run", "run one method on a dataset");
  std::string run_data, run_method;
  std::string run_out = ".";
  std::optional<std::uint64_t> run_seed;
  SolverOverrides run_overrides;
  run_cmd->add_option("--data", run_data, "dataset directory (X.csv + truth.json)")->required();
  run_cmd->add_option("--method", run_method,
                      "sparseica-likelihood | sparseica-decomposition | vanilla-likelihood | "
                      "vanilla-decomposition | fastica")
      ->required();
  run_cmd->add_option("--seed", run_seed, "solver / fastica seed");
  run_cmd->add_option("--out", run_out, "output directory");
  run_overrides.add_flags(run_cmd);

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "grid of simulations and methods");
  std::string sweep_axis = "sample_size";
  std::vector<double> sweep_grid;
  std::vector<std::string> sweep_methods;
  int sweep_trials = 10;
  std::string sweep_out = ".";
  std::string sweep_regime = "valid";
  std::optional<int> sweep_n;
  std::optional<long> sweep_samples;
  std::optional<double> sweep_ratio, sweep_edge_prob;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<int> sweep_workers;
  SolverOverrides sweep_overrides;
  sweep_cmd->add_option("--axis", sweep_axis, "sample_size | gaussian_ratio")
      ->check(CLI::IsMember({"sample_size", "gaussian_ratio"}));
  sweep_cmd->add_option("--grid", sweep_grid, "axis values")->required()->delimiter(',');
  sweep_cmd->add_option("--trials", sweep_trials, "trials per grid point");
  sweep_cmd->add_option("--methods", sweep_methods, "methods to run")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--n", sweep_n, "number of sources");
  sweep_cmd->add_option("--samples", sweep_samples, "sample count (gaussian_ratio axis)");
  sweep_cmd->add_option("--gaussian-ratio", sweep_ratio, "ratio (sample_size axis)");
  sweep_cmd->add_option("--edge-prob", sweep_edge_prob, "support edge probability");
  sweep_cmd->add_option("--seed", sweep_seed, "base seed");
  sweep_cmd->add_option("--regime", sweep_regime,
                        "valid: all methods share assumption-satisfying data; paired: "
                        "vanilla/fastica run on assumption-violating data")
      ->check(CLI::IsMember({"valid", "paired"}));
  sweep_cmd->add_option("--workers", sweep_workers, "parallel sweep cells (0 = auto)");
  sweep_cmd->add_option("--out", sweep_out, "output directory");
  sweep_overrides.add_flags(sweep_cmd);

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "structural assumption report");
  std::string verify_path;
  verify_cmd->add_option("--matrix", verify_path, "square matrix CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*sim_cmd) {
      if (!sim_config_path.empty()) sim_cfg = sim_config_from_json(load_json_file(sim_config_path));
      if (opt_n) sim_cfg.n = *opt_n;
      if (opt_samples) sim_cfg.t = *opt_samples;
      if (opt_ratio) sim_cfg.gaussian_ratio = *opt_ratio;
      if (opt_edge_prob) sim_cfg.edge_prob = *opt_edge_prob;
      if (opt_seed) sim_cfg.seed = *opt_seed;
      return cmd_simulate(sim_cfg, sim_out);
    }

    if (*run_cmd) {
      LoadedDataset loaded = load_dataset(run_data);
      const std::uint64_t seed = run_seed.value_or(loaded.sim.seed);
      fs::create_directories(run_out);
      json result;
      RunRow row = run_method(run_method, loaded.data, loaded.sim, run_overrides, seed, &result);
      write_text_file(fs::path(run_out) / "result.json", result.dump(2) + "\n");
      append_metrics_rows(fs::path(run_out) / "metrics.csv", {row});
      std::cout << format_row(row) << "\n";
      return 0;
    }

    if (*sweep_cmd) {
      if (sweep_grid.empty()) throw std::invalid_argument("sweep: empty grid");
      if (sweep_trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
      for (const auto& m : sweep_methods) {
        if (!is_solver_method(m) && m != "fastica") {
          throw std::invalid_argument("unknown method: " + m);
        }
      }
      SimConfig base;
      if (sweep_n) base.n = *sweep_n;
      if (sweep_samples) base.t = *sweep_samples;
      if (sweep_ratio) base.gaussian_ratio = *sweep_ratio;
      if (sweep_edge_prob) base.edge_prob = *sweep_edge_prob;
      const std::uint64_t base_seed = sweep_seed.value_or(0);
      const bool paired = sweep_regime == "paired";

      struct Cell {
        int grid_index;
        int trial;
        double value;
      };
      std::vector<Cell> cells;
      for (int gi = 0; gi < static_cast<int>(sweep_grid.size()); ++gi) {
        for (int trial = 0; trial < sweep_trials; ++trial) {
          cells.push_back({gi, trial, sweep_grid[gi]});
        }
      }

      // One row per cell and method; failures are recorded and the sweep
      // continues.
      std::vector<std::vector<RunRow>> cell_rows(cells.size());
      std::vector<std::vector<std::string>> cell_errors(cells.size());
      SolverOverrides cell_overrides = sweep_overrides;
      cell_overrides.threads = 1;  // cells are already parallel
      detail::parallel_for_index(
          static_cast<int>(cells.size()), sweep_workers.value_or(0), [&](int ci) {
            const Cell& cell = cells[ci];
            SimConfig cfg = base;
            if (sweep_axis == "sample_size") {
              cfg.t = static_cast<long>(cell.value);
            } else {
              cfg.gaussian_ratio = cell.value;
            }
            cfg.seed = base_seed + 100000ull * static_cast<std::uint64_t>(cell.grid_index) +
                       static_cast<std::uint64_t>(cell.trial);
            auto make_data = [&](bool violating) {
              std::mt19937_64 rng(cfg.seed + (violating ? 0x5eedull : 0ull));
              MixingMatrix truth =
                  violating ? sample_mixing_violating(cfg, rng) : sample_mixing(cfg, rng);
              Matrix s = sample_sources(cfg.n, cfg.t, cfg.gaussian_ratio, rng);
              return mix_and_covariance(truth, s, cfg.gaussian_ratio).dataset;
            };
            std::optional<Dataset> valid_data, violating_data;
            for (const auto& method : sweep_methods) {
              const bool use_violating =
                  paired && (method.rfind("vanilla", 0) == 0 || method == "fastica");
              try {
                auto& slot = use_violating ? violating_data : valid_data;
                if (!slot) slot = make_data(use_violating);
                cell_rows[ci].push_back(
                    run_method(method, *slot, cfg, cell_overrides, cfg.seed, nullptr));
              } catch (const std::exception& e) {
                cell_errors[ci].push_back(method + " @grid=" +
                                          detail::format_double(cell.value) + " trial=" +
                                          std::to_string(cell.trial) + ": " + e.what());
              }
            }
          });

      fs::create_directories(sweep_out);
      std::vector<RunRow> all_rows;
      for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        for (const auto& row : cell_rows[ci]) all_rows.push_back(row);
        for (const auto& err : cell_errors[ci]) std::cerr << "sweep error: " << err << "\n";
      }
      append_metrics_rows(fs::path(sweep_out) / "metrics.csv", all_rows);

      std::ofstream summary(fs::path(sweep_out) / "summary.csv");
      summary << "method,axis,value,trials,median_mcc,stderr_mcc,median_amari,stderr_amari\n";
      for (const auto& method : sweep_methods) {
        for (int gi = 0; gi < static_cast<int>(sweep_grid.size()); ++gi) {
          std::vector<double> mccs, amaris;
          for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            if (cells[ci].grid_index != gi) continue;
            for (const auto& row : cell_rows[ci]) {
              if (row.method == method) {
                mccs.push_back(row.mcc);
                amaris.push_back(row.amari);
              }
            }
          }
          if (mccs.empty()) continue;
          summary << method << ',' << sweep_axis << ','
                  << detail::format_double(sweep_grid[gi]) << ',' << mccs.size() << ','
                  << detail::format_double(median(mccs)) << ','
                  << detail::format_double(standard_error(mccs)) << ','
                  << detail::format_double(median(amaris)) << ','
                  << detail::format_double(standard_error(amaris)) << '\n';
        }
      }
      std::cout << "wrote " << (fs::path(sweep_out) / "metrics.csv").string() << " ("
                << all_rows.size() << " rows)\n";
      return 0;
    }

    if (*verify_cmd) {
      Matrix m = load_matrix_csv(verify_path);
      std::cout << verify_report(m).dump(2) << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
