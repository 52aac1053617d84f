// Copyright 2026 The decor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "decor/basis.hpp"
#include "decor/bench.hpp"
#include "decor/decor.hpp"
#include "decor/error.hpp"
#include "decor/io.hpp"
#include "decor/sim.hpp"

namespace decor::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulateOptions {
  std::string process = "band";
  std::string basis = "cosine";
  std::size_t n = 128;
  std::size_t d = 1;
  std::vector<double> beta;
  double sigma2 = 1.0;
  double conf_prob = 0.25;
  double dense_noise = 0.0;
  std::size_t band_limit = 50;
  std::string confounding = "fixed";
  std::optional<std::size_t> confounding_band;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string truth;
};

struct FitOptions {
  std::string input;
  std::string basis = "cosine";
  std::string method = "torrent";
  double a = 0.7;
  std::size_t max_iter = 100;
  std::optional<std::size_t> n;
  std::uint64_t bfs_cap = kDefaultSubsetCap;
  std::string out;
  std::string truth;
};

struct ExperimentOptions {
  std::string spec;
  std::string out = ".";
  std::optional<std::size_t> threads;
};

struct CheckBasisOptions {
  std::string kind = "cosine";
  std::size_t n = 64;
  double tol = 1e-10;
  std::string dump;
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return file;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Threshold threshold_from_flag(double a) {
  if (a > 1.0) {
    if (a != std::floor(a)) throw UsageError("--a above 1 must be an integer count");
    return Threshold::count(static_cast<std::size_t>(a));
  }
  return Threshold::fraction(a);
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  SimConfig config = opt.process == "ou" ? SimConfig::ornstein_uhlenbeck(opt.n)
                                         : SimConfig::band_limited(opt.n);
  config.d = opt.d;
  config.basis_kind = parse_basis_kind(opt.basis);
  if (opt.beta.empty()) {
    config.beta = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(opt.d), 3.0);
  } else if (opt.beta.size() == 1) {
    config.beta = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(opt.d), opt.beta.front());
  } else {
    config.beta = Eigen::Map<const Eigen::VectorXd>(opt.beta.data(),
                                                    static_cast<Eigen::Index>(opt.beta.size()));
  }
  config.sigma_eta2 = opt.sigma2;
  config.conf_prob = opt.conf_prob;
  config.dense_u_noise_std = opt.dense_noise;
  config.confounding =
      opt.confounding == "bernoulli" ? ConfoundingDraw::Bernoulli : ConfoundingDraw::FixedCount;
  config.confounding_band = opt.confounding_band;
  if (auto* band = std::get_if<BandLimitedProcess>(&config.u_process)) band->band_limit = opt.band_limit;
  if (auto* band = std::get_if<BandLimitedProcess>(&config.eps_process)) band->band_limit = opt.band_limit;
  config.seed = opt.seed ? *opt.seed : entropy_seed();

  const SimData data = generate(config);
  const Eigen::VectorXd t = time_grid(config.n, config.horizon);

  std::ostream& report = opt.out.empty() ? err : out;
  if (opt.out.empty()) {
    write_series_csv(out, t, data.x, data.y);
  } else {
    auto file = open_output(opt.out);
    write_series_csv(file, t, data.x, data.y);
  }
  std::string truth_path = opt.truth;
  if (truth_path.empty() && !opt.out.empty()) truth_path = opt.out + ".truth.json";
  if (!truth_path.empty()) {
    auto file = open_output(truth_path);
    file << truth_to_json(data.truth, config);
  }
  report << "confounded frequencies |G| = " << data.truth.g_set.size() << '\n'
         << "seed = " << config.seed << '\n';
  return kSuccess;
}

struct LoadedFit {
  SeriesTable table;
  DecorConfig config;
  std::optional<GroundTruth> truth;
};

LoadedFit load_fit(const FitOptions& opt) {
  LoadedFit loaded;
  std::ifstream in(opt.input);
  if (!in) throw UsageError("cannot read '" + opt.input + "'");
  loaded.table = read_series_csv(in);
  if (opt.n) {
    const auto rows = static_cast<std::size_t>(loaded.table.y.size());
    if (*opt.n == 0 || *opt.n > rows) {
      throw UsageError("--n " + std::to_string(*opt.n) + " exceeds the " + std::to_string(rows) +
                       " input rows");
    }
    const auto n = static_cast<Eigen::Index>(*opt.n);
    loaded.table.t = loaded.table.t.head(n).eval();
    loaded.table.x = loaded.table.x.topRows(n).eval();
    loaded.table.y = loaded.table.y.head(n).eval();
  }
  loaded.config.basis_kind = parse_basis_kind(opt.basis);
  loaded.config.method = parse_decor_method(opt.method);
  loaded.config.a = threshold_from_flag(opt.a);
  loaded.config.max_iter = opt.max_iter;
  loaded.config.bfs_cap = opt.bfs_cap;
  if (!opt.truth.empty()) loaded.truth = truth_from_json(read_file(opt.truth));
  return loaded;
}

json estimate_document(const DecorEstimate& est, const std::optional<GroundTruth>& truth) {
  json doc = json::parse(estimate_to_json(est));
  if (truth && truth->beta.size() == est.beta.size()) {
    doc["abs_error"] = (est.beta - truth->beta).cwiseAbs().mean();
  }
  return doc;
}

int cmd_fit(const FitOptions& opt, std::ostream& out) {
  const LoadedFit loaded = load_fit(opt);
  const DecorEstimate est = decor_fit(loaded.table.x, loaded.table.y, loaded.config);
  const std::string text = estimate_document(est, loaded.truth).dump(2) + "\n";
  if (opt.out.empty()) {
    out << text;
  } else {
    auto file = open_output(opt.out);
    file << text;
  }
  return est.converged ? kSuccess : kNotConverged;
}

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd ca = a.array() - a.mean();
  const Eigen::ArrayXd cb = b.array() - b.mean();
  const double denom = std::sqrt((ca * ca).sum() * (cb * cb).sum());
  return denom > 0.0 ? (ca * cb).sum() / denom : 0.0;
}

int cmd_deconfound(const FitOptions& opt, std::ostream& out) {
  if (opt.out.empty()) throw UsageError("deconfound requires --out <directory>");
  const LoadedFit loaded = load_fit(opt);
  const DecorEstimate est = deconfound(loaded.table.x, loaded.table.y, loaded.config);

  const fs::path dir(opt.out);
  fs::create_directories(dir);
  {
    auto file = open_output(dir / "fitted.csv");
    write_fitted_csv(file, loaded.table.t, est);
  }
  {
    auto file = open_output(dir / "excluded.csv");
    write_excluded_csv(file, est);
  }
  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["n"] = loaded.table.y.size();
  summary["method"] = to_string(est.method);
  summary["beta"] = json::parse(estimate_to_json(est))["beta"];
  summary["r_squared"] = est.r_squared;
  summary["iterations"] = est.iterations;
  summary["converged"] = est.converged;
  summary["excluded_count"] = est.excluded_frequencies.size();
  if (loaded.truth && loaded.truth->u_time.size() == est.residuals_time_domain.size()) {
    summary["residual_confounder_correlation"] =
        correlation(est.residuals_time_domain, loaded.truth->u_time);
  }
  {
    auto file = open_output(dir / "summary.json");
    file << summary.dump(2) << '\n';
  }
  out << "R^2 = " << est.r_squared << ", excluded " << est.excluded_frequencies.size()
      << " frequencies, wrote " << dir.string() << '\n';
  return est.converged ? kSuccess : kNotConverged;
}

int cmd_experiment(const ExperimentOptions& opt, std::ostream& out) {
  ExperimentFile file = parse_experiment_spec(read_file(opt.spec));
  if (opt.threads) file.spec.threads = *opt.threads;

  ExperimentResult result;
  json verdicts = json::array();
  bool verdict_ok = true;
  switch (file.kind) {
    case ExperimentKind::Grid: result = run_experiment(file.spec); break;
    case ExperimentKind::Consistency: {
      ConsistencyResult c = run_consistency_sweep(file.spec, file.decay_ratio, file.ols_floor);
      for (const auto& v : c.verdicts) {
        verdicts.push_back({{"method", v.method},
                            {"mae_smallest_n", v.mae_smallest_n},
                            {"mae_largest_n", v.mae_largest_n},
                            {"passed", v.passed}});
        out << "verdict " << v.method << ": " << (v.passed ? "pass" : "fail") << " (MAE "
            << v.mae_smallest_n << " -> " << v.mae_largest_n << ")\n";
      }
      verdict_ok = c.all_passed;
      result = std::move(c.result);
      break;
    }
    case ExperimentKind::OutlierFraction:
      result = run_ablation(AblationKind::OutlierFraction, file.spec, file.margin);
      break;
    case ExperimentKind::DenseNoise:
      result = run_ablation(AblationKind::DenseNoise, file.spec, file.margin);
      break;
    case ExperimentKind::TwoDim:
      result = run_ablation(AblationKind::TwoDim, file.spec, file.margin);
      break;
  }

  const fs::path dir(opt.out);
  fs::create_directories(dir);
  {
    auto f = open_output(dir / "results.csv");
    write_results_csv(f, result.rows);
  }
  {
    auto f = open_output(dir / "replicates.csv");
    write_replicates_csv(f, result.replicates);
  }
  if (file.kind == ExperimentKind::Consistency) {
    auto f = open_output(dir / "verdict.json");
    f << json{{"schema_version", kSchemaVersion}, {"all_passed", verdict_ok}, {"verdicts", verdicts}}
             .dump(2)
      << '\n';
  }
  write_results_csv(out, result.rows);

  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.replicates_failed;
  if (failed > 0) {
    out << failed << " replicate fits were infeasible\n";
    return kInfeasible;
  }
  return kSuccess;
}

int cmd_check_basis(const CheckBasisOptions& opt, std::ostream& out) {
  const BasisMatrix basis = BasisMatrix::build(parse_basis_kind(opt.kind), opt.n);
  const OrthonormalityReport report = check_orthonormality(basis, opt.tol);
  if (!opt.dump.empty()) {
    auto file = open_output(opt.dump);
    write_basis_csv(file, basis);
  }
  out << (report.ok ? "pass" : "fail") << ": " << opt.kind << " basis n = " << opt.n
      << ", max deviation " << report.max_deviation << " (tol " << opt.tol << ")\n";
  return report.ok ? kSuccess : kFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deconfounding by robust regression in an orthonormal basis domain", "decor"};
  app.require_subcommand(1);
  std::optional<std::size_t> global_threads;
  app.add_option("--threads", global_threads, "Worker threads for experiments");

  const std::vector<std::string> processes{"band", "ou"};
  const std::vector<std::string> bases{"cosine", "haar"};
  const std::vector<std::string> methods{"torrent", "bfs", "olsbaseline"};

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a synthetic confounded data set");
  simulate->add_option("--process", sim.process, "Process family")->check(CLI::IsMember(processes));
  simulate->add_option("--basis", sim.basis, "Basis")->check(CLI::IsMember(bases));
  simulate->add_option("--n", sim.n, "Sample count")->check(CLI::PositiveNumber);
  simulate->add_option("--d", sim.d, "Covariate dimension")->check(CLI::PositiveNumber);
  simulate->add_option("--beta", sim.beta, "Causal coefficients (one value or d values)")->delimiter(',');
  simulate->add_option("--sigma2", sim.sigma2, "Variance of the response noise")->check(CLI::NonNegativeNumber);
  simulate->add_option("--conf-prob", sim.conf_prob, "Fraction of confounded frequencies")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--dense-noise", sim.dense_noise, "Std of i.i.d. noise added to U")->check(CLI::NonNegativeNumber);
  simulate->add_option("--band-limit", sim.band_limit, "Band-limited support {1..L}")->check(CLI::PositiveNumber);
  simulate->add_option("--confounding", sim.confounding, "Draw of G")->check(CLI::IsMember({"fixed", "bernoulli"}));
  simulate->add_option("--confounding-band", sim.confounding_band, "Draw G from {1..K} only");
  simulate->add_option("--seed", sim.seed, "Random seed (default: system entropy)");
  simulate->add_option("--out", sim.out, "Output CSV (default: stdout)");
  simulate->add_option("--truth", sim.truth, "Ground-truth JSON (default: <out>.truth.json)");

  FitOptions fit;
  auto add_fit_flags = [&](CLI::App* cmd) {
    cmd->add_option("--input", fit.input, "Input CSV with t,x_1..x_d,y")->required();
    cmd->add_option("--basis", fit.basis, "Basis")->check(CLI::IsMember(bases));
    cmd->add_option("--method", fit.method, "Robust regression method")->check(CLI::IsMember(methods));
    cmd->add_option("--a", fit.a, "Threshold: fraction in (0,1] or integer count")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", fit.max_iter, "Torrent iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--n", fit.n, "Use only the first n rows");
    cmd->add_option("--bfs-cap", fit.bfs_cap, "Maximum BFS subsets");
    cmd->add_option("--truth", fit.truth, "Ground-truth JSON for scoring");
  };
  auto* fit_cmd = app.add_subcommand("fit", "Estimate the causal effect of X on Y");
  add_fit_flags(fit_cmd);
  fit_cmd->add_option("--out", fit.out, "Output JSON (default: stdout)");
  auto* deconf_cmd = app.add_subcommand("deconfound", "Fitted values, residuals and excluded frequencies");
  add_fit_flags(deconf_cmd);
  deconf_cmd->add_option("--out", fit.out, "Output directory")->required();

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a Monte Carlo experiment spec");
  exp_cmd->add_option("spec,--spec", exp.spec, "Experiment spec JSON")->required();
  exp_cmd->add_option("--out", exp.out, "Output directory");
  exp_cmd->add_option("--threads", exp.threads, "Worker threads");

  CheckBasisOptions chk;
  auto* chk_cmd = app.add_subcommand("check-basis", "Verify discrete orthonormality of a basis");
  chk_cmd->add_option("--kind,--basis", chk.kind, "Basis")->check(CLI::IsMember(bases));
  chk_cmd->add_option("--n", chk.n, "Sample count")->check(CLI::PositiveNumber);
  chk_cmd->add_option("--tol", chk.tol, "Tolerance");
  chk_cmd->add_option("--dump", chk.dump, "Write the basis as j,k,value CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  if (global_threads && !exp.threads) exp.threads = global_threads;

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out, err);
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (deconf_cmd->parsed()) return cmd_deconfound(fit, out);
    if (exp_cmd->parsed()) return cmd_experiment(exp, out);
    if (chk_cmd->parsed()) return cmd_check_basis(chk, out);
  } catch (const ParseError& e) {
    err << "decor: parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const FeasibilityError& e) {
    err << "decor: infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ConfigError& e) {
    err << "decor: usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ArgumentError& e) {
    err << "decor: usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "decor: usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "decor: error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace decor::cli
