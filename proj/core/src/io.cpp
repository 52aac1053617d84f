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

#include "decor/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "decor/error.hpp"
#include "format.hpp"

namespace decor {
namespace {

using nlohmann::json;
using detail::format_double;

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string cell_location(std::size_t row, std::size_t column) {
  return "row " + std::to_string(row) + ", column " + std::to_string(column);
}

double parse_number(const std::string& text, std::size_t row, std::size_t column) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(cell_location(row, column), "expected a number, got '" + text + "'");
  }
  return value;
}

json to_json(const IndexSet& s) { return json(s.values()); }

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

// JSON-pointer aware accessors for spec parsing.
class Node {
 public:
  Node(const json& value, std::string pointer) : value_(value), pointer_(std::move(pointer)) {}

  const json& value() const { return value_; }
  const std::string& pointer() const { return pointer_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(pointer_.empty() ? "/" : pointer_, message);
  }

  bool has(const char* key) const { return value_.is_object() && value_.contains(key); }

  Node at(const char* key) const {
    if (!value_.is_object()) fail("expected an object");
    if (!value_.contains(key)) {
      throw ParseError(pointer_ + "/" + key, "missing required field");
    }
    return Node(value_.at(key), pointer_ + "/" + key);
  }

  Node at(std::size_t i) const { return Node(value_.at(i), pointer_ + "/" + std::to_string(i)); }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  std::uint64_t unsigned_integer() const {
    if (!value_.is_number_unsigned() && !(value_.is_number_integer() && value_.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return value_.get<std::uint64_t>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  std::size_t size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

 private:
  const json& value_;
  std::string pointer_;
};

template <typename Fn>
auto guarded(const Node& node, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    node.fail(e.what());
  } catch (const ArgumentError& e) {
    node.fail(e.what());
  }
}

ProcessKind parse_process(const Node& node) {
  const std::string kind = node.at("kind").string();
  if (kind == "ou") {
    OuProcess ou;
    if (node.has("sigma")) ou.sigma = node.at("sigma").number();
    if (node.has("drift")) ou.drift = node.at("drift").number();
    return ou;
  }
  if (kind == "band") {
    BandLimitedProcess band;
    if (node.has("band_limit")) band.band_limit = node.at("band_limit").unsigned_integer();
    if (node.has("coeff_std")) band.coeff_std = node.at("coeff_std").number();
    if (node.has("support")) {
      const Node s = node.at("support");
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < s.size(); ++i) idx.push_back(s.at(i).unsigned_integer());
      band.support = guarded(s, [&] { return IndexSet(std::move(idx)); });
    }
    return band;
  }
  node.at("kind").fail("unknown process kind '" + kind + "' (expected band or ou)");
}

SimConfig parse_sim(const Node& node) {
  SimConfig sim;
  if (node.has("process")) {
    const Node p = node.at("process");
    const std::string name = p.string();
    if (name == "ou") {
      sim = SimConfig::ornstein_uhlenbeck(sim.n);
    } else if (name != "band") {
      p.fail("unknown process '" + name + "' (expected band or ou)");
    }
  }
  if (node.has("d")) sim.d = node.at("d").unsigned_integer();
  if (node.has("beta")) {
    const Node b = node.at("beta");
    sim.beta.resize(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) sim.beta(static_cast<Eigen::Index>(i)) = b.at(i).number();
  } else {
    sim.beta = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(sim.d), 3.0);
  }
  if (node.has("horizon")) sim.horizon = node.at("horizon").number();
  if (node.has("sigma_eta2")) sim.sigma_eta2 = node.at("sigma_eta2").number();
  if (node.has("conf_prob")) sim.conf_prob = node.at("conf_prob").number();
  if (node.has("dense_u_noise_std")) sim.dense_u_noise_std = node.at("dense_u_noise_std").number();
  if (node.has("basis")) {
    const Node b = node.at("basis");
    sim.basis_kind = guarded(b, [&] { return parse_basis_kind(b.string()); });
  }
  if (node.has("confounding")) {
    const Node c = node.at("confounding");
    const std::string name = c.string();
    if (name == "fixed") {
      sim.confounding = ConfoundingDraw::FixedCount;
    } else if (name == "bernoulli") {
      sim.confounding = ConfoundingDraw::Bernoulli;
    } else {
      c.fail("unknown confounding draw '" + name + "' (expected fixed or bernoulli)");
    }
  }
  if (node.has("confounding_band")) {
    sim.confounding_band = node.at("confounding_band").unsigned_integer();
  }
  if (node.has("eps_process")) sim.eps_process = parse_process(node.at("eps_process"));
  if (node.has("u_process")) sim.u_process = parse_process(node.at("u_process"));
  if (static_cast<std::size_t>(sim.beta.size()) != sim.d) {
    node.at("beta").fail("beta must have d entries");
  }
  return sim;
}

MethodSpec parse_method(const Node& node, BasisKind default_basis) {
  MethodSpec m;
  const Node method = node.at("method");
  m.config.method = guarded(method, [&] { return parse_decor_method(method.string()); });
  m.config.basis_kind = default_basis;
  m.label = node.has("label") ? node.at("label").string() : std::string(to_string(m.config.method));
  if (node.has("a")) {
    const Node a = node.at("a");
    const double v = a.number();
    m.config.a = guarded(a, [&] {
      return v > 1.0 ? Threshold::count(static_cast<std::size_t>(a.unsigned_integer()))
                     : Threshold::fraction(v);
    });
  }
  if (node.has("max_iter")) m.config.max_iter = node.at("max_iter").unsigned_integer();
  if (node.has("bfs_cap")) m.config.bfs_cap = node.at("bfs_cap").unsigned_integer();
  if (node.has("basis")) {
    const Node b = node.at("basis");
    m.config.basis_kind = guarded(b, [&] { return parse_basis_kind(b.string()); });
  }
  return m;
}

std::vector<double> parse_number_list(const Node& node) {
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(node.at(i).number());
  return out;
}

}  // namespace

SeriesTable read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("row 1", "missing header row");
  }
  const auto header = split_fields(line);
  int t_col = -1;
  int y_col = -1;
  std::vector<int> x_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = trim(header[c]);
    if (name == "t") {
      t_col = static_cast<int>(c);
    } else if (name == "y") {
      y_col = static_cast<int>(c);
    } else if (name.rfind("x_", 0) == 0) {
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(name.data() + 2, name.data() + name.size(), idx);
      if (ec != std::errc{} || ptr != name.data() + name.size() || idx != x_cols.size() + 1) {
        throw ParseError(cell_location(1, c + 1), "expected column x_" +
                                                      std::to_string(x_cols.size() + 1) +
                                                      ", got '" + name + "'");
      }
      x_cols.push_back(static_cast<int>(c));
    } else {
      throw ParseError(cell_location(1, c + 1), "unknown column '" + name + "'");
    }
  }
  if (y_col < 0) throw ParseError("row 1", "header has no 'y' column");
  if (x_cols.empty()) throw ParseError("row 1", "header has no 'x_1' column");

  std::vector<std::vector<double>> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(row_number),
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    std::vector<double> values(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      values[c] = parse_number(trim(fields[c]), row_number, c + 1);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("row 2", "no data rows");

  const auto n = static_cast<Eigen::Index>(rows.size());
  SeriesTable table;
  table.x.resize(n, static_cast<Eigen::Index>(x_cols.size()));
  table.y.resize(n);
  table.t = t_col >= 0 ? Eigen::VectorXd(n) : time_grid(rows.size(), 1.0);
  for (Eigen::Index l = 0; l < n; ++l) {
    const auto& r = rows[static_cast<std::size_t>(l)];
    if (t_col >= 0) table.t(l) = r[static_cast<std::size_t>(t_col)];
    for (std::size_t c = 0; c < x_cols.size(); ++c) {
      table.x(l, static_cast<Eigen::Index>(c)) = r[static_cast<std::size_t>(x_cols[c])];
    }
    table.y(l) = r[static_cast<std::size_t>(y_col)];
  }
  return table;
}

Eigen::VectorXd time_grid(std::size_t n, double horizon) {
  Eigen::VectorXd t(static_cast<Eigen::Index>(n));
  for (Eigen::Index l = 0; l < t.size(); ++l) {
    t(l) = horizon * static_cast<double>(l + 1) / static_cast<double>(n);
  }
  return t;
}

void write_series_csv(std::ostream& out, const Eigen::VectorXd& t, const Eigen::MatrixXd& x,
                      const Eigen::VectorXd& y) {
  out << 't';
  for (Eigen::Index c = 0; c < x.cols(); ++c) out << ",x_" << (c + 1);
  out << ",y\n";
  for (Eigen::Index l = 0; l < x.rows(); ++l) {
    out << format_double(t(l));
    for (Eigen::Index c = 0; c < x.cols(); ++c) out << ',' << format_double(x(l, c));
    out << ',' << format_double(y(l)) << '\n';
  }
}

std::string truth_to_json(const GroundTruth& truth, const SimConfig& config) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["n"] = config.n;
  doc["d"] = config.d;
  doc["seed"] = truth.seed;
  doc["process"] = process_name(config.u_process);
  doc["basis"] = to_string(config.basis_kind);
  doc["sigma_eta2"] = config.sigma_eta2;
  doc["conf_prob"] = config.conf_prob;
  doc["g_set"] = to_json(truth.g_set);
  doc["beta"] = to_json(truth.beta);
  doc["u_time"] = to_json(truth.u_time);
  return doc.dump(2) + "\n";
}

GroundTruth truth_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("/", e.what());
  }
  const Node root(doc, "");
  GroundTruth truth;
  const Node g = root.at("g_set");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.size(); ++i) idx.push_back(g.at(i).unsigned_integer());
  truth.g_set = guarded(g, [&] { return IndexSet(std::move(idx)); });
  const Node b = root.at("beta");
  truth.beta.resize(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) truth.beta(static_cast<Eigen::Index>(i)) = b.at(i).number();
  truth.seed = root.at("seed").unsigned_integer();
  if (root.has("u_time")) {
    const Node u = root.at("u_time");
    truth.u_time.resize(static_cast<Eigen::Index>(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i) truth.u_time(static_cast<Eigen::Index>(i)) = u.at(i).number();
  }
  return truth;
}

std::string estimate_to_json(const DecorEstimate& estimate) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["index_base"] = 1;
  doc["method"] = to_string(estimate.method);
  doc["beta"] = to_json(estimate.beta);
  doc["excluded_frequencies"] = to_json(estimate.excluded_frequencies);
  doc["inliers"] = to_json(estimate.inliers);
  doc["iterations"] = estimate.iterations;
  doc["converged"] = estimate.converged;
  doc["fitted_time_domain"] = to_json(estimate.fitted_time_domain);
  doc["residuals_time_domain"] = to_json(estimate.residuals_time_domain);
  if (std::isfinite(estimate.r_squared)) {
    doc["r_squared"] = estimate.r_squared;
  } else {
    doc["r_squared"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

void write_fitted_csv(std::ostream& out, const Eigen::VectorXd& t, const DecorEstimate& estimate) {
  out << "t,fitted,residual\n";
  for (Eigen::Index l = 0; l < estimate.fitted_time_domain.size(); ++l) {
    out << format_double(t(l)) << ',' << format_double(estimate.fitted_time_domain(l)) << ','
        << format_double(estimate.residuals_time_domain(l)) << '\n';
  }
}

void write_excluded_csv(std::ostream& out, const DecorEstimate& estimate) {
  out << "k\n";
  for (std::size_t k : estimate.excluded_frequencies) out << k << '\n';
}

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Grid: return "grid";
    case ExperimentKind::Consistency: return "consistency";
    case ExperimentKind::OutlierFraction: return "outlier_fraction";
    case ExperimentKind::DenseNoise: return "dense_noise";
    case ExperimentKind::TwoDim: return "two_dim";
  }
  return "unknown";
}

ExperimentFile parse_experiment_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("/", std::string("invalid JSON: ") + e.what());
  }
  const Node root(doc, "");
  if (!doc.is_object()) root.fail("experiment spec must be a JSON object");

  ExperimentFile file;
  if (root.has("schema_version")) {
    const Node v = root.at("schema_version");
    if (v.string() != kSchemaVersion) v.fail("unsupported schema_version '" + v.string() + "'");
  }
  if (root.has("kind")) {
    const Node k = root.at("kind");
    const std::string name = k.string();
    bool known = false;
    for (auto kind : {ExperimentKind::Grid, ExperimentKind::Consistency,
                      ExperimentKind::OutlierFraction, ExperimentKind::DenseNoise,
                      ExperimentKind::TwoDim}) {
      if (name == to_string(kind)) {
        file.kind = kind;
        known = true;
      }
    }
    if (!known) k.fail("unknown experiment kind '" + name + "'");
  }

  ExperimentSpec& spec = file.spec;
  spec.sim = root.has("sim") ? parse_sim(root.at("sim")) : SimConfig{};

  const Node grid = root.at("n_grid");
  for (std::size_t i = 0; i < grid.size(); ++i) spec.n_grid.push_back(grid.at(i).unsigned_integer());
  if (spec.n_grid.empty()) grid.fail("n_grid must not be empty");
  for (std::size_t i = 1; i < spec.n_grid.size(); ++i) {
    if (spec.n_grid[i] < spec.n_grid[i - 1]) grid.at(i).fail("n_grid must be sorted ascending");
  }
  if (root.has("sigma_eta2_grid")) spec.sigma_eta2_grid = parse_number_list(root.at("sigma_eta2_grid"));
  if (root.has("conf_prob_grid")) spec.conf_prob_grid = parse_number_list(root.at("conf_prob_grid"));

  const Node methods = root.at("methods");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    spec.methods.push_back(parse_method(methods.at(i), spec.sim.basis_kind));
  }
  if (spec.methods.empty()) methods.fail("methods must not be empty");

  if (root.has("replicates")) {
    const Node r = root.at("replicates");
    spec.replicates = r.unsigned_integer();
    if (spec.replicates == 0) r.fail("replicates must be at least 1");
  }
  if (root.has("seed_base")) spec.seed_base = root.at("seed_base").unsigned_integer();
  if (root.has("threads")) spec.threads = root.at("threads").unsigned_integer();
  if (root.has("margin")) file.margin = root.at("margin").number();
  if (root.has("decay_ratio")) file.decay_ratio = root.at("decay_ratio").number();
  if (root.has("ols_floor")) file.ols_floor = root.at("ols_floor").number();

  // Remaining semantic checks (per-n sim validity) map to the sim object.
  const Node sim_node = root.has("sim") ? root.at("sim") : root;
  guarded(sim_node, [&] {
    validate(spec);
    return 0;
  });
  return file;
}

}  // namespace decor
