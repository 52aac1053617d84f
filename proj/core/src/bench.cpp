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

#include "decor/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>

#include "decor/error.hpp"
#include "format.hpp"

namespace decor {
namespace {

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double mean_abs_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  return (estimate - truth).cwiseAbs().mean();
}

struct Cell {
  std::size_t n;
  double sigma_eta2;
  double conf_prob;
};

std::vector<Cell> cells_of(const ExperimentSpec& spec) {
  const std::vector<double> sigmas =
      spec.sigma_eta2_grid.empty() ? std::vector<double>{spec.sim.sigma_eta2} : spec.sigma_eta2_grid;
  const std::vector<double> probs =
      spec.conf_prob_grid.empty() ? std::vector<double>{spec.sim.conf_prob} : spec.conf_prob_grid;
  std::vector<Cell> cells;
  for (double s : sigmas) {
    for (double p : probs) {
      for (std::size_t n : spec.n_grid) cells.push_back({n, s, p});
    }
  }
  return cells;
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  if (spec.n_grid.empty()) throw ConfigError("n_grid must not be empty");
  if (!std::is_sorted(spec.n_grid.begin(), spec.n_grid.end())) {
    throw ConfigError("n_grid must be sorted ascending");
  }
  if (spec.methods.empty()) throw ConfigError("experiment needs at least one method");
  if (spec.replicates == 0) throw ConfigError("replicates must be at least 1");
  for (double s : spec.sigma_eta2_grid) {
    if (!(s >= 0.0)) throw ConfigError("sigma_eta2 grid values must be non-negative");
  }
  for (double p : spec.conf_prob_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("conf_prob grid values must lie in [0, 1]");
  }
  for (std::size_t n : spec.n_grid) {
    SimConfig sim = spec.sim;
    sim.n = n;
    validate(sim);
  }
}

ResultRow summarize(const std::vector<ReplicateRecord>& cell) {
  ResultRow row;
  if (cell.empty()) return row;
  row.n = cell.front().n;
  row.method = cell.front().method;
  row.sigma_eta2 = cell.front().sigma_eta2;
  row.conf_prob = cell.front().conf_prob;

  double sum = 0.0;
  double iter_sum = 0.0;
  std::size_t ok = 0;
  for (const auto& r : cell) {
    if (r.failed) {
      ++row.replicates_failed;
      continue;
    }
    ++ok;
    sum += r.abs_error;
    iter_sum += static_cast<double>(r.iterations);
    row.max_iterations = std::max(row.max_iterations, r.iterations);
  }
  if (ok == 0) {
    row.mae = row.mae_stderr = row.mean_iterations = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  const auto count = static_cast<double>(ok);
  row.mae = sum / count;
  row.mean_iterations = iter_sum / count;
  if (ok > 1) {
    double sq = 0.0;
    for (const auto& r : cell) {
      if (!r.failed) sq += (r.abs_error - row.mae) * (r.abs_error - row.mae);
    }
    row.mae_stderr = std::sqrt(sq / (count - 1.0)) / std::sqrt(count);
  }
  return row;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  ExperimentResult result;
  const std::size_t methods = spec.methods.size();

  for (const Cell& cell : cells_of(spec)) {
    SimConfig sim = spec.sim;
    sim.n = cell.n;
    sim.sigma_eta2 = cell.sigma_eta2;
    sim.conf_prob = cell.conf_prob;

    std::vector<ReplicateRecord> records(spec.replicates * methods);
    parallel_for(spec.replicates, spec.threads, [&](std::size_t r) {
      SimConfig local = sim;
      local.seed = Rng::substream_key(spec.seed_base, {cell.n, r});
      Rng rng(local.seed);
      const SimData data = generate(local, rng);
      for (std::size_t m = 0; m < methods; ++m) {
        ReplicateRecord& rec = records[r * methods + m];
        rec.n = cell.n;
        rec.method = spec.methods[m].label;
        rec.sigma_eta2 = cell.sigma_eta2;
        rec.conf_prob = cell.conf_prob;
        rec.replicate = r;
        try {
          const DecorEstimate est = decor_fit(data.x, data.y, spec.methods[m].config);
          rec.abs_error = mean_abs_error(est.beta, data.truth.beta);
          rec.iterations = est.iterations;
          rec.converged = est.converged;
        } catch (const FeasibilityError&) {
          rec.failed = true;
          rec.abs_error = std::numeric_limits<double>::quiet_NaN();
        }
      }
    });

    for (std::size_t m = 0; m < methods; ++m) {
      std::vector<ReplicateRecord> column;
      column.reserve(spec.replicates);
      for (std::size_t r = 0; r < spec.replicates; ++r) column.push_back(records[r * methods + m]);
      result.rows.push_back(summarize(column));
    }
    result.replicates.insert(result.replicates.end(), std::make_move_iterator(records.begin()),
                             std::make_move_iterator(records.end()));
  }
  return result;
}

ConsistencyResult run_consistency_sweep(const ExperimentSpec& spec, double decay_ratio,
                                        double ols_floor) {
  if (spec.n_grid.size() < 4) {
    throw ConfigError("consistency sweep needs at least four sample sizes");
  }
  ConsistencyResult out;
  out.result = run_experiment(spec);

  const std::size_t smallest = spec.n_grid.front();
  const std::size_t largest = spec.n_grid.back();
  const double sigma = spec.sigma_eta2_grid.empty() ? spec.sim.sigma_eta2 : spec.sigma_eta2_grid.front();
  const double prob = spec.conf_prob_grid.empty() ? spec.sim.conf_prob : spec.conf_prob_grid.front();
  auto find = [&](const std::string& label, std::size_t n) -> const ResultRow* {
    for (const auto& row : out.result.rows) {
      if (row.method == label && row.n == n && row.sigma_eta2 == sigma && row.conf_prob == prob) {
        return &row;
      }
    }
    return nullptr;
  };

  out.all_passed = true;
  for (const auto& method : spec.methods) {
    const ResultRow* lo = find(method.label, smallest);
    const ResultRow* hi = find(method.label, largest);
    ConsistencyVerdict v;
    v.method = method.label;
    if (lo != nullptr && hi != nullptr) {
      v.mae_smallest_n = lo->mae;
      v.mae_largest_n = hi->mae;
      v.passed = method.config.method == DecorMethod::OLSBaseline
                     ? hi->mae > ols_floor * lo->mae
                     : hi->mae < decay_ratio * lo->mae;
    }
    out.all_passed = out.all_passed && v.passed;
    out.verdicts.push_back(v);
  }
  return out;
}

ExperimentResult run_ablation(AblationKind kind, ExperimentSpec spec, double margin) {
  switch (kind) {
    case AblationKind::OutlierFraction: {
      if (spec.conf_prob_grid.empty()) spec.conf_prob_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
      ExperimentResult combined;
      const std::vector<double> probs = spec.conf_prob_grid;
      for (double p : probs) {
        const double fraction = 1.0 - p - margin;
        if (!(fraction > 0.0)) {
          throw ConfigError("outlier-fraction ablation: 1 - conf_prob - margin must be positive");
        }
        ExperimentSpec cell = spec;
        cell.conf_prob_grid = {p};
        for (auto& m : cell.methods) {
          if (m.config.method != DecorMethod::OLSBaseline) {
            m.config.a = Threshold::fraction(std::min(fraction, 1.0));
          }
        }
        ExperimentResult part = run_experiment(cell);
        combined.rows.insert(combined.rows.end(), part.rows.begin(), part.rows.end());
        combined.replicates.insert(combined.replicates.end(), part.replicates.begin(),
                                   part.replicates.end());
      }
      return combined;
    }
    case AblationKind::DenseNoise:
      spec.sim.dense_u_noise_std = 1.0;
      return run_experiment(spec);
    case AblationKind::TwoDim: {
      const double b = spec.sim.beta.size() > 0 ? spec.sim.beta(0) : 3.0;
      if (spec.sim.beta.size() != 2) spec.sim.beta = Eigen::VectorXd::Constant(2, b);
      spec.sim.d = 2;
      return run_experiment(spec);
    }
  }
  return {};
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  using detail::format_double;
  out << "n,method,sigma_eta2,conf_prob,mae,mae_stderr,mean_iter,max_iter,failed\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.method << ',' << format_double(r.sigma_eta2) << ','
        << format_double(r.conf_prob) << ',' << format_double(r.mae) << ','
        << format_double(r.mae_stderr) << ',' << format_double(r.mean_iterations) << ','
        << r.max_iterations << ',' << r.replicates_failed << '\n';
  }
}

void write_replicates_csv(std::ostream& out, const std::vector<ReplicateRecord>& records) {
  using detail::format_double;
  out << "n,method,sigma_eta2,conf_prob,replicate,abs_error,iterations,converged,failed\n";
  for (const auto& r : records) {
    out << r.n << ',' << r.method << ',' << format_double(r.sigma_eta2) << ','
        << format_double(r.conf_prob) << ',' << r.replicate << ',' << format_double(r.abs_error)
        << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << (r.failed ? 1 : 0)
        << '\n';
  }
}

}  // namespace decor
