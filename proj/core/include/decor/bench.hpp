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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "decor/decor.hpp"
#include "decor/sim.hpp"

namespace decor {

struct MethodSpec {
  std::string label;
  DecorConfig config;
};

/// A Monte Carlo sweep. Every combination of n, sigma_eta2 and conf_prob is a
/// cell; each replicate of a cell draws one data set and fits every method on
/// it, so methods are compared on identical samples.
struct ExperimentSpec {
  SimConfig sim;
  std::vector<std::size_t> n_grid;
  /// Empty means {sim.sigma_eta2}.
  std::vector<double> sigma_eta2_grid;
  /// Empty means {sim.conf_prob}.
  std::vector<double> conf_prob_grid;
  std::vector<MethodSpec> methods;
  std::size_t replicates = 1000;
  std::uint64_t seed_base = 0;
  /// Worker threads; 0 uses the hardware concurrency.
  std::size_t threads = 0;
};

/// Throws ConfigError on an empty/unsorted grid, no methods or zero replicates.
void validate(const ExperimentSpec& spec);

struct ReplicateRecord {
  std::size_t n = 0;
  std::string method;
  double sigma_eta2 = 0.0;
  double conf_prob = 0.0;
  std::size_t replicate = 0;
  /// Mean over coordinates of |beta_hat - beta|; NaN when failed.
  double abs_error = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
  bool failed = false;
};

struct ResultRow {
  std::size_t n = 0;
  std::string method;
  double sigma_eta2 = 0.0;
  double conf_prob = 0.0;
  double mae = 0.0;
  /// Sample standard deviation of the per-replicate errors over sqrt(count).
  double mae_stderr = 0.0;
  double mean_iterations = 0.0;
  std::size_t max_iterations = 0;
  std::size_t replicates_failed = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  /// Ordered by cell, then replicate, then method.
  std::vector<ReplicateRecord> replicates;
};

/// Aggregates the records of one (n, method, sigma_eta2, conf_prob) cell.
/// Failed replicates are counted and excluded from the error statistics.
ResultRow summarize(const std::vector<ReplicateRecord>& cell);

/// Runs every cell. Replicate r at sample size n uses the substream keyed by
/// (seed_base, n, r), so results do not depend on the thread count.
/// Infeasible fits (BFS over the cap) are recorded as failed replicates.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct ConsistencyVerdict {
  std::string method;
  double mae_smallest_n = 0.0;
  double mae_largest_n = 0.0;
  /// Robust methods: MAE at the largest n below `decay_ratio` times the MAE at
  /// the smallest n. OLS baselines: MAE stays above `ols_floor` times it.
  bool passed = false;
};

struct ConsistencyResult {
  ExperimentResult result;
  std::vector<ConsistencyVerdict> verdicts;
  bool all_passed = false;
};

/// Throws ConfigError when n_grid has fewer than four points. Verdicts use
/// the first sigma_eta2 and conf_prob of the grid.
ConsistencyResult run_consistency_sweep(const ExperimentSpec& spec, double decay_ratio = 0.5,
                                        double ols_floor = 0.5);

enum class AblationKind { OutlierFraction, DenseNoise, TwoDim };

/// OutlierFraction sweeps conf_prob (default 0.1..0.7) and sets the robust
/// threshold to 1 - conf_prob - margin; DenseNoise adds unit-variance noise
/// to U; TwoDim uses d = 2 with independent covariate noise columns.
ExperimentResult run_ablation(AblationKind kind, ExperimentSpec spec, double margin = 0.05);

/// Header `n,method,sigma_eta2,conf_prob,mae,mae_stderr,mean_iter,max_iter,failed`.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Header `n,method,sigma_eta2,conf_prob,replicate,abs_error,iterations,converged,failed`.
void write_replicates_csv(std::ostream& out, const std::vector<ReplicateRecord>& records);

}  // namespace decor
