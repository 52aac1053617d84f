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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "decor/bench.hpp"
#include "decor/decor.hpp"
#include "decor/sim.hpp"

namespace decor {

inline constexpr std::string_view kSchemaVersion = "1";

/// Observed series read from `t,x_1..x_d,y` CSV. `t` is optional on input.
struct SeriesTable {
  Eigen::VectorXd t;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

/// Header row required; comma separated, '.' decimal point. Throws
/// ParseError naming the row and column on malformed input.
SeriesTable read_series_csv(std::istream& in);

/// Time grid t_l = T l / n, l = 1..n.
Eigen::VectorXd time_grid(std::size_t n, double horizon);

void write_series_csv(std::ostream& out, const Eigen::VectorXd& t, const Eigen::MatrixXd& x,
                      const Eigen::VectorXd& y);

/// Sidecar with the realised confounded set, beta and seed (plus the
/// confounder path for scoring).
std::string truth_to_json(const GroundTruth& truth, const SimConfig& config);
GroundTruth truth_from_json(std::string_view text);

/// DecorEstimate document with `schema_version`; index arrays are 1-based.
std::string estimate_to_json(const DecorEstimate& estimate);

/// `t,fitted,residual`
void write_fitted_csv(std::ostream& out, const Eigen::VectorXd& t, const DecorEstimate& estimate);
/// `k`
void write_excluded_csv(std::ostream& out, const DecorEstimate& estimate);

enum class ExperimentKind { Grid, Consistency, OutlierFraction, DenseNoise, TwoDim };

std::string_view to_string(ExperimentKind kind);

/// Contents of an experiment spec file.
struct ExperimentFile {
  ExperimentKind kind = ExperimentKind::Grid;
  ExperimentSpec spec;
  /// Outlier-fraction ablation: threshold = 1 - conf_prob - margin.
  double margin = 0.05;
  /// Consistency sweep verdict parameters.
  double decay_ratio = 0.5;
  double ols_floor = 0.5;
};

/// Throws ParseError whose location is a JSON pointer to the offending field.
ExperimentFile parse_experiment_spec(std::string_view text);

}  // namespace decor
