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
#include <limits>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "decor/basis.hpp"
#include "decor/index_set.hpp"
#include "decor/robust.hpp"

namespace decor {

enum class DecorMethod { Torrent, BFS, OLSBaseline };

std::string_view to_string(DecorMethod method);
/// Accepts "torrent", "bfs", "olsbaseline" (also "ols").
DecorMethod parse_decor_method(std::string_view name);

/// Robust-regression set size: a fraction f in (0, 1] of n or an absolute count.
class Threshold {
 public:
  static Threshold fraction(double f);
  static Threshold count(std::size_t a);

  bool is_fraction() const noexcept { return std::holds_alternative<double>(value_); }
  double as_fraction() const { return std::get<double>(value_); }

  /// ceil(f * n) for fractions (with a 1e-9 guard so 0.7 * 10 gives 7), the
  /// count itself otherwise. Throws ConfigError if the result is outside [1, n].
  std::size_t resolve(std::size_t n) const;

 private:
  explicit Threshold(std::variant<double, std::size_t> v) : value_(v) {}
  std::variant<double, std::size_t> value_;
};

struct DecorConfig {
  BasisKind basis_kind = BasisKind::Cosine;
  DecorMethod method = DecorMethod::Torrent;
  Threshold a = Threshold::fraction(0.7);
  std::size_t max_iter = 100;
  std::uint64_t bfs_cap = kDefaultSubsetCap;
};

struct DecorEstimate {
  Eigen::VectorXd beta;
  /// Frequencies left out of the final fit, read as the estimated confounded set.
  IndexSet excluded_frequencies;
  IndexSet inliers;
  std::size_t iterations = 0;
  bool converged = true;
  DecorMethod method = DecorMethod::Torrent;
  /// Filled by `deconfound` only; empty after `decor_fit`.
  Eigen::VectorXd fitted_time_domain;
  Eigen::VectorXd residuals_time_domain;
  /// NaN until `deconfound` computes it.
  double r_squared = std::numeric_limits<double>::quiet_NaN();
};

/// Transforms (x, y) into basis coordinates and runs the configured robust
/// regression there. Throws ConfigError for invalid settings and
/// FeasibilityError when BFS would exceed `bfs_cap` subsets.
DecorEstimate decor_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const DecorConfig& config);

/// `decor_fit`, then removes the excluded frequencies from x, maps it back to
/// the time domain and reports fitted = x_clean * beta, residuals = y - fitted
/// and the centred R^2.
DecorEstimate deconfound(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const DecorConfig& config);

}  // namespace decor
