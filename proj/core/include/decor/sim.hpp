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
#include <optional>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "decor/basis.hpp"
#include "decor/index_set.hpp"
#include "decor/rng.hpp"

namespace decor {

/// Ornstein-Uhlenbeck process dV = drift * V dt + sigma dW, started from its
/// stationary law.
struct OuProcess {
  double sigma = 1.0;
  double drift = -0.5;
};

/// Finite basis expansion with i.i.d. Normal(0, coeff_std^2) coefficients.
///
/// The support is either explicit (every index must be <= n) or given as a
/// band limit L, meaning {1, ..., min(L, n)} at sample size n.
struct BandLimitedProcess {
  std::optional<IndexSet> support;
  std::size_t band_limit = 50;
  double coeff_std = 1.0;

  /// Throws ArgumentError when an explicit support exceeds n.
  IndexSet resolve_support(std::size_t n) const;
};

using ProcessKind = std::variant<OuProcess, BandLimitedProcess>;

std::string_view process_name(const ProcessKind& kind);

/// How the confounded frequency set G is drawn.
enum class ConfoundingDraw {
  /// round(conf_prob * n) frequencies chosen uniformly without replacement.
  FixedCount,
  /// Each frequency independently with probability conf_prob.
  Bernoulli,
};

struct SimConfig {
  std::size_t n = 128;
  std::size_t d = 1;
  Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, 3.0);
  double horizon = 1.0;
  double sigma_eta2 = 1.0;
  double conf_prob = 0.25;
  ProcessKind eps_process = BandLimitedProcess{};
  ProcessKind u_process = BandLimitedProcess{};
  BasisKind basis_kind = BasisKind::Cosine;
  double dense_u_noise_std = 0.0;
  ConfoundingDraw confounding = ConfoundingDraw::FixedCount;
  /// When set, G is drawn from {1..confounding_band} only (low-frequency
  /// confounding). The fixed count is still round(conf_prob * n), capped at
  /// the band width.
  std::optional<std::size_t> confounding_band;
  std::uint64_t seed = 0;

  /// Both processes band-limited with the default support {1..50}.
  static SimConfig band_limited(std::size_t n);
  /// epsilon_X ~ OU(1, -0.8) and U ~ OU(1, -0.5).
  static SimConfig ornstein_uhlenbeck(std::size_t n);
};

/// Throws ConfigError describing the first invalid field.
void validate(const SimConfig& config);

struct GroundTruth {
  IndexSet g_set;
  Eigen::VectorXd u_time;
  Eigen::MatrixXd eps_x_time;
  Eigen::VectorXd eta_time;
  Eigen::VectorXd beta;
  std::uint64_t seed = 0;
};

struct SimData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  GroundTruth truth;
};

/// Exact AR(1) discretisation of the OU process on the grid t = T l / n.
Eigen::VectorXd sample_ou(std::size_t n, double horizon, double sigma, double drift, Rng& rng);

/// Coefficients drawn on `support`, zero elsewhere, mapped to the time domain.
Eigen::VectorXd sample_band_limited(const BasisMatrix& basis, const IndexSet& support,
                                    double coeff_std, Rng& rng);

Eigen::VectorXd sample_process(const ProcessKind& kind, const BasisMatrix& basis,
                               double horizon, Rng& rng);

/// Draws one data set X = U 1^T + eps_X, Y = X beta + U + eta with U
/// projected onto the confounded frequencies G.
SimData generate(const SimConfig& config, Rng& rng);
/// Uses a generator keyed by `config.seed`.
SimData generate(const SimConfig& config);

}  // namespace decor
