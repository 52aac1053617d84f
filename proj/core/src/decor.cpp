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

#include "decor/decor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "decor/error.hpp"

namespace decor {

std::string_view to_string(DecorMethod method) {
  switch (method) {
    case DecorMethod::Torrent: return "torrent";
    case DecorMethod::BFS: return "bfs";
    case DecorMethod::OLSBaseline: return "olsbaseline";
  }
  return "unknown";
}

DecorMethod parse_decor_method(std::string_view name) {
  if (name == "torrent") return DecorMethod::Torrent;
  if (name == "bfs") return DecorMethod::BFS;
  if (name == "olsbaseline" || name == "ols") return DecorMethod::OLSBaseline;
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected torrent, bfs or olsbaseline)");
}

Threshold Threshold::fraction(double f) {
  if (!(f > 0.0 && f <= 1.0)) {
    throw ConfigError("threshold fraction must lie in (0, 1], got " + std::to_string(f));
  }
  return Threshold(f);
}

Threshold Threshold::count(std::size_t a) {
  if (a == 0) {
    throw ConfigError("threshold count must be at least 1");
  }
  return Threshold(a);
}

std::size_t Threshold::resolve(std::size_t n) const {
  std::size_t a = 0;
  if (const auto* f = std::get_if<double>(&value_)) {
    a = static_cast<std::size_t>(std::ceil(*f * static_cast<double>(n) - 1e-9));
    a = std::max<std::size_t>(a, 1);
  } else {
    a = std::get<std::size_t>(value_);
  }
  if (a == 0 || a > n) {
    throw ConfigError("threshold a = " + std::to_string(a) + " outside 1.." + std::to_string(n));
  }
  return a;
}

DecorEstimate decor_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const DecorConfig& config) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (n == 0 || x.cols() == 0) {
    throw ArgumentError("decor_fit needs a non-empty design");
  }
  if (y.rows() != x.rows()) {
    throw ArgumentError("X has " + std::to_string(x.rows()) + " rows but y has " +
                        std::to_string(y.rows()));
  }
  if (n < static_cast<std::size_t>(x.cols())) {
    throw ConfigError("decor_fit needs n >= d");
  }
  if (config.max_iter == 0) {
    throw ConfigError("max_iter must be at least 1");
  }
  if (config.basis_kind == BasisKind::Haar && !is_power_of_two(n)) {
    throw ConfigError("Haar basis requires n to be a power of two, got n = " +
                      std::to_string(n));
  }
  const std::size_t a = config.a.resolve(n);

  const auto basis = cached_basis(config.basis_kind, n);
  FrequencyData freq = to_frequency_domain(x, y, *basis);
  const RegressionProblem problem(std::move(freq.x_freq), std::move(freq.y_freq));

  RobustFit fit;
  switch (config.method) {
    case DecorMethod::Torrent: fit = torrent(problem, a, config.max_iter); break;
    case DecorMethod::BFS: fit = bfs_all_of_size(problem, a, config.bfs_cap); break;
    case DecorMethod::OLSBaseline: fit = ols_fit(problem); break;
  }

  DecorEstimate est;
  est.beta = std::move(fit.beta);
  est.inliers = std::move(fit.inliers);
  est.excluded_frequencies = est.inliers.complement(n);
  est.iterations = fit.iterations;
  est.converged = fit.converged;
  est.method = config.method;
  return est;
}

DecorEstimate deconfound(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const DecorConfig& config) {
  DecorEstimate est = decor_fit(x, y, config);
  const auto basis = cached_basis(config.basis_kind, static_cast<std::size_t>(x.rows()));

  Eigen::MatrixXd x_freq = transform(x, *basis);
  for (std::size_t k : est.excluded_frequencies) {
    x_freq.row(static_cast<Eigen::Index>(k - 1)).setZero();
  }
  const Eigen::MatrixXd x_clean = inverse_transform(x_freq, *basis);

  est.fitted_time_domain = x_clean * est.beta;
  est.residuals_time_domain = y - est.fitted_time_domain;

  const double y_mean = y.mean();
  const double r_mean = est.residuals_time_domain.mean();
  const double total = (y.array() - y_mean).square().sum();
  const double unexplained = (est.residuals_time_domain.array() - r_mean).square().sum();
  if (total > 0.0) {
    est.r_squared = 1.0 - unexplained / total;
  } else {
    est.r_squared = unexplained == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  }
  return est;
}

}  // namespace decor
