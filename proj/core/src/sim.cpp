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

#include "decor/sim.hpp"

#include <cmath>
#include <string>

#include "decor/error.hpp"

namespace decor {
namespace {

void validate_process(const ProcessKind& kind, std::string_view role, std::size_t n) {
  if (const auto* ou = std::get_if<OuProcess>(&kind)) {
    if (!(ou->sigma > 0.0)) {
      throw ConfigError(std::string(role) + ": OU sigma must be positive");
    }
    if (!(ou->drift < 0.0)) {
      throw ConfigError(std::string(role) + ": OU drift must be negative (mean reverting)");
    }
    return;
  }
  const auto& band = std::get<BandLimitedProcess>(kind);
  if (!(band.coeff_std > 0.0)) {
    throw ConfigError(std::string(role) + ": band-limited coeff_std must be positive");
  }
  if (band.support) {
    if (band.support->empty()) {
      throw ConfigError(std::string(role) + ": band-limited support is empty");
    }
    if (band.support->max() > n) {
      throw ConfigError(std::string(role) + ": band-limited support index " +
                        std::to_string(band.support->max()) + " exceeds n = " +
                        std::to_string(n));
    }
  } else if (band.band_limit == 0) {
    throw ConfigError(std::string(role) + ": band limit must be at least 1");
  }
}

IndexSet draw_confounded(const SimConfig& config, Rng& rng) {
  const std::size_t pool = config.confounding_band.value_or(config.n);
  if (config.confounding == ConfoundingDraw::Bernoulli) {
    std::vector<std::size_t> g;
    for (std::size_t k = 1; k <= pool; ++k) {
      if (rng.bernoulli(config.conf_prob)) g.push_back(k);
    }
    return IndexSet(std::move(g));
  }
  const auto count = static_cast<std::size_t>(
      std::llround(config.conf_prob * static_cast<double>(config.n)));
  return IndexSet::from_zero_based(rng.sample_without_replacement(pool, std::min(count, pool)));
}

}  // namespace

IndexSet BandLimitedProcess::resolve_support(std::size_t n) const {
  if (support) {
    support->require_within(n);
    return *support;
  }
  return IndexSet::prefix(band_limit, n);
}

std::string_view process_name(const ProcessKind& kind) {
  return std::holds_alternative<OuProcess>(kind) ? "ou" : "band";
}

SimConfig SimConfig::band_limited(std::size_t n) {
  SimConfig c;
  c.n = n;
  return c;
}

SimConfig SimConfig::ornstein_uhlenbeck(std::size_t n) {
  SimConfig c;
  c.n = n;
  c.eps_process = OuProcess{1.0, -0.8};
  c.u_process = OuProcess{1.0, -0.5};
  return c;
}

void validate(const SimConfig& config) {
  if (config.n == 0) throw ConfigError("n must be at least 1");
  if (config.d == 0) throw ConfigError("d must be at least 1");
  if (static_cast<std::size_t>(config.beta.size()) != config.d) {
    throw ConfigError("beta has " + std::to_string(config.beta.size()) +
                      " entries but d = " + std::to_string(config.d));
  }
  if (!config.beta.allFinite()) throw ConfigError("beta must be finite");
  if (!(config.horizon > 0.0)) throw ConfigError("horizon T must be positive");
  if (!(config.sigma_eta2 >= 0.0)) throw ConfigError("sigma_eta2 must be non-negative");
  if (!(config.conf_prob >= 0.0 && config.conf_prob <= 1.0)) {
    throw ConfigError("conf_prob must lie in [0, 1]");
  }
  if (!(config.dense_u_noise_std >= 0.0)) {
    throw ConfigError("dense_u_noise_std must be non-negative");
  }
  if (config.basis_kind == BasisKind::Haar && !is_power_of_two(config.n)) {
    throw ConfigError("Haar basis requires n to be a power of two, got n = " +
                      std::to_string(config.n));
  }
  if (config.confounding_band &&
      (*config.confounding_band == 0 || *config.confounding_band > config.n)) {
    throw ConfigError("confounding_band must lie in 1..n");
  }
  validate_process(config.eps_process, "eps_process", config.n);
  validate_process(config.u_process, "u_process", config.n);
}

Eigen::VectorXd sample_ou(std::size_t n, double horizon, double sigma, double drift, Rng& rng) {
  if (!(sigma > 0.0) || !(drift < 0.0) || !(horizon > 0.0)) {
    throw ArgumentError("OU sampling needs sigma > 0, drift < 0 and T > 0");
  }
  Eigen::VectorXd path(static_cast<Eigen::Index>(n));
  if (n == 0) return path;
  const double step = horizon / static_cast<double>(n);
  const double decay = std::exp(drift * step);
  const double stationary_sd = sigma / std::sqrt(-2.0 * drift);
  // Var of the innovation: sigma^2 (1 - e^{2 drift step}) / (-2 drift).
  const double innovation_sd = stationary_sd * std::sqrt(-std::expm1(2.0 * drift * step));
  path(0) = rng.normal(0.0, stationary_sd);
  for (Eigen::Index k = 1; k < path.size(); ++k) {
    path(k) = decay * path(k - 1) + rng.normal(0.0, innovation_sd);
  }
  return path;
}

Eigen::VectorXd sample_band_limited(const BasisMatrix& basis, const IndexSet& support,
                                    double coeff_std, Rng& rng) {
  support.require_within(basis.n());
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.n()));
  for (std::size_t k : support) {
    coeffs(static_cast<Eigen::Index>(k - 1)) = rng.normal(0.0, coeff_std);
  }
  return inverse_transform(coeffs, basis);
}

Eigen::VectorXd sample_process(const ProcessKind& kind, const BasisMatrix& basis,
                               double horizon, Rng& rng) {
  if (const auto* ou = std::get_if<OuProcess>(&kind)) {
    return sample_ou(basis.n(), horizon, ou->sigma, ou->drift, rng);
  }
  const auto& band = std::get<BandLimitedProcess>(kind);
  return sample_band_limited(basis, band.resolve_support(basis.n()), band.coeff_std, rng);
}

SimData generate(const SimConfig& config, Rng& rng) {
  validate(config);
  const auto basis = cached_basis(config.basis_kind, config.n);
  const auto n = static_cast<Eigen::Index>(config.n);
  const auto d = static_cast<Eigen::Index>(config.d);

  SimData data;
  GroundTruth& truth = data.truth;
  truth.beta = config.beta;
  truth.seed = config.seed;
  truth.g_set = draw_confounded(config, rng);

  // Project the raw confounder path onto the confounded frequencies.
  const Eigen::VectorXd u_raw = sample_process(config.u_process, *basis, config.horizon, rng);
  Eigen::VectorXd u_freq = transform(u_raw, *basis);
  Eigen::VectorXd masked = Eigen::VectorXd::Zero(n);
  for (std::size_t k : truth.g_set) {
    const auto row = static_cast<Eigen::Index>(k - 1);
    masked(row) = u_freq(row);
  }
  truth.u_time = inverse_transform(masked, *basis);

  truth.eps_x_time.resize(n, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    truth.eps_x_time.col(c) = sample_process(config.eps_process, *basis, config.horizon, rng);
  }

  truth.eta_time = Eigen::VectorXd::Zero(n);
  if (config.sigma_eta2 > 0.0) {
    const double sd = std::sqrt(config.sigma_eta2);
    for (Eigen::Index l = 0; l < n; ++l) truth.eta_time(l) = rng.normal(0.0, sd);
  }

  if (config.dense_u_noise_std > 0.0) {
    for (Eigen::Index l = 0; l < n; ++l) {
      truth.u_time(l) += rng.normal(0.0, config.dense_u_noise_std);
    }
  }

  data.x = truth.eps_x_time.colwise() + truth.u_time;
  data.y = data.x * config.beta + truth.u_time + truth.eta_time;
  return data;
}

SimData generate(const SimConfig& config) {
  Rng rng(Rng::substream_key(config.seed, {}));
  return generate(config, rng);
}

}  // namespace decor
