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
#include <initializer_list>
#include <limits>
#include <vector>

namespace decor {

/// Counter-based generator (SplitMix64): output i is a bijective mix of
/// key + i * gamma, so any substream is fully determined by its key and
/// independent of evaluation order. Distributions are implemented here
/// rather than taken from <random> so streams are identical across standard
/// libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) noexcept : state_(key) {}

  /// Key for an independent substream identified by `ids` under `seed`.
  static std::uint64_t substream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);
  static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    return Rng(substream_key(seed, ids));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }
  bool bernoulli(double p) noexcept { return uniform() < p; }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// `k` distinct values from [0, n), uniformly, returned sorted.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace decor
