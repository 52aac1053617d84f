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
#include <initializer_list>
#include <vector>

namespace decor {

/// Sorted set of distinct 1-based indices into {1, ..., n}.
///
/// Used for inlier sets, confounded frequency sets and band supports. The
/// public surface is 1-based to match the frequency numbering k = 1..n;
/// `zero_based()` gives row offsets for matrix access.
class IndexSet {
 public:
  IndexSet() = default;

  /// Throws ArgumentError unless `indices` is strictly increasing and >= 1.
  explicit IndexSet(std::vector<std::size_t> indices);
  IndexSet(std::initializer_list<std::size_t> indices);

  /// Builds a set from unordered, possibly duplicated 1-based indices.
  static IndexSet from_unsorted(std::vector<std::size_t> indices);
  /// Builds a set from 0-based row offsets.
  static IndexSet from_zero_based(const std::vector<std::size_t>& offsets);
  /// {1, ..., n}
  static IndexSet all(std::size_t n);
  /// {1, ..., min(limit, n)}
  static IndexSet prefix(std::size_t limit, std::size_t n);

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(std::size_t index) const noexcept;
  /// Largest element, 0 for the empty set.
  std::size_t max() const noexcept { return indices_.empty() ? 0 : indices_.back(); }

  /// Throws ArgumentError if any element exceeds n.
  void require_within(std::size_t n) const;

  /// {1..n} minus this set.
  IndexSet complement(std::size_t n) const;
  IndexSet symmetric_difference(const IndexSet& other) const;

  std::vector<std::size_t> zero_based() const;
  const std::vector<std::size_t>& values() const noexcept { return indices_; }

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

}  // namespace decor
