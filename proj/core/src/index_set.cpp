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

#include "decor/index_set.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <string>

#include "decor/error.hpp"

namespace decor {

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] == 0) {
      throw ArgumentError("IndexSet: indices are 1-based, got 0");
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw ArgumentError("IndexSet: indices must be strictly increasing");
    }
  }
}

IndexSet::IndexSet(std::initializer_list<std::size_t> indices)
    : IndexSet(std::vector<std::size_t>(indices)) {}

IndexSet IndexSet::from_unsorted(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return IndexSet(std::move(indices));
}

IndexSet IndexSet::from_zero_based(const std::vector<std::size_t>& offsets) {
  std::vector<std::size_t> shifted(offsets.size());
  std::transform(offsets.begin(), offsets.end(), shifted.begin(),
                 [](std::size_t o) { return o + 1; });
  return IndexSet(std::move(shifted));
}

IndexSet IndexSet::all(std::size_t n) {
  return prefix(n, n);
}

IndexSet IndexSet::prefix(std::size_t limit, std::size_t n) {
  std::vector<std::size_t> v(std::min(limit, n));
  std::iota(v.begin(), v.end(), std::size_t{1});
  IndexSet s;
  s.indices_ = std::move(v);
  return s;
}

bool IndexSet::contains(std::size_t index) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

void IndexSet::require_within(std::size_t n) const {
  if (max() > n) {
    throw ArgumentError("index " + std::to_string(max()) + " out of range 1.." +
                        std::to_string(n));
  }
}

IndexSet IndexSet::complement(std::size_t n) const {
  IndexSet out;
  out.indices_.reserve(n >= size() ? n - size() : 0);
  auto it = indices_.begin();
  for (std::size_t k = 1; k <= n; ++k) {
    while (it != indices_.end() && *it < k) ++it;
    if (it == indices_.end() || *it != k) out.indices_.push_back(k);
  }
  return out;
}

IndexSet IndexSet::symmetric_difference(const IndexSet& other) const {
  IndexSet out;
  std::set_symmetric_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                                other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

std::vector<std::size_t> IndexSet::zero_based() const {
  std::vector<std::size_t> out(indices_.size());
  std::transform(indices_.begin(), indices_.end(), out.begin(),
                 [](std::size_t i) { return i - 1; });
  return out;
}

}  // namespace decor
