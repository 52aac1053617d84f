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

#include <Eigen/Dense>

#include <ostream>

#include "decor/index_set.hpp"
#include "decor/rng.hpp"
#include "../oracle/oracles.hpp"

namespace decor {

inline void PrintTo(const IndexSet& s, std::ostream* os) {
  *os << '{';
  const char* sep = "";
  for (std::size_t k : s) {
    *os << sep << k;
    sep = ", ";
  }
  *os << '}';
}

}  // namespace decor

namespace decor::test {

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n) {
  return random_matrix(rng, n, 1).col(0);
}

inline oracle::Matrix to_rows(const Eigen::MatrixXd& m) {
  oracle::Matrix out(static_cast<std::size_t>(m.rows()),
                     oracle::Vector(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

inline oracle::Vector to_std(const Eigen::VectorXd& v) {
  return oracle::Vector(v.data(), v.data() + v.size());
}

}  // namespace decor::test
