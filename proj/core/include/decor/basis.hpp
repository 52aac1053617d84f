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
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace decor {

enum class BasisKind { Cosine, Haar };

std::string_view to_string(BasisKind kind);
/// Accepts "cosine" and "haar"; throws ConfigError otherwise.
BasisKind parse_basis_kind(std::string_view name);

/// n x n matrix of basis functions sampled on an n-point grid.
///
/// Entry (j, k) is basis function k evaluated at sample j (both 0-based in
/// storage, 1-based in documentation). Columns are orthonormal under the
/// 1/n-scaled inner product, so (1/n) Phi^T Phi = I. Column 0 is the constant
/// function. Immutable after construction.
class BasisMatrix {
 public:
  /// Throws ConfigError for n == 0, or for Haar when n is not a power of two.
  static BasisMatrix build(BasisKind kind, std::size_t n, double horizon = 1.0);

  /// Wraps an arbitrary square matrix without checking orthonormality. Meant
  /// for diagnostics; use `check_orthonormality` on the result.
  static BasisMatrix from_matrix(BasisKind kind, Eigen::MatrixXd matrix, double horizon = 1.0);

  BasisKind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  double horizon() const noexcept { return horizon_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

 private:
  BasisMatrix(BasisKind kind, Eigen::MatrixXd matrix, double horizon)
      : kind_(kind), matrix_(std::move(matrix)), horizon_(horizon) {}

  BasisKind kind_;
  Eigen::MatrixXd matrix_;
  double horizon_;
};

/// Shared immutable basis for (kind, n). Built once per process and reused.
std::shared_ptr<const BasisMatrix> cached_basis(BasisKind kind, std::size_t n);

bool is_power_of_two(std::size_t n) noexcept;

/// Basis coefficients of each column: out(k, c) = (1/n) sum_l series(l, c) Phi(l, k).
Eigen::MatrixXd transform(const Eigen::MatrixXd& series, const BasisMatrix& basis);
Eigen::VectorXd transform(const Eigen::VectorXd& series, const BasisMatrix& basis);

/// Time-domain reconstruction Phi * freq.
Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& freq, const BasisMatrix& basis);
Eigen::VectorXd inverse_transform(const Eigen::VectorXd& freq, const BasisMatrix& basis);

struct OrthonormalityReport {
  bool ok;
  double max_deviation;
};

/// max |(1/n)(Phi^T Phi)(l, k) - [l == k]| compared against `tol`.
OrthonormalityReport check_orthonormality(const BasisMatrix& basis, double tol);

/// Covariates and response expressed in basis coordinates.
struct FrequencyData {
  Eigen::MatrixXd x_freq;
  Eigen::VectorXd y_freq;
  BasisKind basis_kind;
};

FrequencyData to_frequency_domain(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  const BasisMatrix& basis);

/// Writes `j,k,value` rows (1-based, row-major).
void write_basis_csv(std::ostream& out, const BasisMatrix& basis);

}  // namespace decor
