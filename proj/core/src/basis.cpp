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

#include "decor/basis.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <utility>

#include "decor/error.hpp"

namespace decor {
namespace {

// DCT-II columns rescaled so that (1/n) Phi^T Phi = I:
// Phi(j, k) = c_k cos(pi k (j + 1/2) / n), c_0 = 1, c_k = sqrt(2).
Eigen::MatrixXd cosine_matrix(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd phi(size, size);
  const double scale = std::numbers::sqrt2;
  const double dn = static_cast<double>(n);
  for (Eigen::Index k = 0; k < size; ++k) {
    const double c = k == 0 ? 1.0 : scale;
    for (Eigen::Index j = 0; j < size; ++j) {
      phi(j, k) = c * std::cos(std::numbers::pi * static_cast<double>(k) *
                               (static_cast<double>(j) + 0.5) / dn);
    }
  }
  return phi;
}

// Full Haar system on 2^m points ordered coarse to fine: the constant, then
// for each level s the 2^s translates of the wavelet with height 2^(s/2).
Eigen::MatrixXd haar_matrix(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(size, size);
  phi.col(0).setOnes();
  Eigen::Index column = 1;
  for (std::size_t blocks = 1; blocks < n; blocks *= 2) {
    const std::size_t width = n / blocks;
    const double height = std::sqrt(static_cast<double>(blocks));
    for (std::size_t p = 0; p < blocks; ++p, ++column) {
      const std::size_t start = p * width;
      for (std::size_t j = 0; j < width; ++j) {
        phi(static_cast<Eigen::Index>(start + j), column) = j < width / 2 ? height : -height;
      }
    }
  }
  return phi;
}

void require_rows(Eigen::Index rows, const BasisMatrix& basis) {
  if (rows != static_cast<Eigen::Index>(basis.n())) {
    throw ArgumentError("series has " + std::to_string(rows) + " rows but basis has n = " +
                        std::to_string(basis.n()));
  }
}

}  // namespace

std::string_view to_string(BasisKind kind) {
  return kind == BasisKind::Cosine ? "cosine" : "haar";
}

BasisKind parse_basis_kind(std::string_view name) {
  if (name == "cosine") return BasisKind::Cosine;
  if (name == "haar") return BasisKind::Haar;
  throw ConfigError("unknown basis '" + std::string(name) + "' (expected cosine or haar)");
}

bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

BasisMatrix BasisMatrix::build(BasisKind kind, std::size_t n, double horizon) {
  if (n == 0) {
    throw ConfigError("basis size n must be at least 1");
  }
  if (!(horizon > 0.0)) {
    throw ConfigError("horizon T must be positive");
  }
  if (kind == BasisKind::Haar && !is_power_of_two(n)) {
    throw ConfigError("Haar basis requires n to be a power of two, got n = " +
                      std::to_string(n));
  }
  return BasisMatrix(kind, kind == BasisKind::Cosine ? cosine_matrix(n) : haar_matrix(n),
                     horizon);
}

BasisMatrix BasisMatrix::from_matrix(BasisKind kind, Eigen::MatrixXd matrix, double horizon) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    throw ArgumentError("basis matrix must be square and non-empty");
  }
  return BasisMatrix(kind, std::move(matrix), horizon);
}

std::shared_ptr<const BasisMatrix> cached_basis(BasisKind kind, std::size_t n) {
  static std::mutex mutex;
  static std::map<std::pair<BasisKind, std::size_t>, std::shared_ptr<const BasisMatrix>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{kind, n}];
  if (!slot) {
    slot = std::make_shared<const BasisMatrix>(BasisMatrix::build(kind, n));
  }
  return slot;
}

Eigen::MatrixXd transform(const Eigen::MatrixXd& series, const BasisMatrix& basis) {
  require_rows(series.rows(), basis);
  return (basis.matrix().transpose() * series) / static_cast<double>(basis.n());
}

Eigen::VectorXd transform(const Eigen::VectorXd& series, const BasisMatrix& basis) {
  require_rows(series.rows(), basis);
  return (basis.matrix().transpose() * series) / static_cast<double>(basis.n());
}

Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& freq, const BasisMatrix& basis) {
  require_rows(freq.rows(), basis);
  return basis.matrix() * freq;
}

Eigen::VectorXd inverse_transform(const Eigen::VectorXd& freq, const BasisMatrix& basis) {
  require_rows(freq.rows(), basis);
  return basis.matrix() * freq;
}

OrthonormalityReport check_orthonormality(const BasisMatrix& basis, double tol) {
  const Eigen::MatrixXd gram =
      (basis.matrix().transpose() * basis.matrix()) / static_cast<double>(basis.n());
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
  const double deviation = (gram - identity).cwiseAbs().maxCoeff();
  return {deviation <= tol, deviation};
}

FrequencyData to_frequency_domain(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  const BasisMatrix& basis) {
  return {transform(x, basis), transform(y, basis), basis.kind()};
}

void write_basis_csv(std::ostream& out, const BasisMatrix& basis) {
  const auto& phi = basis.matrix();
  out << "j,k,value\n";
  const auto old_precision = out.precision(17);
  for (Eigen::Index j = 0; j < phi.rows(); ++j) {
    for (Eigen::Index k = 0; k < phi.cols(); ++k) {
      out << (j + 1) << ',' << (k + 1) << ',' << phi(j, k) << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace decor
