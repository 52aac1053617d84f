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
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "decor/index_set.hpp"

namespace decor {

/// Default cap on the number of subsets exhaustive searches may enumerate.
inline constexpr std::uint64_t kDefaultSubsetCap = 10'000'000;

/// Observed design X (n x d) and response y (n). Immutable, finite-valued.
class RegressionProblem {
 public:
  /// Throws ArgumentError on empty input, length mismatch or non-finite entries.
  RegressionProblem(Eigen::MatrixXd x, Eigen::VectorXd y);

  std::size_t n() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t d() const noexcept { return static_cast<std::size_t>(x_.cols()); }
  const Eigen::MatrixXd& x() const noexcept { return x_; }
  const Eigen::VectorXd& y() const noexcept { return y_; }

  /// Singular values at or below this are treated as zero by every subset
  /// solve: max(n, d) * machine epsilon * largest singular value of the full
  /// design. Measuring against the full design keeps round-off rows (entries
  /// that are zero up to transform error) from being inverted.
  double rank_tolerance() const noexcept { return rank_tolerance_; }

  Eigen::MatrixXd rows(const IndexSet& subset) const;
  Eigen::VectorXd response(const IndexSet& subset) const;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  double rank_tolerance_ = 0.0;
};

enum class RobustMethod { OLS, Torrent, BFS };

std::string_view to_string(RobustMethod method);

struct RobustFit {
  Eigen::VectorXd beta;
  IndexSet inliers;
  std::size_t iterations = 0;
  /// ||y_S - X_S beta||_2 over the final inlier set S.
  double residual_norm = 0.0;
  /// False iff Torrent stopped at the iteration cap.
  bool converged = true;
  RobustMethod method = RobustMethod::OLS;
  /// Torrent only: thresholded residual norm after each iteration.
  std::vector<double> residual_trace;
};

/// Least squares on the rows in `subset`; minimum-norm (pseudo-inverse)
/// solution when X_S^T X_S is singular. Throws ArgumentError for an empty or
/// out-of-range subset.
Eigen::VectorXd ols(const RegressionProblem& problem, const IndexSet& subset);

/// Full-sample OLS packaged as a fit.
RobustFit ols_fit(const RegressionProblem& problem);

/// Indices of the `a` smallest entries of v, ties broken by lower index.
/// Throws ArgumentError unless 1 <= a <= v.size().
IndexSet hard_threshold(const Eigen::VectorXd& v, std::size_t a);

/// Iterative hard-thresholding regression. Starting from all rows, alternate
/// OLS on the current set with reselection of the `a` rows of smallest
/// absolute residual. Stops when the thresholded residual norm fails to
/// strictly decrease, when the selected set repeats, or after `max_iter`
/// iterations (then `converged` is false). Returns the last estimate.
RobustFit torrent(const RegressionProblem& problem, std::size_t a, std::size_t max_iter = 100);

/// Exhaustive search: OLS on every candidate set, keep the estimate with the
/// smallest mean squared in-set residual. The first minimiser in candidate
/// order wins. Throws ArgumentError for an empty list or an empty candidate.
RobustFit bfs(const RegressionProblem& problem, const std::vector<IndexSet>& candidate_sets);

/// Same as `bfs` over all subsets of the given size, enumerated lazily in
/// lexicographic order. Throws FeasibilityError past `cap` subsets.
RobustFit bfs_all_of_size(const RegressionProblem& problem, std::size_t size,
                          std::uint64_t cap = kDefaultSubsetCap);

/// binomial(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k) noexcept;

/// All size-`size` subsets of {1..n} in lexicographic order. Throws
/// FeasibilityError when binomial(n, size) exceeds `cap`.
std::vector<IndexSet> candidate_sets_all_of_size(std::size_t n, std::size_t size,
                                                  std::uint64_t cap = kDefaultSubsetCap);

/// Calls `visit` with the 0-based offsets of every size-k subset of {0..n-1}
/// in lexicographic order.
void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(const std::vector<std::size_t>&)>& visit);

/// Subset spectral ratio
///   max_{|S| = a} ||X_{V(S)}||_2 / sqrt(lambda_min(X_S^T X_S)),
/// with V(S) the symmetric difference of S and the true inlier set. Returns
/// +infinity when some X_S is singular. Requires ground truth, so it is a
/// simulation diagnostic only. Throws FeasibilityError past `cap` subsets.
double eta_condition(const RegressionProblem& problem, std::size_t a,
                     const IndexSet& true_inliers, std::uint64_t cap = kDefaultSubsetCap);

/// Threshold below which `eta_condition` guarantees Torrent's error bound.
inline constexpr double kEtaThreshold = 0.70710678118654752440;

using WarningHandler = std::function<void(std::string_view)>;
/// Replaces the sink for non-fatal warnings (default: stderr). Returns the
/// previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace decor
