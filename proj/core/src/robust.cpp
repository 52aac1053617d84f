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

#include "decor/robust.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>

#include "decor/error.hpp"

namespace decor {
namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  static WarningHandler handler = [](std::string_view msg) {
    std::cerr << "decor: warning: " << msg << '\n';
  };
  return handler;
}

void warn(const std::string& message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) warning_handler()(message);
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& offsets) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(offsets.size()), x.cols());
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(offsets[i]));
  }
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& y, const std::vector<std::size_t>& offsets) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(offsets.size()));
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(offsets[i]));
  }
  return out;
}

// Minimum-norm least squares on the given rows.
Eigen::VectorXd solve_rows(const RegressionProblem& problem, const Eigen::MatrixXd& xs,
                           const Eigen::VectorXd& ys) {
  const double tol = problem.rank_tolerance();
  if (xs.cols() == 1) {
    const double sq = xs.col(0).squaredNorm();
    Eigen::VectorXd beta(1);
    beta(0) = std::sqrt(sq) > tol ? xs.col(0).dot(ys) / sq : 0.0;
    return beta;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::VectorXd coeffs = svd.matrixU().transpose() * ys;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    coeffs(i) = s(i) > tol ? coeffs(i) / s(i) : 0.0;
  }
  return svd.matrixV() * coeffs;
}

Eigen::VectorXd solve_offsets(const RegressionProblem& problem,
                              const std::vector<std::size_t>& offsets) {
  return solve_rows(problem, gather_rows(problem.x(), offsets), gather(problem.y(), offsets));
}

double residual_sq(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys,
                   const Eigen::VectorXd& beta) {
  return (ys - xs * beta).squaredNorm();
}

void check_subset(const RegressionProblem& problem, const IndexSet& subset) {
  if (subset.empty()) {
    throw ArgumentError("regression subset must be non-empty");
  }
  subset.require_within(problem.n());
}

void check_enumeration(std::size_t n, std::size_t size, std::uint64_t cap) {
  if (size == 0 || size > n) {
    throw ArgumentError("subset size " + std::to_string(size) + " outside 1.." +
                        std::to_string(n));
  }
  const std::uint64_t count = binomial(n, size);
  if (count > cap) {
    throw FeasibilityError("enumerating binomial(" + std::to_string(n) + ", " +
                           std::to_string(size) + ") subsets exceeds the cap of " +
                           std::to_string(cap) + "; use torrent instead");
  }
}

double largest_singular_value(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.cols() == 1) return m.col(0).norm();
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

}  // namespace

RegressionProblem::RegressionProblem(Eigen::MatrixXd x, Eigen::VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() == 0 || x_.cols() == 0) {
    throw ArgumentError("regression problem needs n >= 1 and d >= 1");
  }
  if (x_.rows() != y_.rows()) {
    throw ArgumentError("X has " + std::to_string(x_.rows()) + " rows but y has " +
                        std::to_string(y_.rows()));
  }
  if (!x_.allFinite() || !y_.allFinite()) {
    throw ArgumentError("regression problem contains NaN or Inf");
  }
  const double scale = largest_singular_value(x_);
  rank_tolerance_ = static_cast<double>(std::max(x_.rows(), x_.cols())) *
                    std::numeric_limits<double>::epsilon() * scale;
}

Eigen::MatrixXd RegressionProblem::rows(const IndexSet& subset) const {
  return gather_rows(x_, subset.zero_based());
}

Eigen::VectorXd RegressionProblem::response(const IndexSet& subset) const {
  return gather(y_, subset.zero_based());
}

std::string_view to_string(RobustMethod method) {
  switch (method) {
    case RobustMethod::OLS: return "ols";
    case RobustMethod::Torrent: return "torrent";
    case RobustMethod::BFS: return "bfs";
  }
  return "unknown";
}

Eigen::VectorXd ols(const RegressionProblem& problem, const IndexSet& subset) {
  check_subset(problem, subset);
  return solve_offsets(problem, subset.zero_based());
}

RobustFit ols_fit(const RegressionProblem& problem) {
  RobustFit fit;
  fit.method = RobustMethod::OLS;
  fit.inliers = IndexSet::all(problem.n());
  fit.beta = ols(problem, fit.inliers);
  fit.residual_norm = (problem.y() - problem.x() * fit.beta).norm();
  return fit;
}

IndexSet hard_threshold(const Eigen::VectorXd& v, std::size_t a) {
  const auto n = static_cast<std::size_t>(v.size());
  if (a == 0 || a > n) {
    throw ArgumentError("hard threshold size a = " + std::to_string(a) + " outside 1.." +
                        std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&v](std::size_t l, std::size_t r) {
    return v(static_cast<Eigen::Index>(l)) < v(static_cast<Eigen::Index>(r));
  });
  order.resize(a);
  std::sort(order.begin(), order.end());
  return IndexSet::from_zero_based(order);
}

RobustFit torrent(const RegressionProblem& problem, std::size_t a, std::size_t max_iter) {
  const std::size_t n = problem.n();
  if (a == 0 || a > n) {
    throw ArgumentError("torrent threshold a = " + std::to_string(a) + " outside 1.." +
                        std::to_string(n));
  }
  if (max_iter == 0) {
    throw ArgumentError("torrent max_iter must be at least 1");
  }
  if (a < problem.d()) {
    warn("torrent threshold a = " + std::to_string(a) + " is below the dimension d = " +
         std::to_string(problem.d()) + "; subset fits are rank deficient");
  }

  RobustFit fit;
  fit.method = RobustMethod::Torrent;
  fit.converged = false;

  IndexSet current = IndexSet::all(n);
  // The first comparison is against ||y||, the residual of beta = 0.
  double previous = problem.y().norm();
  for (std::size_t t = 1; t <= max_iter; ++t) {
    const Eigen::VectorXd beta = solve_offsets(problem, current.zero_based());
    const Eigen::VectorXd residual = (problem.y() - problem.x() * beta).cwiseAbs();
    IndexSet next = hard_threshold(residual, a);
    double sq = 0.0;
    for (std::size_t k : next) sq += residual(static_cast<Eigen::Index>(k - 1)) *
                                     residual(static_cast<Eigen::Index>(k - 1));
    const double norm = std::sqrt(sq);

    fit.beta = beta;
    fit.iterations = t;
    fit.residual_norm = norm;
    fit.residual_trace.push_back(norm);
    const bool stalled = !(norm < previous) || next == current;
    fit.inliers = std::move(next);
    if (stalled) {
      fit.converged = true;
      break;
    }
    previous = norm;
    current = fit.inliers;
  }
  return fit;
}

RobustFit bfs(const RegressionProblem& problem, const std::vector<IndexSet>& candidate_sets) {
  if (candidate_sets.empty()) {
    throw ArgumentError("bfs needs at least one candidate set");
  }
  for (const auto& s : candidate_sets) check_subset(problem, s);

  RobustFit fit;
  fit.method = RobustMethod::BFS;
  double best = std::numeric_limits<double>::infinity();
  const IndexSet* winner = nullptr;
  for (const auto& s : candidate_sets) {
    const auto offsets = s.zero_based();
    const Eigen::MatrixXd xs = gather_rows(problem.x(), offsets);
    const Eigen::VectorXd ys = gather(problem.y(), offsets);
    Eigen::VectorXd beta = solve_rows(problem, xs, ys);
    const double sq = residual_sq(xs, ys, beta);
    const double err = sq / static_cast<double>(s.size());
    if (err < best || winner == nullptr) {
      best = err;
      winner = &s;
      fit.beta = std::move(beta);
      fit.residual_norm = std::sqrt(sq);
    }
  }
  fit.inliers = *winner;
  return fit;
}

RobustFit bfs_all_of_size(const RegressionProblem& problem, std::size_t size,
                          std::uint64_t cap) {
  check_enumeration(problem.n(), size, cap);
  RobustFit fit;
  fit.method = RobustMethod::BFS;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> winner;
  Eigen::MatrixXd xs(static_cast<Eigen::Index>(size), problem.x().cols());
  Eigen::VectorXd ys(static_cast<Eigen::Index>(size));
  for_each_combination(problem.n(), size, [&](const std::vector<std::size_t>& offsets) {
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(offsets[i]);
      xs.row(static_cast<Eigen::Index>(i)) = problem.x().row(row);
      ys(static_cast<Eigen::Index>(i)) = problem.y()(row);
    }
    Eigen::VectorXd beta = solve_rows(problem, xs, ys);
    const double sq = residual_sq(xs, ys, beta);
    const double err = sq / static_cast<double>(size);
    if (err < best || winner.empty()) {
      best = err;
      winner = offsets;
      fit.beta = std::move(beta);
      fit.residual_norm = std::sqrt(sq);
    }
  });
  fit.inliers = IndexSet::from_zero_based(winner);
  return fit;
}

std::uint64_t binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step; divide by the gcd first
    // so the check below only fires on genuine overflow.
    std::uint64_t num = n - k + i;
    std::uint64_t den = i;
    const std::uint64_t g = std::gcd(result, den);
    result /= g;
    den /= g;
    num /= den;
    if (num != 0 && result > kMax / num) return kMax;
    result *= num;
  }
  return result;
}

std::vector<IndexSet> candidate_sets_all_of_size(std::size_t n, std::size_t size,
                                                  std::uint64_t cap) {
  check_enumeration(n, size, cap);
  std::vector<IndexSet> out;
  out.reserve(binomial(n, size));
  for_each_combination(n, size, [&out](const std::vector<std::size_t>& offsets) {
    out.push_back(IndexSet::from_zero_based(offsets));
  });
  return out;
}

void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    visit(idx);
    // Rightmost position that can still advance.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double eta_condition(const RegressionProblem& problem, std::size_t a,
                     const IndexSet& true_inliers, std::uint64_t cap) {
  check_enumeration(problem.n(), a, cap);
  true_inliers.require_within(problem.n());
  const double tol = problem.rank_tolerance();
  const auto d = static_cast<Eigen::Index>(problem.d());
  double worst = 0.0;
  for_each_combination(problem.n(), a, [&](const std::vector<std::size_t>& offsets) {
    if (std::isinf(worst)) return;
    const Eigen::MatrixXd xs = gather_rows(problem.x(), offsets);
    double sigma_min = 0.0;
    if (xs.rows() >= d) {
      sigma_min = d == 1 ? xs.col(0).norm()
                         : Eigen::JacobiSVD<Eigen::MatrixXd>(xs).singularValues()(d - 1);
    }
    if (!(sigma_min > tol)) {
      worst = std::numeric_limits<double>::infinity();
      return;
    }
    const IndexSet v = IndexSet::from_zero_based(offsets).symmetric_difference(true_inliers);
    const double numerator = largest_singular_value(problem.rows(v));
    worst = std::max(worst, numerator / sigma_min);
  });
  return worst;
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  std::swap(warning_handler(), handler);
  return handler;
}

}  // namespace decor
