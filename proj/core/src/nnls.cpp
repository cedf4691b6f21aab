// Copyright 2026 The CQSR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cqsr/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cqsr/errors.hpp"

namespace cqsr {
namespace {

// Unconstrained least squares restricted to the passive columns.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const std::vector<Eigen::Index>& passive) {
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t i = 0; i < passive.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = A.col(passive[i]);
  Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(A.cols());
  for (std::size_t i = 0; i < passive.size(); ++i) full(passive[i]) = z(static_cast<Eigen::Index>(i));
  return full;
}

}  // namespace

NnlsResult solve_nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iterations) {
  if (A.rows() != b.size()) throw ValidationError("nnls: row count of A does not match b");
  if (A.cols() == 0) throw ValidationError("nnls: no unknowns");
  const Eigen::Index n = A.cols();
  if (max_iterations <= 0) max_iterations = 3 * static_cast<int>(n) + 100;

  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * A.norm() *
                     std::max<double>(1.0, b.norm()) * static_cast<double>(std::max(A.rows(), n));

  NnlsResult result;
  result.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> in_passive(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> passive;

  Eigen::VectorXd w = A.transpose() * (b - A * result.x);
  while (true) {
    // Most violated KKT multiplier among the active (zero) variables.
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!in_passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) {
      result.converged = true;
      break;
    }
    if (result.iterations >= max_iterations) break;
    ++result.iterations;

    in_passive[static_cast<std::size_t>(best)] = true;
    passive.push_back(best);

    Eigen::VectorXd s = passive_solve(A, b, passive);
    // Inner loop: step back toward feasibility while any passive entry is ≤ 0.
    while (true) {
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j : passive) {
        if (s(j) <= 0.0) {
          const double denom = result.x(j) - s(j);
          if (denom > 0.0) alpha = std::min(alpha, result.x(j) / denom);
          else alpha = 0.0;
        }
      }
      if (!std::isfinite(alpha)) break;
      result.x += alpha * (s - result.x);
      std::vector<Eigen::Index> kept;
      for (Eigen::Index j : passive) {
        if (result.x(j) <= tol) {
          result.x(j) = 0.0;
          in_passive[static_cast<std::size_t>(j)] = false;
        } else {
          kept.push_back(j);
        }
      }
      passive = std::move(kept);
      if (passive.empty()) {
        s.setZero();
        break;
      }
      s = passive_solve(A, b, passive);
    }
    result.x = s;
    w = A.transpose() * (b - A * result.x);
  }
  result.residual_norm = (A * result.x - b).norm();
  return result;
}

}  // namespace cqsr
