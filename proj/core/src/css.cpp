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

#include "cqsr/css.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cqsr/errors.hpp"
#include "cqsr/full_tensor.hpp"
#include "cqsr/nnls.hpp"

namespace cqsr {
namespace {

std::size_t checked_sym_dim(int d, int M) {
  const std::uint64_t n = dim_sym(d, M);
  if (n > kMaxSymmetricDimension) {
    throw SizeLimitError("symmetric dimension " + std::to_string(n) + " exceeds the dense limit of " +
                         std::to_string(kMaxSymmetricDimension));
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

WeightedStateSet::WeightedStateSet(std::vector<PureState> states, std::vector<double> weights)
    : states_(std::move(states)), weights_(std::move(weights)) {
  if (states_.empty()) throw ValidationError("state set must contain at least one state");
  if (states_.size() != weights_.size()) {
    throw ValidationError("state set has " + std::to_string(states_.size()) + " states but " +
                          std::to_string(weights_.size()) + " weights");
  }
  const int d = states_.front().dimension();
  for (const auto& s : states_) {
    if (s.dimension() != d) throw ValidationError("all states in a set must share one dimension");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kNumericTolerance) {
    throw ValidationError("weights sum to " + std::to_string(total) + ", expected 1");
  }
}

WeightedStateSet WeightedStateSet::uniform(std::vector<PureState> states) {
  const std::size_t n = states.size();
  if (n == 0) throw ValidationError("state set must contain at least one state");
  return WeightedStateSet(std::move(states), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SymmetricOperator moment_operator(const WeightedStateSet& set, int M) {
  const int d = set.dimension();
  checked_sym_dim(d, M);
  const SymmetricBasis basis(d, M);
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix acc = CMatrix::Zero(n, n);
  for (std::size_t r = 0; r < set.size(); ++r) {
    const CVector v = embed_product_state(set.states()[r], basis);
    acc.noalias() += set.weights()[r] * (v * v.adjoint());
  }
  return SymmetricOperator(std::move(acc), d, M);
}

CssReport css_defect(const WeightedStateSet& set, int M, double tolerance) {
  if (M < 1) throw ValidationError("copy count must be >= 1");
  const SymmetricOperator moment = moment_operator(set, M);
  const auto n = static_cast<Eigen::Index>(moment.size());
  const SymmetricOperator diff(moment.matrix() - CMatrix::Identity(n, n) / static_cast<double>(n), set.dimension(),
                               M);
  CssReport report;
  report.copies_tested = M;
  report.defect = diff.hermitian_norm();
  report.tolerance = tolerance;
  report.is_css = report.defect <= tolerance;
  return report;
}

CssReport css_defect_brute_force(const WeightedStateSet& set, int M, std::uint64_t tensor_cap, double tolerance) {
  if (M < 1) throw ValidationError("copy count must be >= 1");
  const FullTensorOracle oracle(set.dimension(), M, tensor_cap);
  // Tr P_sym = d_M^+, so I_+^M / d_M^+ is P_sym / Tr P_sym.
  CMatrix diff = permutation_symmetrizer(set.dimension(), M, tensor_cap);
  diff /= -diff.trace().real();
  for (std::size_t r = 0; r < set.size(); ++r) {
    const CVector v = oracle.product_state(set.states()[r]);
    diff.noalias() += set.weights()[r] * (v * v.adjoint());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  CssReport report;
  report.copies_tested = M;
  report.defect = es.eigenvalues().cwiseAbs().maxCoeff();
  report.tolerance = tolerance;
  report.is_css = report.defect <= tolerance;
  return report;
}

std::vector<CssReport> lemma1_reduce(const WeightedStateSet& set, int M, double tolerance) {
  std::vector<CssReport> out;
  for (int k = M; k >= 1; --k) out.push_back(css_defect(set, k, tolerance));
  return out;
}

CssSolveResult css_solve(const std::vector<PureState>& candidates, int d, int M, const CssSolveOptions& options) {
  if (candidates.empty()) throw ValidationError("css_solve needs at least one candidate state");
  if (M < 1) throw ValidationError("copy count must be >= 1");
  for (const auto& c : candidates) {
    if (c.dimension() != d) throw ValidationError("candidate dimension does not match d");
  }
  const std::size_t D = checked_sym_dim(d, M);
  const SymmetricBasis basis(d, M);

  // Real linear system: diagonal entries, then sqrt(2)·(Re, Im) of each
  // upper-triangle entry, so ||A c - b|| is the Frobenius mismatch.
  const auto rows = static_cast<Eigen::Index>(D * D);
  const auto cols = static_cast<Eigen::Index>(candidates.size());
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index r = 0; r < cols; ++r) {
    const CVector v = embed_product_state(candidates[static_cast<std::size_t>(r)], basis);
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < D; ++i) {
      A(row++, r) = std::norm(v(static_cast<Eigen::Index>(i)));
    }
    for (std::size_t i = 0; i < D; ++i) {
      for (std::size_t j = i + 1; j < D; ++j) {
        const Complex e = v(static_cast<Eigen::Index>(i)) * std::conj(v(static_cast<Eigen::Index>(j)));
        A(row++, r) = root2 * e.real();
        A(row++, r) = root2 * e.imag();
      }
    }
  }
  for (std::size_t i = 0; i < D; ++i) b(static_cast<Eigen::Index>(i)) = 1.0 / static_cast<double>(D);

  const NnlsResult nnls = solve_nnls(A, b, options.max_iterations);

  CssSolveResult result;
  result.residual = nnls.residual_norm;
  result.iterations = nnls.iterations;
  result.report.copies_tested = M;
  result.report.tolerance = options.tolerance;

  const double total = nnls.x.sum();
  if (!(total > 0.0)) {
    result.report.defect = 1.0 / static_cast<double>(D);
    return result;
  }
  // Keep only the active candidates.
  std::vector<PureState> kept;
  std::vector<double> weights;
  for (Eigen::Index r = 0; r < cols; ++r) {
    if (nnls.x(r) > 0.0) {
      kept.push_back(candidates[static_cast<std::size_t>(r)]);
      weights.push_back(nnls.x(r) / total);
    }
  }

  WeightedStateSet candidate_set(std::move(kept), std::move(weights));
  result.report = css_defect(candidate_set, M, options.tolerance);
  // The solution is only ever accepted after independent verification.
  if (result.report.is_css) result.solution = std::move(candidate_set);
  return result;
}

std::vector<PureState> random_candidate_pool(int d, int count, Rng& rng) {
  if (count < 1) throw ValidationError("candidate pool size must be >= 1");
  std::vector<PureState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(haar_random_state(d, rng));
  return out;
}

}  // namespace cqsr
