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

// Completely symmetric sets: weighted pure-state ensembles {c_r, |φ_r⟩}
// whose M-fold moment Σ_r c_r (|φ_r⟩⟨φ_r|)^{⊗M} equals I_+^M / d_M^+.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cqsr/symspace.hpp"

namespace cqsr {

/// Largest symmetric-subspace dimension handled by the dense routines here.
inline constexpr std::uint64_t kMaxSymmetricDimension = 2048;

class WeightedStateSet {
 public:
  /// Throws ValidationError on empty input, mismatched lengths or
  /// dimensions, negative weights, or weights not summing to 1 (1e-10).
  WeightedStateSet(std::vector<PureState> states, std::vector<double> weights);

  static WeightedStateSet uniform(std::vector<PureState> states);

  int dimension() const { return states_.front().dimension(); }
  std::size_t size() const { return states_.size(); }
  const std::vector<PureState>& states() const { return states_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<PureState> states_;
  std::vector<double> weights_;
};

struct CssReport {
  int copies_tested = 0;
  double defect = 0.0;  // spectral norm of the moment minus I_+^M / d_M^+
  bool is_css = false;
  double tolerance = 0.0;
};

/// Σ_r c_r (|φ_r⟩⟨φ_r|)^{⊗M} in symmetric coordinates.
SymmetricOperator moment_operator(const WeightedStateSet& set, int M);

CssReport css_defect(const WeightedStateSet& set, int M, double tolerance = kNumericTolerance);

/// Same defect computed on the full d^M tensor space with Kronecker
/// products; throws SizeLimitError if d^M exceeds `tensor_cap`.
CssReport css_defect_brute_force(const WeightedStateSet& set, int M, std::uint64_t tensor_cap,
                                 double tolerance = kNumericTolerance);

/// Reports for M, M-1, ..., 1 copies.
std::vector<CssReport> lemma1_reduce(const WeightedStateSet& set, int M, double tolerance = kNumericTolerance);

struct CssSolveOptions {
  double tolerance = 1e-8;
  int max_iterations = 0;  // ≤ 0: solver default
};

struct CssSolveResult {
  std::optional<WeightedStateSet> solution;  // set only when feasible
  double residual = 0.0;                     // Frobenius norm of the moment mismatch
  int iterations = 0;
  CssReport report;  // css_defect of the (renormalized) weight vector

  bool feasible() const { return solution.has_value(); }
};

/// Finds nonnegative weights making `candidates` an M-copy CSS, if possible.
/// Infeasibility is reported through the result, not thrown.
CssSolveResult css_solve(const std::vector<PureState>& candidates, int d, int M,
                         const CssSolveOptions& options = {});

/// `count` Haar-random states; deterministic for a given generator state.
std::vector<PureState> random_candidate_pool(int d, int count, Rng& rng);

}  // namespace cqsr
