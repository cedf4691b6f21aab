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

// Mutually unbiased bases for d = 2 and odd prime d.
//
// For odd prime d, basis 0 is the computational basis and for k = 1..d
//   |ψ_t^k⟩ = d^{-1/2} Σ_j ω^{t(d-j)} ω^{-k s_j} |j⟩,
// with ω = exp(2πi/d) and s_j = j + (j+1) + ... + (d-1). For d = 2 the six
// states |0⟩, |1⟩, (|1⟩ ± |0⟩)/√2, (|1⟩ ± i|0⟩)/√2 are used directly.

#pragma once

#include <cstdint>
#include <vector>

#include "cqsr/css.hpp"
#include "cqsr/symspace.hpp"

namespace cqsr {

bool is_prime(int n);

struct MubFamily {
  int dimension = 0;
  Complex omega;                        // exp(2πi/d)
  std::vector<std::int64_t> s_table;    // s_j, j = 0..d-1 (empty for d = 2)
  std::vector<std::vector<PureState>> bases;  // d+1 bases of d states each

  /// All d(d+1) states, basis-major.
  std::vector<PureState> all_states() const;
};

/// Throws UnsupportedDimensionError unless d = 2 or d is an odd prime.
MubFamily mub_generate(int d);

/// The MUB states with uniform weights 1/(d(d+1)).
WeightedStateSet mub_as_css(int d);

/// Element classes of the two-copy moment Q̂ of the MUB states in the
/// product basis |j1 j2⟩, evaluated from integer phase exponents.
struct QhatAnalysis {
  SymmetricOperator qhat;          // Q̂ in symmetric coordinates
  double expected_diagonal = 0.0;  // 2 / (d(d+1))
  double diagonal_max_deviation = 0.0;  // max |Q̂_mm - expected| (symmetric basis)
  double offdiagonal_max = 0.0;         // max |Q̂_mn|, m ≠ n (symmetric basis)

  // Product-basis element classes (j's distinct within each class).
  double pair_to_pair_max = 0.0;    // max |⟨j1 j1|Q̂|j2 j2⟩|
  double mixed_to_pair_max = 0.0;   // max |⟨j1 j2|Q̂|j j⟩|, j1 ≠ j2
  double mixed_to_mixed_max = 0.0;  // max |⟨j1 j2|Q̂|j3 j4⟩|, {j1,j2} ≠ {j3,j4}
  double same_pair_deviation = 0.0;      // max |⟨j j|Q̂|j j⟩ - expected|
  double distinct_pair_deviation = 0.0;  // max |⟨j1 j2|Q̂|j1 j2⟩ + ⟨j1 j2|Q̂|j2 j1⟩ - expected|

  /// max |V†Q̂_product V - qhat|: the phase-sum route against the embedding route.
  double route_agreement = 0.0;
};

QhatAnalysis qhat_matrix_elements(int d);

}  // namespace cqsr
