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

// Brute-force reference on the full tensor space (C^d)^{⊗M}.
//
// Everything here is computed with plain Kronecker products and index
// arithmetic on tensor strings, never through the occupation-number
// formulas in symspace.hpp, so the two can check each other.

#pragma once

#include <cstdint>

#include "cqsr/symspace.hpp"

namespace cqsr {

inline constexpr std::uint64_t kDefaultTensorCap = 4096;

class FullTensorOracle {
 public:
  /// Throws SizeLimitError if d^M exceeds `cap`.
  FullTensorOracle(int d, int M, std::uint64_t cap = kDefaultTensorCap);

  int dimension() const { return d_; }
  int copies() const { return copies_; }
  std::uint64_t tensor_size() const { return tensor_size_; }

  /// Isometry V (d^M × d_M^+) mapping symmetric coordinates into the tensor
  /// space: column m is the normalized uniform superposition of all strings
  /// with occupation m.
  const CMatrix& isometry() const { return isometry_; }

  /// VV†, the projector onto symmetric tensors.
  CMatrix symmetrizer() const { return isometry_ * isometry_.adjoint(); }

  /// |ψ⟩^{⊗M} as a Kronecker product.
  CVector product_state(const PureState& psi) const;

  CVector to_symmetric(const CVector& tensor_vector) const { return isometry_.adjoint() * tensor_vector; }
  CVector to_tensor(const CVector& symmetric_vector) const { return isometry_ * symmetric_vector; }
  SymmetricOperator to_symmetric(const CMatrix& tensor_operator) const;
  CMatrix to_tensor(const SymmetricOperator& op) const;

  /// Occupation vector of a tensor basis string; factor 0 is the most
  /// significant base-d digit.
  Composition occupation(std::uint64_t tensor_index) const;

  /// Traces out the last `traced` factors of an operator on `total` factors.
  static CMatrix partial_trace_last(const CMatrix& op, int d, int total, int traced);

 private:
  int d_;
  int copies_;
  std::uint64_t tensor_size_;
  CMatrix isometry_;
};

/// Symmetrizer P_sym = (1/M!) Σ_π U_π on (C^d)^{⊗M}, built from explicit
/// permutations of tensor factors.
CMatrix permutation_symmetrizer(int d, int M, std::uint64_t cap = kDefaultTensorCap);

}  // namespace cqsr
