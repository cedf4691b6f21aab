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

// Linear algebra on the M-copy symmetric subspace of (C^d)^{⊗M}.
//
// Every operator is stored densely in the occupation-number basis |m⟩,
// m = (m_0, ..., m_{d-1}) with Σ m_i = M, ordered lexicographically
// descending: for d = 2, M = 2 the order is (2,0), (1,1), (0,2).

#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cqsr {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

/// Tolerance for exact algebraic identities.
inline constexpr double kAlgebraicTolerance = 1e-12;
/// Tolerance for quantities produced by several composed numerical steps.
inline constexpr double kNumericTolerance = 1e-10;

/// Dimension C(M+d-1, M) of the M-copy symmetric subspace of C^d.
/// Throws SizeLimitError if the result does not fit below 2^63.
std::uint64_t dim_sym(int d, int M);

/// Occupation vector (m_0, ..., m_{d-1}) labelling the symmetric basis state
/// with m_i copies in level i. The copy count is the sum of the entries.
class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<int> entries);

  int dimension() const { return static_cast<int>(entries_.size()); }
  int copies() const { return copies_; }
  int operator[](std::size_t i) const { return entries_[i]; }
  std::span<const int> entries() const { return entries_; }

  /// M! / Π m_i!, the number of tensor-product basis strings with these
  /// occupations.
  double multinomial() const;

  /// Unit composition e_level on d levels.
  static Composition unit(int d, int level);

  Composition operator+(const Composition& other) const;
  Composition operator-(const Composition& other) const;
  /// True if every entry of `other` is ≤ the corresponding entry here.
  bool contains(const Composition& other) const;

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition& a, const Composition& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<int> entries_;
  int copies_ = 0;
};

/// All compositions of M into d parts, lexicographically descending.
std::vector<Composition> enumerate_compositions(int d, int M);

/// Enumerated basis of one symmetric subspace with a reverse index.
class SymmetricBasis {
 public:
  SymmetricBasis(int d, int M);

  int dimension() const { return d_; }
  int copies() const { return copies_; }
  std::size_t size() const { return elements_.size(); }
  const Composition& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Composition>& elements() const { return elements_; }

  std::optional<std::size_t> find(const Composition& m) const;
  /// Index of `m`; throws ValidationError if `m` is not in this basis.
  std::size_t index(const Composition& m) const;

 private:
  int d_;
  int copies_;
  std::vector<Composition> elements_;
  std::map<Composition, std::size_t> index_;
};

/// Normalized vector in C^d.
class PureState {
 public:
  /// Throws ValidationError unless | ||amplitudes|| - 1 | ≤ 1e-12.
  explicit PureState(CVector amplitudes);

  /// Rescales `amplitudes` to unit norm; throws on a zero vector.
  static PureState normalized(CVector amplitudes);
  /// Computational basis state |level⟩ in dimension d.
  static PureState basis(int d, int level);

  int dimension() const { return static_cast<int>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  /// ⟨this|other⟩.
  Complex inner(const PureState& other) const { return amplitudes_.dot(other.amplitudes_); }
  CMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  CVector amplitudes_;
};

/// Dense operator on the M-copy symmetric subspace in the Composition basis.
class SymmetricOperator {
 public:
  /// Throws ValidationError if `matrix` is not dim_sym(d, M) square.
  SymmetricOperator(CMatrix matrix, int d, int M);

  static SymmetricOperator zero(int d, int M);
  static SymmetricOperator identity(int d, int M);
  /// |v⟩⟨v| for a coefficient vector in symmetric coordinates.
  static SymmetricOperator outer(const CVector& v, int d, int M);

  const CMatrix& matrix() const { return matrix_; }
  int dimension() const { return d_; }
  int copies() const { return copies_; }
  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }

  Complex trace() const { return matrix_.trace(); }
  bool is_hermitian(double tol = kAlgebraicTolerance) const;
  /// Spectral norm, assuming the operator is Hermitian.
  double hermitian_norm() const;
  double min_eigenvalue() const;

  /// Throws ValidationError unless Hermitian, trace 1 and PSD within `tol`.
  void validate_density(double tol = kNumericTolerance) const;

 private:
  CMatrix matrix_;
  int d_;
  int copies_;
};

/// Single-copy density operator on C^d.
class DensityMatrix {
 public:
  /// Throws ValidationError unless Hermitian, trace 1 and PSD within 1e-10.
  explicit DensityMatrix(CMatrix matrix);

  static DensityMatrix from_state(const PureState& psi) { return DensityMatrix(psi.projector()); }
  static DensityMatrix maximally_mixed(int d);

  const CMatrix& matrix() const { return matrix_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }

  /// Overlap Tr[ρ σ].
  double overlap(const DensityMatrix& other) const;

 private:
  CMatrix matrix_;
};

/// ⟨m|ψ^{⊗M}⟩ = sqrt(M!/Π m_i!) Π a_i^{m_i} for every m in `basis`.
CVector embed_product_state(const PureState& psi, const SymmetricBasis& basis);
CVector embed_product_state(const PureState& psi, int M);

/// One term of |m⟩ = Σ_k weight |m - k⟩|k⟩, where k carries `tail` copies.
struct SplitTerm {
  Composition head;  // M - L copies
  Composition tail;  // L copies
  double weight;

  friend bool operator==(const SplitTerm&, const SplitTerm&) = default;
};

/// Expands |m⟩ over the product of an (M-L)-copy and an L-copy symmetric
/// basis. Weights are sqrt(Π_j C(m_j, k_j) / C(M, L)); tails are listed
/// lexicographically descending.
std::vector<SplitTerm> split_symmetric_basis(const Composition& m, int L);

/// Traces out M - keep copies of a symmetric density operator. The result
/// lives on the keep-copy symmetric subspace.
SymmetricOperator partial_trace_copies(const SymmetricOperator& op, int keep);

/// Single-copy reduction ρ^(1) obtained by repeated symmetric splitting.
DensityMatrix partial_trace_to_single(const SymmetricOperator& op);

/// Single-copy reduction from the closed form
/// ρ^(1)_{αβ} = (1/M) Σ A_{mn} sqrt(m_α n_β) δ(m - e_α, n - e_β).
DensityMatrix single_copy_closed_form(const SymmetricOperator& op);

/// G = Tr_last[P (I ⊗ B)] for P on M+1 copies and a single-copy operator B;
/// G acts on M copies and Tr[(A ⊗ B) P] = Tr[A G] for every A.
SymmetricOperator contract_last_copy(const SymmetricOperator& P, const CMatrix& B);

/// ∫ dφ (|φ⟩⟨φ|)^{⊗M} = I_+^M / d_M^+.
SymmetricOperator haar_moment(int d, int M);

/// Normalized vector of i.i.d. standard complex Gaussians.
PureState haar_random_state(int d, Rng& rng);

/// Haar-distributed d×d unitary (QR of a complex Ginibre matrix, phase-fixed).
CMatrix haar_random_unitary(int d, Rng& rng);

}  // namespace cqsr
