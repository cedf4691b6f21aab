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

// Measure-and-prepare estimation on the symmetric subspace.
//
// A CSS {c_r, |φ_r⟩} on M copies yields the POVM O_r = c_r d_M^+ (|φ_r⟩⟨φ_r|)^{⊗M};
// on outcome r every user prepares |φ_r⟩. If the set is also an (M+1)-copy
// CSS the single-copy output is (M/(M+d)) ρ^(1) + (1/(M+d)) I for every input.

#pragma once

#include <cstdint>
#include <vector>

#include <boost/rational.hpp>

#include "cqsr/css.hpp"
#include "cqsr/stats.hpp"
#include "cqsr/symspace.hpp"

namespace cqsr {

using Rational = boost::rational<std::int64_t>;

/// Rank-one product POVM O_r = scale_r (|φ_r⟩⟨φ_r|)^{⊗M} with preparation
/// states |φ_r⟩.
class Povm {
 public:
  /// Validates shapes and nonnegative scales only; completeness is checked
  /// by `completeness_error()` and at use sites.
  Povm(std::vector<PureState> prepare_states, std::vector<double> effect_scales, int M);

  int copies() const { return copies_; }
  int dimension() const { return prepare_states_.front().dimension(); }
  std::size_t size() const { return prepare_states_.size(); }
  const std::vector<PureState>& prepare_states() const { return prepare_states_; }
  const std::vector<double>& effect_scales() const { return effect_scales_; }

  /// O_r in symmetric coordinates.
  SymmetricOperator effect(std::size_t r) const;
  /// Spectral norm of Σ_r O_r - I_+^M.
  double completeness_error() const;

  /// Tr[O_r ρ] through v_r† ρ v_r with v_r the embedding of |φ_r⟩.
  std::vector<double> outcome_probabilities(const SymmetricOperator& rho) const;
  /// Tr[O_r (|ψ⟩⟨ψ|)^{⊗M}] = scale_r |⟨φ_r|ψ⟩|^{2M}.
  std::vector<double> outcome_probabilities(const PureState& psi) const;

 private:
  std::vector<PureState> prepare_states_;
  std::vector<double> effect_scales_;
  int copies_;
  std::vector<CVector> embedded_;
};

/// Completeness tolerance applied by apply_channel and the protocol.
inline constexpr double kPovmCompletenessTolerance = 1e-6;

/// Builds the CSS-derived POVM; throws ValidationError citing the defect if
/// `set` is not an M-copy CSS within `tolerance`.
Povm povm_from_css(const WeightedStateSet& set, int M, double tolerance = 1e-8);

/// F̂ = ∫ dψ (|ψ⟩⟨ψ|)^{⊗M} |⟨ψ|0⟩|², closed form: diagonal with entry
/// (m_0 + 1) / ((M + 1) d_{M+1}^+) at m.
SymmetricOperator build_F_operator(int d, int M);
/// Same operator via Tr_last[(I_+^{M+1}/d_{M+1}^+)(I ⊗ |0⟩⟨0|)].
SymmetricOperator build_F_operator_from_haar_moment(int d, int M);
/// Diagonal of F̂ in exact rational arithmetic.
std::vector<Rational> f_operator_diagonal_exact(int d, int M);

/// (M+1)/(M+d).
double optimal_mean_fidelity(int d, int M);
Rational optimal_mean_fidelity_exact(int d, int M);

struct ChannelOutput {
  std::vector<double> outcome_probabilities;
  DensityMatrix single_copy_state;  // ρ̃^(1) = Σ_r p_r |φ_r⟩⟨φ_r|
  double fidelity_vs_input = 0.0;   // Tr[ρ^(1) ρ̃^(1)]
};

/// Runs the estimation channel on a symmetric density operator.
ChannelOutput apply_channel(const SymmetricOperator& rho, const Povm& povm);

/// Exact single-copy fidelity f(ψ) = Σ_r p_r(ψ) |⟨φ_r|ψ⟩|².
double single_copy_fidelity(const Povm& povm, const PureState& psi);

struct DepolarizingFit {
  double shrink = 1.0;    // s in out ≈ s·in + ((1 - s)/d)·I
  double residual = 0.0;  // Frobenius norm of the misfit
  double expected_shrink = 1.0;  // M/(M+d), the optimal universal value
};

/// Least-squares fit of `out` as a depolarized `in`. A maximally mixed `in`
/// carries no shrink information; s = 1 is reported in that case.
DepolarizingFit depolarizing_decompose(const DensityMatrix& in, const DensityMatrix& out, int M);

struct FidelityEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  double variance = 0.0;   // per-sample variance
  double min = 0.0;
  double max = 0.0;
  std::uint64_t samples = 0;
};

/// Haar average of f(ψ) using `rng` sequentially.
FidelityEstimate mean_fidelity_monte_carlo(const Povm& povm, std::uint64_t samples, Rng& rng);
/// Same estimate split over `partitions` workers, each with a stream derived
/// from `master_seed`; deterministic for fixed (master_seed, partitions).
FidelityEstimate mean_fidelity_monte_carlo(const Povm& povm, std::uint64_t samples, std::uint64_t master_seed,
                                           int partitions);

/// P̂ = Σ_r c_r (|φ_r⟩⟨φ_r|)^{⊗(M+1)} - I_+^{M+1}/d_{M+1}^+.
SymmetricOperator universality_residual(const WeightedStateSet& set, int M);

struct ProbeResult {
  double delta_max = 0.0;  // max |Δ_lk| over every probe state and (l, k)
  SymmetricOperator reconstructed;  // P̂ rebuilt from probe values alone
  double reconstruction_error = 0.0;  // max |reconstructed - P̂|
  std::size_t probes = 0;
};

/// Evaluates Δ_lk(ρ) = Tr[(ρ ⊗ |l⟩⟨k|) P̂] over the probe family: every
/// basis state |m⟩, then (λ1|m⟩ + λ2 e^{iφ}|n⟩)/sqrt(λ1² + λ2²) for m ≠ n and
/// (λ1, λ2, φ) ∈ {(1,1,0), (1,1,π/2), (1,2,0), (1,2,π/2)}; diagonal entries
/// of P̂ are recovered first, then off-diagonal ones.
ProbeResult probe_universality(const SymmetricOperator& phat);

struct UniversalityReport {
  double phat_norm = 0.0;
  double delta_max = 0.0;
  double reconstruction_error = 0.0;
};

UniversalityReport universality_defect(const WeightedStateSet& set, int M);

}  // namespace cqsr
