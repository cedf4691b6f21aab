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

#include "cqsr/estimation.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "cqsr/errors.hpp"

namespace cqsr {
namespace {

// |z|^(2M) without pow on complex values.
double power_norm(Complex z, int M) {
  const double n = std::norm(z);
  double r = 1.0;
  for (int i = 0; i < M; ++i) r *= n;
  return r;
}

// Clamps rounding-level negatives and renormalizes.
void clean_probabilities(std::vector<double>& p) {
  double total = 0.0;
  for (double& x : p) {
    if (x < 0.0) {
      if (x < -kAlgebraicTolerance) throw ValidationError("POVM produced a negative probability");
      x = 0.0;
    }
    total += x;
  }
  if (!(total > 0.0)) throw ValidationError("POVM assigns zero total probability");
  for (double& x : p) x /= total;
}

}  // namespace

// --- Povm -------------------------------------------------------------------

Povm::Povm(std::vector<PureState> prepare_states, std::vector<double> effect_scales, int M)
    : prepare_states_(std::move(prepare_states)), effect_scales_(std::move(effect_scales)), copies_(M) {
  if (prepare_states_.empty()) throw ValidationError("POVM needs at least one outcome");
  if (prepare_states_.size() != effect_scales_.size()) throw ValidationError("POVM scale count mismatch");
  if (M < 1) throw ValidationError("POVM copy count must be >= 1");
  const int d = prepare_states_.front().dimension();
  const SymmetricBasis basis(d, M);
  embedded_.reserve(prepare_states_.size());
  for (std::size_t r = 0; r < prepare_states_.size(); ++r) {
    if (prepare_states_[r].dimension() != d) throw ValidationError("POVM states must share one dimension");
    if (!(effect_scales_[r] >= 0.0)) throw ValidationError("POVM effects must be positive semidefinite");
    embedded_.push_back(embed_product_state(prepare_states_[r], basis));
  }
}

SymmetricOperator Povm::effect(std::size_t r) const {
  const CVector& v = embedded_.at(r);
  return SymmetricOperator(effect_scales_[r] * (v * v.adjoint()), dimension(), copies_);
}

double Povm::completeness_error() const {
  const auto n = embedded_.front().size();
  CMatrix sum = -CMatrix::Identity(n, n);
  for (std::size_t r = 0; r < embedded_.size(); ++r) {
    sum.noalias() += effect_scales_[r] * (embedded_[r] * embedded_[r].adjoint());
  }
  return SymmetricOperator(std::move(sum), dimension(), copies_).hermitian_norm();
}

std::vector<double> Povm::outcome_probabilities(const SymmetricOperator& rho) const {
  if (rho.dimension() != dimension() || rho.copies() != copies_) {
    throw ValidationError("state does not live on the POVM's symmetric subspace");
  }
  std::vector<double> p(embedded_.size());
  for (std::size_t r = 0; r < embedded_.size(); ++r) {
    p[r] = effect_scales_[r] * embedded_[r].dot(rho.matrix() * embedded_[r]).real();
  }
  return p;
}

std::vector<double> Povm::outcome_probabilities(const PureState& psi) const {
  if (psi.dimension() != dimension()) throw ValidationError("input dimension does not match the POVM");
  std::vector<double> p(prepare_states_.size());
  for (std::size_t r = 0; r < prepare_states_.size(); ++r) {
    p[r] = effect_scales_[r] * power_norm(prepare_states_[r].inner(psi), copies_);
  }
  return p;
}

Povm povm_from_css(const WeightedStateSet& set, int M, double tolerance) {
  const CssReport report = css_defect(set, M, tolerance);
  if (!report.is_css) {
    throw ValidationError("state set is not a " + std::to_string(M) + "-copy CSS (defect " +
                          std::to_string(report.defect) + " > " + std::to_string(tolerance) + ")");
  }
  const double dim = static_cast<double>(dim_sym(set.dimension(), M));
  std::vector<double> scales;
  scales.reserve(set.size());
  for (double c : set.weights()) scales.push_back(c * dim);
  return Povm(set.states(), std::move(scales), M);
}

// --- F operator and optimal fidelity ------------------------------------------

SymmetricOperator build_F_operator(int d, int M) {
  const SymmetricBasis basis(d, M);
  const double upper = static_cast<double>(dim_sym(d, M + 1));
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix f = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f(i, i) = (basis[static_cast<std::size_t>(i)][0] + 1.0) / ((M + 1.0) * upper);
  }
  return SymmetricOperator(std::move(f), d, M);
}

SymmetricOperator build_F_operator_from_haar_moment(int d, int M) {
  CMatrix zero_projector = CMatrix::Zero(d, d);
  zero_projector(0, 0) = 1.0;
  return contract_last_copy(haar_moment(d, M + 1), zero_projector);
}

std::vector<Rational> f_operator_diagonal_exact(int d, int M) {
  const SymmetricBasis basis(d, M);
  const auto upper = static_cast<std::int64_t>(dim_sym(d, M + 1));
  std::vector<Rational> out;
  out.reserve(basis.size());
  for (const Composition& m : basis.elements()) {
    out.emplace_back(m[0] + 1, static_cast<std::int64_t>(M + 1) * upper);
  }
  return out;
}

double optimal_mean_fidelity(int d, int M) {
  if (d < 2 || M < 1) throw ValidationError("optimal fidelity needs d >= 2 and M >= 1");
  return (M + 1.0) / (M + static_cast<double>(d));
}

Rational optimal_mean_fidelity_exact(int d, int M) {
  if (d < 2 || M < 1) throw ValidationError("optimal fidelity needs d >= 2 and M >= 1");
  return Rational(M + 1, M + d);
}

// --- Channel ----------------------------------------------------------------

ChannelOutput apply_channel(const SymmetricOperator& rho, const Povm& povm) {
  rho.validate_density();
  const double completeness = povm.completeness_error();
  if (completeness > kPovmCompletenessTolerance) {
    throw ValidationError("POVM is incomplete (||Σ O_r - I|| = " + std::to_string(completeness) + ")");
  }
  std::vector<double> p = povm.outcome_probabilities(rho);
  clean_probabilities(p);

  const int d = povm.dimension();
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t r = 0; r < p.size(); ++r) out.noalias() += p[r] * povm.prepare_states()[r].projector();
  DensityMatrix reduced_out(std::move(out));
  const DensityMatrix reduced_in = partial_trace_to_single(rho);
  const double fidelity = reduced_in.overlap(reduced_out);
  return ChannelOutput{std::move(p), std::move(reduced_out), fidelity};
}

double single_copy_fidelity(const Povm& povm, const PureState& psi) {
  std::vector<double> p = povm.outcome_probabilities(psi);
  clean_probabilities(p);
  double f = 0.0;
  for (std::size_t r = 0; r < p.size(); ++r) f += p[r] * std::norm(povm.prepare_states()[r].inner(psi));
  return f;
}

DepolarizingFit depolarizing_decompose(const DensityMatrix& in, const DensityMatrix& out, int M) {
  const int d = in.dimension();
  if (out.dimension() != d) throw ValidationError("density matrices differ in dimension");
  const CMatrix mixed = CMatrix::Identity(d, d) / static_cast<double>(d);
  const CMatrix x = in.matrix() - mixed;
  const CMatrix y = out.matrix() - mixed;
  DepolarizingFit fit;
  fit.expected_shrink = M / static_cast<double>(M + d);
  const double denom = x.squaredNorm();
  fit.shrink = denom > 0.0 ? (x.adjoint() * y).trace().real() / denom : 1.0;
  fit.residual = (y - fit.shrink * x).norm();
  return fit;
}

// --- Monte Carlo fidelity ---------------------------------------------------

namespace {

RunningStats accumulate_fidelity(const Povm& povm, std::uint64_t samples, Rng& rng) {
  RunningStats stats;
  for (std::uint64_t i = 0; i < samples; ++i) {
    stats.add(single_copy_fidelity(povm, haar_random_state(povm.dimension(), rng)));
  }
  return stats;
}

FidelityEstimate to_estimate(const RunningStats& s) {
  return FidelityEstimate{s.mean(), s.stderr_of_mean(), s.variance(), s.min(), s.max(), s.count()};
}

}  // namespace

FidelityEstimate mean_fidelity_monte_carlo(const Povm& povm, std::uint64_t samples, Rng& rng) {
  if (samples < 1) throw ValidationError("Monte Carlo needs at least one sample");
  return to_estimate(accumulate_fidelity(povm, samples, rng));
}

FidelityEstimate mean_fidelity_monte_carlo(const Povm& povm, std::uint64_t samples, std::uint64_t master_seed,
                                           int partitions) {
  if (samples < 1) throw ValidationError("Monte Carlo needs at least one sample");
  if (partitions < 1) throw ValidationError("partition count must be >= 1");
  const CounterStream seeds(master_seed);
  const auto parts = static_cast<std::uint64_t>(partitions);
  std::vector<RunningStats> partial(parts);
  {
    std::vector<std::jthread> workers;
    for (std::uint64_t p = 0; p < parts; ++p) {
      const std::uint64_t count = samples / parts + (p < samples % parts ? 1 : 0);
      workers.emplace_back([&, p, count] {
        Rng rng(seeds.derive(p));
        partial[p] = accumulate_fidelity(povm, count, rng);
      });
    }
  }
  RunningStats total;
  for (const auto& s : partial) total.merge(s);
  return to_estimate(total);
}

// --- Universality -----------------------------------------------------------

SymmetricOperator universality_residual(const WeightedStateSet& set, int M) {
  const SymmetricOperator moment = moment_operator(set, M + 1);
  const auto n = static_cast<Eigen::Index>(moment.size());
  return SymmetricOperator(moment.matrix() - CMatrix::Identity(n, n) / static_cast<double>(n), set.dimension(), M + 1);
}

ProbeResult probe_universality(const SymmetricOperator& phat) {
  const int d = phat.dimension();
  const int M = phat.copies() - 1;
  if (M < 1) throw ValidationError("universality probes need an operator on at least two copies");
  const SymmetricBasis lower(d, M);
  const SymmetricBasis upper(d, M + 1);
  const auto n = static_cast<Eigen::Index>(lower.size());

  // G_lk = Tr_last[P̂ (I ⊗ |l⟩⟨k|)], so Δ_lk(ρ) = Tr[ρ G_lk].
  std::vector<CMatrix> g(static_cast<std::size_t>(d) * d);
  for (int l = 0; l < d; ++l) {
    for (int k = 0; k < d; ++k) {
      CMatrix b = CMatrix::Zero(d, d);
      b(l, k) = 1.0;
      g[static_cast<std::size_t>(l * d + k)] = contract_last_copy(phat, b).matrix();
    }
  }
  auto G = [&](int l, int k) -> const CMatrix& { return g[static_cast<std::size_t>(l * d + k)]; };

  struct Probe {
    double l1;
    double l2;
    double phi;
  };
  const std::array<Probe, 4> schedule{{{1, 1, 0}, {1, 1, std::numbers::pi / 2}, {1, 2, 0}, {1, 2, std::numbers::pi / 2}}};

  // Δ_lk for the normalized probe (λ1|m⟩ + λ2 e^{iφ}|n⟩), m ≠ n.
  auto superposition_delta = [&](const CMatrix& Glk, Eigen::Index m, Eigen::Index nn, const Probe& p) {
    const Complex a = p.l1;
    const Complex b = p.l2 * std::polar(1.0, p.phi);
    // ρ = |v⟩⟨v| with v = a|m⟩ + b|n⟩; Tr[ρ G] = v† G v.
    const Complex val = std::conj(a) * a * Glk(m, m) + std::conj(b) * b * Glk(nn, nn) + std::conj(a) * b * Glk(m, nn) +
                        std::conj(b) * a * Glk(nn, m);
    return val / (p.l1 * p.l1 + p.l2 * p.l2);
  };

  ProbeResult result{0.0, SymmetricOperator::zero(d, M + 1), 0.0, 0};

  // Diagonal probes |m⟩⟨m|.
  for (Eigen::Index m = 0; m < n; ++m) {
    for (const CMatrix& Glk : g) result.delta_max = std::max(result.delta_max, std::abs(Glk(m, m)));
    ++result.probes;
  }
  // Superposition probes.
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index nn = m + 1; nn < n; ++nn) {
      for (const Probe& p : schedule) {
        for (const CMatrix& Glk : g) {
          result.delta_max = std::max(result.delta_max, std::abs(superposition_delta(Glk, m, nn, p)));
        }
        ++result.probes;
      }
    }
  }

  // Reconstruction: P_rs = (M+1)/sqrt(r_k s_l) · ⟨r - e_k, k|P̂|s - e_l, l⟩.
  CMatrix rebuilt = CMatrix::Zero(static_cast<Eigen::Index>(upper.size()), static_cast<Eigen::Index>(upper.size()));
  auto first_occupied = [d](const Composition& c) {
    for (int i = 0; i < d; ++i) {
      if (c[static_cast<std::size_t>(i)] > 0) return i;
    }
    return -1;
  };
  // Diagonal elements first, then off-diagonal ones.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t ri = 0; ri < upper.size(); ++ri) {
      for (std::size_t si = 0; si < upper.size(); ++si) {
        if ((pass == 0) != (ri == si)) continue;
        const Composition& r = upper[ri];
        const Composition& s = upper[si];
        const int k = first_occupied(r);
        const int l = first_occupied(s);
        const auto m = static_cast<Eigen::Index>(lower.index(r - Composition::unit(d, k)));
        const auto nn = static_cast<Eigen::Index>(lower.index(s - Composition::unit(d, l)));
        const CMatrix& Glk = G(l, k);
        Complex c;
        if (m == nn) {
          c = Glk(m, m);
        } else {
          // (λ1² + λ2²)Δ - λ1² A - λ2² B = λ1 λ2 (e^{iφ} C + e^{-iφ} D), solved for (C, D).
          const Complex A = Glk(m, m);
          const Complex B = Glk(nn, nn);
          Eigen::Matrix<Complex, 4, 2> lhs;
          Eigen::Matrix<Complex, 4, 1> rhs;
          for (std::size_t i = 0; i < schedule.size(); ++i) {
            const Probe& p = schedule[i];
            const double norm = p.l1 * p.l1 + p.l2 * p.l2;
            const Complex delta = superposition_delta(Glk, m, nn, p);
            rhs(static_cast<Eigen::Index>(i)) = norm * delta - p.l1 * p.l1 * A - p.l2 * p.l2 * B;
            lhs(static_cast<Eigen::Index>(i), 0) = p.l1 * p.l2 * std::polar(1.0, p.phi);
            lhs(static_cast<Eigen::Index>(i), 1) = p.l1 * p.l2 * std::polar(1.0, -p.phi);
          }
          const Eigen::Matrix<Complex, 2, 1> cd = lhs.colPivHouseholderQr().solve(rhs);
          c = cd(0);
        }
        const double scale = (M + 1.0) / std::sqrt(static_cast<double>(r[static_cast<std::size_t>(k)]) *
                                                   s[static_cast<std::size_t>(l)]);
        rebuilt(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(si)) = scale * c;
      }
    }
  }
  result.reconstruction_error = (rebuilt - phat.matrix()).cwiseAbs().maxCoeff();
  result.reconstructed = SymmetricOperator(std::move(rebuilt), d, M + 1);
  return result;
}

UniversalityReport universality_defect(const WeightedStateSet& set, int M) {
  if (M < 1) throw ValidationError("copy count must be >= 1");
  const SymmetricOperator phat = universality_residual(set, M);
  const ProbeResult probes = probe_universality(phat);
  return UniversalityReport{phat.hermitian_norm(), probes.delta_max, probes.reconstruction_error};
}

}  // namespace cqsr
