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

#include "cqsr/symspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cqsr/errors.hpp"

namespace cqsr {
namespace {

void require_dims(int d, int M) {
  if (d < 1) throw ValidationError("dimension must be >= 1, got " + std::to_string(d));
  if (M < 0) throw ValidationError("copy count must be >= 0, got " + std::to_string(M));
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

void enumerate_into(int level, int remaining, std::vector<int>& prefix, std::vector<Composition>& out) {
  const int d = static_cast<int>(prefix.size());
  if (level == d - 1) {
    prefix[level] = remaining;
    out.emplace_back(prefix);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    prefix[level] = v;
    enumerate_into(level + 1, remaining - v, prefix, out);
  }
}

// All k ≤ m (componentwise) with Σ k = L, lexicographically descending.
void bounded_into(const Composition& m, int level, int remaining, std::vector<int>& prefix,
                  std::vector<Composition>& out) {
  const int d = m.dimension();
  if (level == d) {
    if (remaining == 0) out.emplace_back(prefix);
    return;
  }
  int tail_capacity = 0;
  for (int j = level + 1; j < d; ++j) tail_capacity += m[j];
  for (int v = std::min(remaining, m[level]); v >= 0; --v) {
    if (remaining - v > tail_capacity) break;
    prefix[level] = v;
    bounded_into(m, level + 1, remaining - v, prefix, out);
  }
  prefix[level] = 0;
}

}  // namespace

std::uint64_t dim_sym(int d, int M) {
  require_dims(d, M);
  const std::uint64_t n = static_cast<std::uint64_t>(M) + static_cast<std::uint64_t>(d) - 1;
  const std::uint64_t k = std::min<std::uint64_t>(static_cast<std::uint64_t>(M), static_cast<std::uint64_t>(d) - 1);
  constexpr unsigned __int128 kLimit = static_cast<unsigned __int128>(1) << 63;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact at every step: it equals C(n - k + i, i).
    r = r * (n - k + i) / i;
    if (r >= kLimit) {
      throw SizeLimitError("symmetric dimension C(" + std::to_string(n) + ", " + std::to_string(M) +
                           ") exceeds 2^63");
    }
  }
  return static_cast<std::uint64_t>(r);
}

// --- Composition ------------------------------------------------------------

Composition::Composition(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("composition needs at least one level");
  for (int e : entries_) {
    if (e < 0) throw ValidationError("composition entries must be nonnegative");
    copies_ += e;
  }
}

double Composition::multinomial() const {
  double r = 1.0;
  int partial = 0;
  for (int e : entries_) {
    partial += e;
    r *= binomial(partial, e);
  }
  return r;
}

Composition Composition::unit(int d, int level) {
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  e.at(static_cast<std::size_t>(level)) = 1;
  return Composition(std::move(e));
}

Composition Composition::operator+(const Composition& other) const {
  if (other.dimension() != dimension()) throw ValidationError("composition dimension mismatch");
  std::vector<int> e = entries_;
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.entries_[i];
  return Composition(std::move(e));
}

Composition Composition::operator-(const Composition& other) const {
  if (other.dimension() != dimension()) throw ValidationError("composition dimension mismatch");
  std::vector<int> e = entries_;
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= other.entries_[i];
  return Composition(std::move(e));
}

bool Composition::contains(const Composition& other) const {
  if (other.dimension() != dimension()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (other.entries_[i] > entries_[i]) return false;
  }
  return true;
}

std::vector<Composition> enumerate_compositions(int d, int M) {
  const std::uint64_t n = dim_sym(d, M);
  std::vector<Composition> out;
  out.reserve(n);
  std::vector<int> prefix(static_cast<std::size_t>(d), 0);
  enumerate_into(0, M, prefix, out);
  return out;
}

// --- SymmetricBasis ---------------------------------------------------------

SymmetricBasis::SymmetricBasis(int d, int M)
    : d_(d), copies_(M), elements_(enumerate_compositions(d, M)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
}

std::optional<std::size_t> SymmetricBasis::find(const Composition& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SymmetricBasis::index(const Composition& m) const {
  if (auto i = find(m)) return *i;
  throw ValidationError("composition is not in the symmetric basis");
}

// --- PureState --------------------------------------------------------------

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError("pure state needs dimension >= 1");
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kAlgebraicTolerance) {
    throw ValidationError("pure state is not normalized (norm " + std::to_string(norm) + ")");
  }
}

PureState PureState::normalized(CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("cannot normalize a zero vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(int d, int level) {
  if (level < 0 || level >= d) throw ValidationError("basis level out of range");
  CVector v = CVector::Zero(d);
  v(level) = 1.0;
  return PureState(std::move(v));
}

// --- SymmetricOperator ------------------------------------------------------

SymmetricOperator::SymmetricOperator(CMatrix matrix, int d, int M)
    : matrix_(std::move(matrix)), d_(d), copies_(M) {
  const auto n = static_cast<Eigen::Index>(dim_sym(d, M));
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw ValidationError("symmetric operator must be " + std::to_string(n) + "x" + std::to_string(n));
  }
}

SymmetricOperator SymmetricOperator::zero(int d, int M) {
  const auto n = static_cast<Eigen::Index>(dim_sym(d, M));
  return SymmetricOperator(CMatrix::Zero(n, n), d, M);
}

SymmetricOperator SymmetricOperator::identity(int d, int M) {
  const auto n = static_cast<Eigen::Index>(dim_sym(d, M));
  return SymmetricOperator(CMatrix::Identity(n, n), d, M);
}

SymmetricOperator SymmetricOperator::outer(const CVector& v, int d, int M) {
  return SymmetricOperator(v * v.adjoint(), d, M);
}

bool SymmetricOperator::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double SymmetricOperator::hermitian_norm() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double SymmetricOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void SymmetricOperator::validate_density(double tol) const {
  if (!is_hermitian(tol)) throw ValidationError("operator is not Hermitian");
  const Complex tr = trace();
  if (std::abs(tr - Complex(1.0)) > tol) {
    throw ValidationError("density operator trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  if (min_eigenvalue() < -tol) throw ValidationError("density operator is not positive semidefinite");
}

// --- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw ValidationError("density matrix must be square and nonempty");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kNumericTolerance) {
    throw ValidationError("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex(1.0)) > kNumericTolerance) {
    throw ValidationError("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kNumericTolerance) {
    throw ValidationError("density matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::overlap(const DensityMatrix& other) const {
  return (matrix_ * other.matrix_).trace().real();
}

// --- Embeddings and splits ----------------------------------------------------

CVector embed_product_state(const PureState& psi, const SymmetricBasis& basis) {
  if (psi.dimension() != basis.dimension()) throw ValidationError("state dimension does not match basis");
  CVector out(static_cast<Eigen::Index>(basis.size()));
  const int d = basis.dimension();
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const Composition& m = basis[idx];
    Complex c = std::sqrt(m.multinomial());
    for (int i = 0; i < d; ++i) {
      for (int p = 0; p < m[static_cast<std::size_t>(i)]; ++p) c *= psi[static_cast<std::size_t>(i)];
    }
    out(static_cast<Eigen::Index>(idx)) = c;
  }
  return out;
}

CVector embed_product_state(const PureState& psi, int M) {
  return embed_product_state(psi, SymmetricBasis(psi.dimension(), M));
}

std::vector<SplitTerm> split_symmetric_basis(const Composition& m, int L) {
  const int M = m.copies();
  if (L < 0 || L > M) {
    throw ValidationError("split size " + std::to_string(L) + " outside [0, " + std::to_string(M) + "]");
  }
  std::vector<Composition> tails;
  std::vector<int> prefix(static_cast<std::size_t>(m.dimension()), 0);
  bounded_into(m, 0, L, prefix, tails);

  const double total = binomial(M, L);
  std::vector<SplitTerm> out;
  out.reserve(tails.size());
  for (auto& k : tails) {
    double num = 1.0;
    for (int j = 0; j < m.dimension(); ++j) {
      num *= binomial(m[static_cast<std::size_t>(j)], k[static_cast<std::size_t>(j)]);
    }
    out.push_back(SplitTerm{m - k, std::move(k), std::sqrt(num / total)});
  }
  return out;
}

// --- Partial traces ---------------------------------------------------------

SymmetricOperator partial_trace_copies(const SymmetricOperator& op, int keep) {
  op.validate_density();
  const int d = op.dimension();
  const int M = op.copies();
  if (keep < 0 || keep > M) throw ValidationError("keep must lie in [0, M]");
  if (keep == M) return op;

  const SymmetricBasis full(d, M);
  const SymmetricBasis kept(d, keep);
  const SymmetricBasis traced(d, M - keep);

  struct Entry {
    std::size_t source;
    std::size_t head;
    double weight;
  };
  // Group split terms by the traced-out tail: only equal tails pair up.
  std::vector<std::vector<Entry>> by_tail(traced.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    for (const SplitTerm& t : split_symmetric_basis(full[i], M - keep)) {
      by_tail[traced.index(t.tail)].push_back({i, kept.index(t.head), t.weight});
    }
  }

  const auto n = static_cast<Eigen::Index>(kept.size());
  CMatrix out = CMatrix::Zero(n, n);
  const CMatrix& A = op.matrix();
  for (const auto& group : by_tail) {
    for (const Entry& a : group) {
      for (const Entry& b : group) {
        out(static_cast<Eigen::Index>(a.head), static_cast<Eigen::Index>(b.head)) +=
            a.weight * b.weight * A(static_cast<Eigen::Index>(a.source), static_cast<Eigen::Index>(b.source));
      }
    }
  }
  return SymmetricOperator(std::move(out), d, keep);
}

DensityMatrix partial_trace_to_single(const SymmetricOperator& op) {
  if (op.copies() < 1) throw ValidationError("single-copy reduction needs M >= 1");
  // For one copy the basis (1,0,..), (0,1,..), ... is the computational basis.
  return DensityMatrix(partial_trace_copies(op, 1).matrix());
}

DensityMatrix single_copy_closed_form(const SymmetricOperator& op) {
  op.validate_density();
  const int d = op.dimension();
  const int M = op.copies();
  if (M < 1) throw ValidationError("single-copy reduction needs M >= 1");
  const SymmetricBasis basis(d, M);
  const CMatrix& A = op.matrix();
  CMatrix rho = CMatrix::Zero(d, d);
  for (std::size_t mi = 0; mi < basis.size(); ++mi) {
    const Composition& m = basis[mi];
    for (int alpha = 0; alpha < d; ++alpha) {
      const int m_alpha = m[static_cast<std::size_t>(alpha)];
      if (m_alpha == 0) continue;
      const Composition rest = m - Composition::unit(d, alpha);
      for (int beta = 0; beta < d; ++beta) {
        const Composition n = rest + Composition::unit(d, beta);
        const std::size_t ni = basis.index(n);
        const int n_beta = n[static_cast<std::size_t>(beta)];
        rho(alpha, beta) += A(static_cast<Eigen::Index>(mi), static_cast<Eigen::Index>(ni)) *
                            std::sqrt(static_cast<double>(m_alpha) * n_beta);
      }
    }
  }
  return DensityMatrix(rho / static_cast<double>(M));
}

SymmetricOperator contract_last_copy(const SymmetricOperator& P, const CMatrix& B) {
  const int d = P.dimension();
  const int M = P.copies() - 1;
  if (M < 0) throw ValidationError("contraction needs at least one copy");
  if (B.rows() != d || B.cols() != d) throw ValidationError("single-copy operator has wrong dimension");

  const SymmetricBasis lower(d, M);
  const SymmetricBasis upper(d, M + 1);
  const auto n = static_cast<Eigen::Index>(lower.size());

  // lift[m][i] = (index of m + e_i, sqrt((m_i + 1) / (M + 1))).
  std::vector<std::vector<std::pair<Eigen::Index, double>>> lift(lower.size());
  for (std::size_t mi = 0; mi < lower.size(); ++mi) {
    for (int i = 0; i < d; ++i) {
      const Composition up = lower[mi] + Composition::unit(d, i);
      lift[mi].emplace_back(static_cast<Eigen::Index>(upper.index(up)),
                            std::sqrt(static_cast<double>(up[static_cast<std::size_t>(i)]) / (M + 1)));
    }
  }

  const CMatrix& Pm = P.matrix();
  CMatrix G = CMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      Complex acc = 0.0;
      for (int i = 0; i < d; ++i) {
        const auto [ra, wa] = lift[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) {
          if (B(j, i) == Complex(0.0)) continue;
          const auto [rb, wb] = lift[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
          acc += wa * wb * Pm(ra, rb) * B(j, i);
        }
      }
      G(a, b) = acc;
    }
  }
  return SymmetricOperator(std::move(G), d, M);
}

// --- Haar measure -----------------------------------------------------------

SymmetricOperator haar_moment(int d, int M) {
  if (M < 1) throw ValidationError("Haar moment needs M >= 1");
  const auto n = static_cast<Eigen::Index>(dim_sym(d, M));
  return SymmetricOperator(CMatrix::Identity(n, n) / static_cast<double>(n), d, M);
}

PureState haar_random_state(int d, Rng& rng) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return PureState::normalized(std::move(v));
}

CMatrix haar_random_unitary(int d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(i) *= diag / mag;
  }
  return q;
}

}  // namespace cqsr
