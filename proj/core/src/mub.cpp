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

#include "cqsr/mub.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cqsr/errors.hpp"
#include "cqsr/full_tensor.hpp"

namespace cqsr {
namespace {

std::int64_t mod(std::int64_t a, std::int64_t d) {
  const std::int64_t r = a % d;
  return r < 0 ? r + d : r;
}

Complex root_of_unity(std::int64_t exponent, int d) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod(exponent, d)) / d;
  return {std::cos(angle), std::sin(angle)};
}

// Phase exponent of ⟨j|ψ_t^k⟩ for k ≥ 1, reduced mod d.
std::int64_t phase_exponent(const MubFamily& f, int t, int k, int j) {
  const int d = f.dimension;
  return mod(static_cast<std::int64_t>(t) * (d - j) - static_cast<std::int64_t>(k) * f.s_table[static_cast<std::size_t>(j)], d);
}

MubFamily qubit_family() {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  auto state = [](Complex a0, Complex a1) {
    CVector v(2);
    v << a0, a1;
    return PureState(std::move(v));
  };
  MubFamily f;
  f.dimension = 2;
  f.omega = Complex(-1.0, 0.0);
  f.bases = {
      {state(1.0, 0.0), state(0.0, 1.0)},
      {state(h, h), state(-h, h)},          // |+⟩, |−⟩
      {state(i * h, h), state(-i * h, h)},  // |+̃⟩, |−̃⟩
  };
  return f;
}

}  // namespace

bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; static_cast<long long>(p) * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

std::vector<PureState> MubFamily::all_states() const {
  std::vector<PureState> out;
  for (const auto& basis : bases) out.insert(out.end(), basis.begin(), basis.end());
  return out;
}

MubFamily mub_generate(int d) {
  if (d == 2) return qubit_family();
  if (d < 3 || !is_prime(d)) {
    throw UnsupportedDimensionError("mutually unbiased bases are only constructed for d = 2 or odd prime d, got " +
                                    std::to_string(d));
  }
  MubFamily f;
  f.dimension = d;
  f.omega = root_of_unity(1, d);
  f.s_table.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    f.s_table[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(d - 1 + j) * (d - j) / 2;
  }

  f.bases.reserve(static_cast<std::size_t>(d) + 1);
  std::vector<PureState> computational;
  for (int t = 0; t < d; ++t) computational.push_back(PureState::basis(d, t));
  f.bases.push_back(std::move(computational));

  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 1; k <= d; ++k) {
    std::vector<PureState> basis;
    for (int t = 0; t < d; ++t) {
      CVector v(d);
      for (int j = 0; j < d; ++j) v(j) = scale * root_of_unity(phase_exponent(f, t, k, j), d);
      basis.push_back(PureState::normalized(std::move(v)));
    }
    f.bases.push_back(std::move(basis));
  }
  return f;
}

WeightedStateSet mub_as_css(int d) { return WeightedStateSet::uniform(mub_generate(d).all_states()); }

QhatAnalysis qhat_matrix_elements(int d) {
  if (d == 2) throw UnsupportedDimensionError("the Q-hat element analysis covers odd prime d only");
  const MubFamily family = mub_generate(d);
  const double norm = 1.0 / (static_cast<double>(d) * (d + 1));

  QhatAnalysis out{moment_operator(WeightedStateSet::uniform(family.all_states()), 2)};
  out.expected_diagonal = 2.0 * norm;

  const CMatrix& q = out.qhat.matrix();
  for (Eigen::Index a = 0; a < q.rows(); ++a) {
    for (Eigen::Index b = 0; b < q.cols(); ++b) {
      if (a == b) {
        out.diagonal_max_deviation = std::max(out.diagonal_max_deviation, std::abs(q(a, a) - out.expected_diagonal));
      } else {
        out.offdiagonal_max = std::max(out.offdiagonal_max, std::abs(q(a, b)));
      }
    }
  }

  // Product-basis Q̂: the computational basis contributes δ_{j1 j2 j3 j4};
  // every other basis contributes ψ(j1) ψ(j2) ψ*(j3) ψ*(j4).
  const auto D = static_cast<Eigen::Index>(d) * d;
  CMatrix prod = CMatrix::Zero(D, D);
  for (int j1 = 0; j1 < d; ++j1) {
    for (int j2 = 0; j2 < d; ++j2) {
      for (int j3 = 0; j3 < d; ++j3) {
        for (int j4 = 0; j4 < d; ++j4) {
          Complex sum = (j1 == j2 && j2 == j3 && j3 == j4) ? 1.0 : 0.0;
          if (d == 2) {
            for (std::size_t k = 1; k < family.bases.size(); ++k) {
              for (const PureState& s : family.bases[k]) {
                sum += s[j1] * s[j2] * std::conj(s[j3]) * std::conj(s[j4]);
              }
            }
          } else {
            // Σ_k Σ_t ω^E / d² with E an integer exponent: count exponents mod d.
            std::vector<std::int64_t> counts(static_cast<std::size_t>(d), 0);
            for (int k = 1; k <= d; ++k) {
              for (int t = 0; t < d; ++t) {
                const std::int64_t e = phase_exponent(family, t, k, j1) + phase_exponent(family, t, k, j2) -
                                       phase_exponent(family, t, k, j3) - phase_exponent(family, t, k, j4);
                ++counts[static_cast<std::size_t>(mod(e, d))];
              }
            }
            Complex phases = 0.0;
            for (int e = 0; e < d; ++e) phases += static_cast<double>(counts[static_cast<std::size_t>(e)]) * root_of_unity(e, d);
            sum += phases / (static_cast<double>(d) * d);
          }
          prod(j1 * d + j2, j3 * d + j4) = norm * sum;
        }
      }
    }
  }

  for (int j1 = 0; j1 < d; ++j1) {
    for (int j2 = 0; j2 < d; ++j2) {
      const Eigen::Index row = j1 * d + j2;
      if (j1 == j2) {
        out.same_pair_deviation =
            std::max(out.same_pair_deviation, std::abs(prod(row, row) - out.expected_diagonal));
      } else {
        const Complex both = prod(row, row) + prod(row, j2 * d + j1);
        out.distinct_pair_deviation = std::max(out.distinct_pair_deviation, std::abs(both - out.expected_diagonal));
      }
      for (int j3 = 0; j3 < d; ++j3) {
        for (int j4 = 0; j4 < d; ++j4) {
          const double mag = std::abs(prod(row, j3 * d + j4));
          const bool row_pair = j1 == j2;
          const bool col_pair = j3 == j4;
          if (row_pair && col_pair) {
            if (j1 != j3) out.pair_to_pair_max = std::max(out.pair_to_pair_max, mag);
          } else if (row_pair != col_pair) {
            out.mixed_to_pair_max = std::max(out.mixed_to_pair_max, mag);
          } else {
            const bool same_set = (j1 == j3 && j2 == j4) || (j1 == j4 && j2 == j3);
            if (!same_set) out.mixed_to_mixed_max = std::max(out.mixed_to_mixed_max, mag);
          }
        }
      }
    }
  }

  const FullTensorOracle oracle(d, 2);
  out.route_agreement = (oracle.to_symmetric(prod).matrix() - q).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace cqsr
