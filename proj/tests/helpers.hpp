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

#pragma once

#include <random>

#include "cqsr/symspace.hpp"

namespace cqsr::testing {

// Random full-rank density operator on the M-copy symmetric subspace.
inline SymmetricOperator random_symmetric_density(int d, int M, Rng& rng) {
  const auto D = static_cast<Eigen::Index>(dim_sym(d, M));
  std::normal_distribution<double> g;
  CMatrix G(D, D);
  for (Eigen::Index i = 0; i < D; ++i) {
    for (Eigen::Index j = 0; j < D; ++j) G(i, j) = Complex(g(rng), g(rng));
  }
  CMatrix rho = G * G.adjoint();
  rho /= rho.trace().real();
  return SymmetricOperator(rho, d, M);
}

inline CMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> g;
  CMatrix G(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) G(i, j) = Complex(g(rng), g(rng));
  }
  return (G + G.adjoint()) / 2.0;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace cqsr::testing
