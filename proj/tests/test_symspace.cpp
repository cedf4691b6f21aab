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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include <unsupported/Eigen/KroneckerProduct>

#include "cqsr/errors.hpp"
#include "cqsr/full_tensor.hpp"
#include "cqsr/symspace.hpp"
#include "helpers.hpp"

namespace cqsr {
namespace {

using testing::max_abs;
using testing::random_symmetric_density;

TEST(DimSym, Examples) {
  EXPECT_EQ(dim_sym(2, 2), 3u);
  EXPECT_EQ(dim_sym(1, 7), 1u);
  EXPECT_EQ(dim_sym(3, 2), 6u);
  EXPECT_EQ(dim_sym(4, 6), 84u);
  EXPECT_EQ(dim_sym(5, 0), 1u);
}

TEST(DimSym, LargeExactAndOverflow) {
  EXPECT_EQ(dim_sym(2, 1000000), 1000001u);
  EXPECT_EQ(dim_sym(31, 31), 232714176627630544ULL);  // C(61, 31)
  EXPECT_THROW(dim_sym(40, 40), SizeLimitError);
}

TEST(DimSym, RejectsBadArguments) {
  EXPECT_THROW(dim_sym(0, 2), ValidationError);
  EXPECT_THROW(dim_sym(2, -1), ValidationError);
}

TEST(Compositions, Examples) {
  const auto c22 = enumerate_compositions(2, 2);
  ASSERT_EQ(c22.size(), 3u);
  EXPECT_EQ(c22[0], Composition({2, 0}));
  EXPECT_EQ(c22[1], Composition({1, 1}));
  EXPECT_EQ(c22[2], Composition({0, 2}));

  const auto c31 = enumerate_compositions(3, 1);
  ASSERT_EQ(c31.size(), 3u);
  EXPECT_EQ(c31[0], Composition({1, 0, 0}));
  EXPECT_EQ(c31[1], Composition({0, 1, 0}));
  EXPECT_EQ(c31[2], Composition({0, 0, 1}));

  const auto c20 = enumerate_compositions(2, 0);
  ASSERT_EQ(c20.size(), 1u);
  EXPECT_EQ(c20[0], Composition({0, 0}));
}

TEST(Compositions, CountAndStrictDescendingOrder) {
  for (int d = 1; d <= 4; ++d) {
    for (int M = 0; M <= 5; ++M) {
      const auto all = enumerate_compositions(d, M);
      ASSERT_EQ(all.size(), dim_sym(d, M));
      for (std::size_t i = 1; i < all.size(); ++i) EXPECT_GT(all[i - 1], all[i]);
      for (const auto& c : all) EXPECT_EQ(c.copies(), M);
    }
  }
}

TEST(Compositions, Arithmetic) {
  const Composition a({2, 1, 0});
  EXPECT_EQ(a.copies(), 3);
  EXPECT_DOUBLE_EQ(a.multinomial(), 3.0);
  EXPECT_EQ(a + Composition::unit(3, 2), Composition({2, 1, 1}));
  EXPECT_EQ(a - Composition::unit(3, 0), Composition({1, 1, 0}));
  EXPECT_TRUE(a.contains(Composition({1, 1, 0})));
  EXPECT_FALSE(a.contains(Composition({0, 0, 1})));
  EXPECT_THROW(Composition({1, -1}), ValidationError);
  EXPECT_THROW(Composition(std::vector<int>{}), ValidationError);
}

TEST(SymmetricBasis, IndexLookup) {
  const SymmetricBasis basis(3, 2);
  for (std::size_t i = 0; i < basis.size(); ++i) EXPECT_EQ(basis.index(basis[i]), i);
  EXPECT_FALSE(basis.find(Composition({1, 1, 1})).has_value());
  EXPECT_THROW(basis.index(Composition({3, 0, 0})), ValidationError);
}

TEST(PureState, NormValidation) {
  EXPECT_NO_THROW(PureState(CVector::Unit(3, 1)));
  EXPECT_THROW(PureState(CVector::Constant(2, Complex(1.0, 0.0))), ValidationError);
  CVector v(2);
  v << Complex(3, 0), Complex(0, 4);
  const PureState s = PureState::normalized(v);
  EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
  EXPECT_THROW(PureState::normalized(CVector::Zero(2)), ValidationError);
}

TEST(Embedding, Examples) {
  const CVector e0 = embed_product_state(PureState::basis(2, 0), 2);
  ASSERT_EQ(e0.size(), 3);
  EXPECT_NEAR(std::abs(e0(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e0(1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e0(2)), 0.0, 1e-15);

  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const CVector ep = embed_product_state(PureState(plus), 2);
  EXPECT_NEAR(ep(0).real(), 0.5, 1e-15);
  EXPECT_NEAR(ep(1).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ep(2).real(), 0.5, 1e-15);

  const CVector a = embed_product_state(PureState::basis(2, 0), 3);
  const CVector b = embed_product_state(PureState::basis(2, 1), 3);
  EXPECT_NEAR(std::abs(a.dot(b)), 0.0, 1e-15);
}

TEST(Embedding, InnerProductIsPowerOfOverlap) {
  Rng rng(11);
  for (int d = 2; d <= 4; ++d) {
    for (int M = 1; M <= 5; ++M) {
      const PureState phi = haar_random_state(d, rng);
      const PureState psi = haar_random_state(d, rng);
      const CVector a = embed_product_state(phi, M);
      const CVector b = embed_product_state(psi, M);
      EXPECT_NEAR(a.norm(), 1.0, 1e-10);
      EXPECT_NEAR(std::abs(a.dot(b) - std::pow(phi.inner(psi), M)), 0.0, 1e-10);
    }
  }
}

TEST(Embedding, MatchesFullTensorOracle) {
  Rng rng(5);
  for (int d = 2; d <= 4; ++d) {
    for (int M = 1; M <= 4; ++M) {
      const FullTensorOracle oracle(d, M);
      const SymmetricBasis basis(d, M);
      for (int t = 0; t < 100; ++t) {
        const PureState psi = haar_random_state(d, rng);
        const CVector sym = embed_product_state(psi, basis);
        const CVector tensor = oracle.product_state(psi);
        ASSERT_LT((oracle.to_symmetric(tensor) - sym).norm(), 1e-10) << "d=" << d << " M=" << M;
        ASSERT_LT((oracle.to_tensor(sym) - tensor).norm(), 1e-10);
      }
    }
  }
}

TEST(Split, Examples) {
  const auto s20 = split_symmetric_basis(Composition({2, 0}), 1);
  ASSERT_EQ(s20.size(), 1u);
  EXPECT_EQ(s20[0].head, Composition({1, 0}));
  EXPECT_EQ(s20[0].tail, Composition({1, 0}));
  EXPECT_NEAR(s20[0].weight, 1.0, 1e-15);

  const auto s11 = split_symmetric_basis(Composition({1, 1}), 1);
  ASSERT_EQ(s11.size(), 2u);
  for (const auto& t : s11) EXPECT_NEAR(t.weight, 1.0 / std::sqrt(2.0), 1e-15);

  // m = (2,1): tail (1,0) carries weight sqrt(2/3), tail (0,1) sqrt(1/3).
  const auto s21 = split_symmetric_basis(Composition({2, 1}), 1);
  ASSERT_EQ(s21.size(), 2u);
  for (const auto& t : s21) {
    if (t.tail == Composition({1, 0})) {
      EXPECT_NEAR(t.weight, std::sqrt(2.0 / 3.0), 1e-15);
    } else {
      EXPECT_EQ(t.tail, Composition({0, 1}));
      EXPECT_NEAR(t.weight, std::sqrt(1.0 / 3.0), 1e-15);
    }
  }
}

TEST(Split, RejectsOutOfRange) {
  EXPECT_THROW(split_symmetric_basis(Composition({1, 1}), 3), ValidationError);
  EXPECT_THROW(split_symmetric_basis(Composition({1, 1}), -1), ValidationError);
}

TEST(Split, ExhaustiveWeightsNormalized) {
  for (int d = 1; d <= 4; ++d) {
    for (int M = 0; M <= 5; ++M) {
      for (const auto& m : enumerate_compositions(d, M)) {
        for (int L = 0; L <= M; ++L) {
          double sum = 0.0;
          for (const auto& t : split_symmetric_basis(m, L)) {
            EXPECT_GE(t.weight, 0.0);
            EXPECT_EQ(t.head + t.tail, m);
            EXPECT_EQ(t.tail.copies(), L);
            sum += t.weight * t.weight;
          }
          EXPECT_NEAR(sum, 1.0, 1e-12);
        }
      }
    }
  }
}

// |m⟩ = Σ_k w_k |m-k⟩|k⟩ as tensors.
TEST(Split, MatchesFullTensor) {
  for (int d = 2; d <= 3; ++d) {
    for (int M = 1; M <= 4; ++M) {
      const FullTensorOracle whole(d, M);
      const SymmetricBasis basis(d, M);
      for (int L = 1; L < M; ++L) {
        const FullTensorOracle head(d, M - L);
        const FullTensorOracle tail(d, L);
        const SymmetricBasis hb(d, M - L);
        const SymmetricBasis tb(d, L);
        for (std::size_t i = 0; i < basis.size(); ++i) {
          CVector expect = whole.isometry().col(static_cast<Eigen::Index>(i));
          CVector built = CVector::Zero(expect.size());
          for (const auto& t : split_symmetric_basis(basis[i], L)) {
            const CVector h = head.isometry().col(static_cast<Eigen::Index>(hb.index(t.head)));
            const CVector k = tail.isometry().col(static_cast<Eigen::Index>(tb.index(t.tail)));
            built += t.weight * Eigen::kroneckerProduct(h, k).eval();
          }
          ASSERT_LT((built - expect).norm(), 1e-12);
        }
      }
    }
  }
}

TEST(PartialTrace, PureProductReducesToPure) {
  Rng rng(3);
  for (int M = 1; M <= 4; ++M) {
    const PureState psi = haar_random_state(3, rng);
    const SymmetricOperator rho = SymmetricOperator::outer(embed_product_state(psi, M), 3, M);
    EXPECT_LT(max_abs(partial_trace_to_single(rho).matrix() - psi.projector()), 1e-10);
    EXPECT_LT(max_abs(single_copy_closed_form(rho).matrix() - psi.projector()), 1e-10);
  }
}

TEST(PartialTrace, MaximallyMixed) {
  const SymmetricOperator id = haar_moment(2, 2);
  EXPECT_LT(max_abs(partial_trace_to_single(id).matrix() - CMatrix::Identity(2, 2) / 2.0), 1e-12);
}

TEST(PartialTrace, MatchesFullTensor) {
  Rng rng(17);
  for (int d = 2; d <= 3; ++d) {
    for (int M = 1; M <= 3; ++M) {
      const FullTensorOracle oracle(d, M);
      for (int t = 0; t < 10; ++t) {
        const SymmetricOperator rho = random_symmetric_density(d, M, rng);
        const CMatrix brute = FullTensorOracle::partial_trace_last(oracle.to_tensor(rho), d, M, M - 1);
        EXPECT_LT(max_abs(partial_trace_to_single(rho).matrix() - brute), 1e-10);
        EXPECT_LT(max_abs(single_copy_closed_form(rho).matrix() - brute), 1e-10);
        for (int keep = 1; keep <= M; ++keep) {
          const FullTensorOracle kept(d, keep);
          const CMatrix reduced = FullTensorOracle::partial_trace_last(oracle.to_tensor(rho), d, M, M - keep);
          EXPECT_LT(max_abs(kept.to_tensor(partial_trace_copies(rho, keep)) - reduced), 1e-10);
        }
      }
    }
  }
}

TEST(PartialTrace, Associative) {
  Rng rng(23);
  for (int d = 2; d <= 3; ++d) {
    const int M = 5;
    const SymmetricOperator rho = random_symmetric_density(d, M, rng);
    for (int keep = 1; keep < M; ++keep) {
      SymmetricOperator step = rho;
      for (int k = M - 1; k >= keep; --k) step = partial_trace_copies(step, k);
      EXPECT_LT(max_abs(step.matrix() - partial_trace_copies(rho, keep).matrix()), 1e-10);
    }
  }
}

TEST(PartialTrace, RejectsNonDensity) {
  SymmetricOperator bad = SymmetricOperator::identity(2, 2);
  EXPECT_THROW(partial_trace_to_single(bad), ValidationError);
  EXPECT_THROW(partial_trace_copies(haar_moment(2, 2), 3), ValidationError);
}

TEST(HaarMoment, ExactDiagonal) {
  EXPECT_LT(max_abs(haar_moment(2, 1).matrix() - CMatrix::Identity(2, 2) / 2.0), 1e-15);
  EXPECT_LT(max_abs(haar_moment(2, 2).matrix() - CMatrix::Identity(3, 3) / 3.0), 1e-15);
}

TEST(HaarMoment, MonteCarloAgreement) {
  Rng rng(101);
  const int n = 100000;
  const SymmetricBasis basis(2, 2);
  CMatrix acc = CMatrix::Zero(3, 3);
  double p0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const PureState psi = haar_random_state(2, rng);
    const CVector v = embed_product_state(psi, basis);
    acc += v * v.adjoint();
    p0 += std::norm(psi[0]);
  }
  acc /= static_cast<double>(n);
  EXPECT_LT(max_abs(acc - haar_moment(2, 2).matrix()), 5.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(p0 / n, 0.5, 0.005);
}

TEST(HaarRandomState, DeterministicAndNormalized) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 10; ++i) {
    const PureState x = haar_random_state(3, a);
    const PureState y = haar_random_state(3, b);
    EXPECT_NEAR(x.amplitudes().norm(), 1.0, 1e-12);
    EXPECT_EQ(x.amplitudes(), y.amplitudes());
  }
}

TEST(HaarRandomUnitary, IsUnitary) {
  Rng rng(9);
  const CMatrix U = haar_random_unitary(4, rng);
  EXPECT_LT(max_abs(U.adjoint() * U - CMatrix::Identity(4, 4)), 1e-12);
}

TEST(DensityMatrix, Validation) {
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(3));
  EXPECT_THROW(DensityMatrix(CMatrix::Identity(2, 2)), ValidationError);
  CMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix{neg}, ValidationError);
  CMatrix nonherm(2, 2);
  nonherm << 0.5, 0.2, 0.0, 0.5;
  EXPECT_THROW(DensityMatrix{nonherm}, ValidationError);
}

TEST(ContractLastCopy, MatchesFullTensor) {
  Rng rng(61);
  for (int d = 2; d <= 3; ++d) {
    for (int M = 1; M <= 2; ++M) {
      const SymmetricOperator P(testing::random_hermitian(static_cast<Eigen::Index>(dim_sym(d, M + 1)), rng), d,
                                M + 1);
      const CMatrix B = testing::random_hermitian(d, rng);
      const FullTensorOracle big(d, M + 1);
      const FullTensorOracle small(d, M);
      const CMatrix full = big.to_tensor(P);
      // Tr_last[(I ⊗ B) P] on the tensor space.
      const CMatrix IB = Eigen::kroneckerProduct(CMatrix::Identity(static_cast<Eigen::Index>(small.tensor_size()),
                                                                    static_cast<Eigen::Index>(small.tensor_size())),
                                                 B)
                             .eval();
      const CMatrix expect = FullTensorOracle::partial_trace_last(IB * full, d, M + 1, 1);
      const SymmetricOperator G = contract_last_copy(P, B);
      EXPECT_LT(max_abs(small.to_tensor(G) - expect), 1e-10);
    }
  }
}

}  // namespace
}  // namespace cqsr
