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

#include "cqsr/full_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cqsr/errors.hpp"

namespace cqsr {
namespace {

std::uint64_t checked_power(int d, int M, std::uint64_t cap) {
  if (d < 1 || M < 0) throw ValidationError("invalid tensor dimensions");
  std::uint64_t n = 1;
  for (int i = 0; i < M; ++i) {
    if (n > cap / static_cast<std::uint64_t>(d)) {
      throw SizeLimitError("tensor space " + std::to_string(d) + "^" + std::to_string(M) +
                           " exceeds the cap of " + std::to_string(cap));
    }
    n *= static_cast<std::uint64_t>(d);
  }
  if (n > cap) throw SizeLimitError("tensor space exceeds the cap of " + std::to_string(cap));
  return n;
}

std::vector<int> digits(std::uint64_t index, int d, int M) {
  std::vector<int> out(static_cast<std::size_t>(M));
  for (int pos = M - 1; pos >= 0; --pos) {
    out[static_cast<std::size_t>(pos)] = static_cast<int>(index % static_cast<std::uint64_t>(d));
    index /= static_cast<std::uint64_t>(d);
  }
  return out;
}

std::uint64_t from_digits(const std::vector<int>& ds, int d) {
  std::uint64_t index = 0;
  for (int v : ds) index = index * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(v);
  return index;
}

}  // namespace

FullTensorOracle::FullTensorOracle(int d, int M, std::uint64_t cap)
    : d_(d), copies_(M), tensor_size_(checked_power(d, M, cap)) {
  const SymmetricBasis basis(d, M);
  const auto rows = static_cast<Eigen::Index>(tensor_size_);
  isometry_ = CMatrix::Zero(rows, static_cast<Eigen::Index>(basis.size()));
  for (std::uint64_t t = 0; t < tensor_size_; ++t) {
    const Composition m = occupation(t);
    const auto col = static_cast<Eigen::Index>(basis.index(m));
    isometry_(static_cast<Eigen::Index>(t), col) = 1.0 / std::sqrt(m.multinomial());
  }
}

Composition FullTensorOracle::occupation(std::uint64_t tensor_index) const {
  std::vector<int> occ(static_cast<std::size_t>(d_), 0);
  for (int v : digits(tensor_index, d_, copies_)) ++occ[static_cast<std::size_t>(v)];
  return Composition(std::move(occ));
}

CVector FullTensorOracle::product_state(const PureState& psi) const {
  if (psi.dimension() != d_) throw ValidationError("state dimension mismatch");
  CVector v = CVector::Ones(1);
  for (int i = 0; i < copies_; ++i) {
    CVector next(v.size() * d_);
    for (Eigen::Index a = 0; a < v.size(); ++a) {
      for (int b = 0; b < d_; ++b) next(a * d_ + b) = v(a) * psi.amplitudes()(b);
    }
    v = std::move(next);
  }
  return v;
}

SymmetricOperator FullTensorOracle::to_symmetric(const CMatrix& tensor_operator) const {
  return SymmetricOperator(isometry_.adjoint() * tensor_operator * isometry_, d_, copies_);
}

CMatrix FullTensorOracle::to_tensor(const SymmetricOperator& op) const {
  if (op.dimension() != d_ || op.copies() != copies_) throw ValidationError("operator shape mismatch");
  return isometry_ * op.matrix() * isometry_.adjoint();
}

CMatrix FullTensorOracle::partial_trace_last(const CMatrix& op, int d, int total, int traced) {
  if (traced < 0 || traced > total) throw ValidationError("cannot trace more factors than present");
  Eigen::Index keep_dim = 1;
  for (int i = 0; i < total - traced; ++i) keep_dim *= d;
  Eigen::Index tr_dim = 1;
  for (int i = 0; i < traced; ++i) tr_dim *= d;
  if (op.rows() != keep_dim * tr_dim || op.cols() != op.rows()) {
    throw ValidationError("operator size does not match d^total");
  }
  CMatrix out = CMatrix::Zero(keep_dim, keep_dim);
  for (Eigen::Index a = 0; a < keep_dim; ++a) {
    for (Eigen::Index b = 0; b < keep_dim; ++b) {
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < tr_dim; ++t) acc += op(a * tr_dim + t, b * tr_dim + t);
      out(a, b) = acc;
    }
  }
  return out;
}

CMatrix permutation_symmetrizer(int d, int M, std::uint64_t cap) {
  const std::uint64_t n = checked_power(d, M, cap);
  const auto size = static_cast<Eigen::Index>(n);
  CMatrix sym = CMatrix::Zero(size, size);
  std::vector<int> perm(static_cast<std::size_t>(M));
  std::iota(perm.begin(), perm.end(), 0);
  double count = 0.0;
  do {
    for (std::uint64_t t = 0; t < n; ++t) {
      const std::vector<int> src = digits(t, d, M);
      std::vector<int> dst(src.size());
      for (std::size_t i = 0; i < src.size(); ++i) dst[static_cast<std::size_t>(perm[i])] = src[i];
      sym(static_cast<Eigen::Index>(from_digits(dst, d)), static_cast<Eigen::Index>(t)) += 1.0;
    }
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sym / count;
}

}  // namespace cqsr
