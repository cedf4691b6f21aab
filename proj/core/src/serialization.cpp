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

#include "cqsr/serialization.hpp"

#include <array>

#include <openssl/evp.h>

#include "cqsr/errors.hpp"

namespace cqsr {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError("complex number must be a [re, im] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("vector must be an array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  CMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ValidationError("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

json state_set_to_json(const WeightedStateSet& set) {
  json states = json::array();
  for (const auto& s : set.states()) states.push_back(vector_to_json(s.amplitudes()));
  return json{{"d", set.dimension()}, {"states", std::move(states)}, {"weights", set.weights()}};
}

WeightedStateSet state_set_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("state set must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "d" && key != "states" && key != "weights") throw ValidationError("unknown state set field '" + key + "'");
  }
  if (!j.contains("d") || !j["d"].is_number_integer()) throw ValidationError("state set needs integer field 'd'");
  if (!j.contains("states") || !j["states"].is_array()) throw ValidationError("state set needs array field 'states'");
  if (!j.contains("weights") || !j["weights"].is_array()) throw ValidationError("state set needs array field 'weights'");
  const int d = j["d"].get<int>();
  if (d < 1) throw ValidationError("state set dimension must be >= 1");

  std::vector<PureState> states;
  for (const auto& s : j["states"]) {
    CVector v = vector_from_json(s);
    if (v.size() != d) throw ValidationError("state length does not match d");
    states.emplace_back(std::move(v));
  }
  std::vector<double> weights;
  for (const auto& w : j["weights"]) {
    if (!w.is_number()) throw ValidationError("weights must be numbers");
    weights.push_back(w.get<double>());
  }
  return WeightedStateSet(std::move(states), std::move(weights));
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports the 1-based count of bytes read; expose a 0-based offset.
    throw ParseError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
}

json css_report_to_json(const CssReport& report) {
  return json{{"copies", report.copies_tested},
              {"defect", report.defect},
              {"is_css", report.is_css},
              {"tolerance", report.tolerance}};
}

std::string state_set_digest(const WeightedStateSet& set) {
  const std::string canonical = state_set_to_json(set).dump();
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  static constexpr char kHex[] = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xF]);
  }
  return hex;
}

}  // namespace cqsr
