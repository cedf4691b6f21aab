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

#include "cqsr/errors.hpp"
#include "cqsr/mub.hpp"
#include "cqsr/serialization.hpp"

namespace cqsr {
namespace {

using nlohmann::json;

TEST(Serialization, ComplexAndMatrixRoundTrip) {
  CMatrix m(2, 3);
  m << Complex(1, 2), Complex(-0.5, 0), Complex(0, 1e-17), Complex(3, 4), Complex(5, 6), Complex(7, 8);
  EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
  EXPECT_EQ(complex_from_json(complex_to_json(Complex(0.1, -0.3))), Complex(0.1, -0.3));
  EXPECT_THROW(complex_from_json(json::array({1})), ValidationError);
  EXPECT_THROW(matrix_from_json(json::parse("[[[1,0]],[[1,0],[2,0]]]")), ValidationError);
}

TEST(Serialization, StateSetRoundTrip) {
  const WeightedStateSet set = mub_as_css(3);
  const WeightedStateSet back = state_set_from_json(parse_json_text(state_set_to_json(set).dump()));
  ASSERT_EQ(back.size(), set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_EQ(back.states()[i].amplitudes(), set.states()[i].amplitudes());
    EXPECT_EQ(back.weights()[i], set.weights()[i]);
  }
  EXPECT_EQ(state_set_digest(back), state_set_digest(set));
}

TEST(Serialization, StateSetSchema) {
  const json good = json::parse(R"({"d":2,"states":[[[1,0],[0,0]],[[0,0],[1,0]]],"weights":[0.5,0.5]})");
  EXPECT_NO_THROW(state_set_from_json(good));
  json extra = good;
  extra["note"] = "x";
  EXPECT_THROW(state_set_from_json(extra), ValidationError);
  json wrong_len = good;
  wrong_len["d"] = 3;
  EXPECT_THROW(state_set_from_json(wrong_len), ValidationError);
  json bad_weights = good;
  bad_weights["weights"] = json::array({0.9, 0.9});
  EXPECT_THROW(state_set_from_json(bad_weights), ValidationError);
  EXPECT_THROW(state_set_from_json(json::array()), ValidationError);
}

TEST(Serialization, ParseErrorCarriesOffset) {
  try {
    parse_json_text(R"({"d": 2, "states": [)");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_GT(e.offset(), 10u);
  }
}

TEST(Serialization, DigestDistinguishesSets) {
  EXPECT_NE(state_set_digest(mub_as_css(2)), state_set_digest(mub_as_css(3)));
  EXPECT_EQ(state_set_digest(mub_as_css(5)).size(), 64u);
}

TEST(Serialization, CssReportKeys) {
  const json j = css_report_to_json(CssReport{3, 0.25, false, 1e-10});
  EXPECT_EQ(j.at("copies"), 3);
  EXPECT_EQ(j.at("defect"), 0.25);
  EXPECT_EQ(j.at("is_css"), false);
  EXPECT_EQ(j.at("tolerance"), 1e-10);
}

}  // namespace
}  // namespace cqsr
