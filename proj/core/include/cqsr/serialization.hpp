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

// JSON encodings. Complex numbers are [re, im] pairs; matrices are
// row-major arrays of rows. A state set is
//   {"d": int, "states": [[[re, im], ...], ...], "weights": [float, ...]}.

#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cqsr/css.hpp"
#include "cqsr/symspace.hpp"

namespace cqsr {

nlohmann::json complex_to_json(Complex z);
nlohmann::json vector_to_json(const CVector& v);
nlohmann::json matrix_to_json(const CMatrix& m);

/// Schema violations throw ValidationError.
Complex complex_from_json(const nlohmann::json& j);
CVector vector_from_json(const nlohmann::json& j);
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json state_set_to_json(const WeightedStateSet& set);
WeightedStateSet state_set_from_json(const nlohmann::json& j);

/// Parses JSON text; syntax errors throw ParseError with the byte offset.
nlohmann::json parse_json_text(std::string_view text);

nlohmann::json css_report_to_json(const CssReport& report);

/// Lowercase hex SHA-256 of the canonical (compact) JSON of `set`.
std::string state_set_digest(const WeightedStateSet& set);

}  // namespace cqsr
