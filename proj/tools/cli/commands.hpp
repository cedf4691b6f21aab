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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cqsr::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kNegative = 1,  // not a CSS / infeasible
  kInputError = 2,
  kSizeLimit = 3,
  kUnsupportedDimension = 4,
};

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "3", "1..4" or "1,2,5" into an ascending list.
std::vector<int> parse_int_list(const std::string& text);

/// Full-tensor cap from CQSR_MAX_TENSOR_DIM, or the library default.
std::uint64_t tensor_cap_from_env();

/// Shortest locale-independent rendering with 17 significant digits.
std::string format_double(double value);

}  // namespace cqsr::cli
