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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqsr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an input value was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A dimension or tensor size exceeded the supported range.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// The requested Hilbert-space dimension has no supported construction.
class UnsupportedDimensionError : public Error {
 public:
  using Error::Error;
};

/// Broadcast-layer failure, e.g. a record refers to a different state set.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `offset()` is the byte position of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace cqsr
