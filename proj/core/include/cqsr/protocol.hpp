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

// Measure–broadcast–prepare simulation.
//
// The cloud measures M stored copies of |ψ⟩ with a CSS POVM and publishes
// one text line per trial on an in-process broadcast channel. Every user
// decodes each line and prepares |φ_r⟩ locally. No quantum state crosses
// the channel.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "cqsr/css.hpp"
#include "cqsr/estimation.hpp"
#include "cqsr/symspace.hpp"

namespace cqsr {

/// The classical message from the cloud to the users.
struct BroadcastRecord {
  std::string session_id;
  std::uint64_t trial = 0;
  std::uint32_t outcome = 0;  // index r into the state set
  std::string digest;         // state_set_digest of the set in use

  friend bool operator==(const BroadcastRecord&, const BroadcastRecord&) = default;
};

/// One compact JSON object, keys digest, r, session_id, trial (no newline).
std::string serialize_record(const BroadcastRecord& record);

/// Strict parse: exactly the four fields with the right types. Syntax and
/// schema errors throw ParseError carrying a byte offset.
BroadcastRecord parse_record(std::string_view line);

struct RecordExpectation {
  std::string digest;
  std::size_t outcomes = 0;  // R
};

/// parse_record plus checks against a known set: outcome ≥ R throws
/// ValidationError, a foreign digest throws ProtocolError.
BroadcastRecord parse_record(std::string_view line, const RecordExpectation& expected);

/// Append-only in-process broadcast log. Every subscriber sees every line in
/// publication order.
class BroadcastChannel {
 public:
  void publish(std::string line) { lines_.push_back(std::move(line)); }
  std::size_t size() const { return lines_.size(); }
  const std::string& line(std::size_t i) const { return lines_.at(i); }
  /// Drops delivered lines; subscriber cursors are reset by the caller.
  void clear() { lines_.clear(); }

 private:
  std::vector<std::string> lines_;
};

struct RecordStamp {
  std::string session_id;
  std::string digest;
};

/// Draws `trials` outcomes for |ψ⟩^{⊗M}. Trial i uses counter i of a stream
/// keyed by `seed`, so any trial range can be regenerated independently.
std::vector<BroadcastRecord> cloud_measure(const PureState& input, int M, const Povm& povm, std::uint64_t trials,
                                           std::uint64_t seed, const RecordStamp& stamp,
                                           std::uint64_t first_trial = 0);

/// What a user builds on receiving a record: |φ_r⟩^{⊗copies}.
struct ProductStateDescriptor {
  std::size_t state_index = 0;
  int copies = 0;
  std::reference_wrapper<const PureState> state;

  friend bool operator==(const ProductStateDescriptor& a, const ProductStateDescriptor& b) {
    return a.state_index == b.state_index && a.copies == b.copies;
  }
};

/// Throws ProtocolError if the record's digest is not `set_digest`.
ProductStateDescriptor user_prepare(const BroadcastRecord& record, const WeightedStateSet& set,
                                    std::string_view set_digest, int copies_per_user);
ProductStateDescriptor user_prepare(const BroadcastRecord& record, const WeightedStateSet& set,
                                    int copies_per_user);

/// A receiving party: decodes lines, prepares states, tallies outcomes.
class UserAgent {
 public:
  UserAgent(const WeightedStateSet& set, std::string digest, int copies_per_user);

  ProductStateDescriptor receive(std::string_view line);
  const std::vector<std::uint64_t>& histogram() const { return histogram_; }

 private:
  const WeightedStateSet* set_;
  RecordExpectation expected_;
  int copies_;
  std::vector<std::uint64_t> histogram_;
};

struct MubStateSet {};
struct FileStateSet {
  std::filesystem::path path;
};
using StateSetSource = std::variant<MubStateSet, FileStateSet, WeightedStateSet>;

struct SessionConfig {
  int d = 2;
  int M = 1;  // copies measured per trial
  int N = 1;  // users, independent of M
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::string session_id = "session";
  StateSetSource state_set = MubStateSet{};
  std::optional<CVector> input_amplitudes;  // nullopt: Haar-random input
  int workers = 1;

  /// Throws ValidationError on any out-of-range field.
  void validate() const;
};

/// Reads a SessionConfig object; relative file references resolve against
/// `base_dir`. Unknown keys and bad types throw ValidationError.
SessionConfig session_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json session_config_to_json(const SessionConfig& cfg);

WeightedStateSet resolve_state_set(const SessionConfig& cfg);

struct SessionReport {
  double exact_fidelity = 0.0;      // Σ_r p_r |⟨φ_r|ψ⟩|²
  double empirical_fidelity = 0.0;  // Σ_r (n_r / T) |⟨φ_r|ψ⟩|²
  double std_error = 0.0;
  double gap = 0.0;  // empirical - exact
  double optimal_fidelity = 0.0;  // (M+1)/(M+d)
  std::vector<std::uint64_t> histogram;
  std::uint64_t trials = 0;
  int users = 0;
  bool users_consistent = true;  // every user tallied the same histogram
  CVector input;
  std::string digest;
  nlohmann::json config;
};

SessionReport run_session(const SessionConfig& cfg);
nlohmann::json session_report_to_json(const SessionReport& report);

}  // namespace cqsr
