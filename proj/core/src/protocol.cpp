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

#include "cqsr/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <fstream>
#include <sstream>
#include <thread>

#include "cqsr/errors.hpp"
#include "cqsr/mub.hpp"
#include "cqsr/serialization.hpp"
#include "cqsr/stats.hpp"

namespace cqsr {

using nlohmann::json;

namespace {

constexpr std::uint64_t kInputStreamTag = 1;
constexpr std::uint64_t kTrialStreamTag = 2;
constexpr std::uint64_t kBatchSize = 4096;

// Characters that nlohmann writes verbatim inside a string.
bool plain_string(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x20 && u < 0x7f && c != '"' && c != '\\';
  });
}

template <typename T>
void append_number(std::string& out, T value) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);
}

// Matches the exact compact layout produced by serialize_record. Returns
// nullopt for anything else, including valid JSON in another layout.
class CanonicalScanner {
 public:
  explicit CanonicalScanner(std::string_view s) : s_(s) {}

  std::optional<BroadcastRecord> scan() {
    BroadcastRecord r;
    std::uint64_t outcome = 0;
    if (!literal(R"({"digest":")") || !plain(r.digest) || !literal(R"(","r":)") || !number(outcome) ||
        !literal(R"(,"session_id":")") || !plain(r.session_id) || !literal(R"(","trial":)") || !number(r.trial) ||
        !literal("}") || pos_ != s_.size()) {
      return std::nullopt;
    }
    if (outcome > std::numeric_limits<std::uint32_t>::max()) return std::nullopt;
    r.outcome = static_cast<std::uint32_t>(outcome);
    return r;
  }

 private:
  bool literal(std::string_view lit) {
    if (s_.substr(pos_, lit.size()) != lit) return false;
    pos_ += lit.size();
    return true;
  }
  bool plain(std::string& out) {
    const std::size_t end = s_.find('"', pos_);
    if (end == std::string_view::npos) return false;
    const std::string_view body = s_.substr(pos_, end - pos_);
    if (!plain_string(body)) return false;
    out.assign(body);
    pos_ = end;
    return true;
  }
  bool number(std::uint64_t& out) {
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    if (first == last || *first < '0' || *first > '9') return false;
    if (*first == '0' && first + 1 != last && first[1] >= '0' && first[1] <= '9') return false;
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc()) return false;
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return true;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::size_t key_offset(std::string_view line, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const std::size_t at = line.find(quoted);
  return at == std::string_view::npos ? 0 : at;
}

BroadcastRecord parse_record_slow(std::string_view line) {
  const json j = parse_json_text(line);
  if (!j.is_object()) throw ParseError("broadcast record must be a JSON object", 0);
  for (const auto& [key, value] : j.items()) {
    if (key != "session_id" && key != "trial" && key != "r" && key != "digest") {
      throw ParseError("unknown broadcast record field '" + key + "'", key_offset(line, key));
    }
  }
  auto require = [&](const char* key, bool ok) {
    if (!j.contains(key)) throw ParseError(std::string("broadcast record is missing '") + key + "'", line.size());
    if (!ok) throw ParseError(std::string("broadcast record field '") + key + "' has the wrong type", key_offset(line, key));
  };
  require("session_id", j.contains("session_id") && j["session_id"].is_string());
  require("digest", j.contains("digest") && j["digest"].is_string());
  require("trial", j.contains("trial") && j["trial"].is_number_unsigned());
  require("r", j.contains("r") && j["r"].is_number_unsigned() &&
                   j["r"].get<std::uint64_t>() <= std::numeric_limits<std::uint32_t>::max());
  BroadcastRecord r;
  r.session_id = j["session_id"].get<std::string>();
  r.digest = j["digest"].get<std::string>();
  r.trial = j["trial"].get<std::uint64_t>();
  r.outcome = j["r"].get<std::uint32_t>();
  return r;
}

std::vector<double> normalized_probabilities(const Povm& povm, const PureState& psi) {
  std::vector<double> p = povm.outcome_probabilities(psi);
  double total = 0.0;
  for (double& x : p) {
    if (x < -kAlgebraicTolerance) throw ValidationError("POVM produced a negative probability");
    x = std::max(0.0, x);
    total += x;
  }
  if (!(total > 0.0)) throw ValidationError("POVM assigns zero total probability");
  for (double& x : p) x /= total;
  return p;
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  cdf.back() = 1.0;
  return cdf;
}

std::uint32_t sample_outcome(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

}  // namespace

// --- Wire format ------------------------------------------------------------

std::string serialize_record(const BroadcastRecord& record) {
  if (!plain_string(record.session_id) || !plain_string(record.digest)) {
    return json{{"session_id", record.session_id},
                {"trial", record.trial},
                {"r", record.outcome},
                {"digest", record.digest}}
        .dump();
  }
  std::string out;
  out.reserve(48 + record.digest.size() + record.session_id.size());
  out += R"({"digest":")";
  out += record.digest;
  out += R"(","r":)";
  append_number(out, record.outcome);
  out += R"(,"session_id":")";
  out += record.session_id;
  out += R"(","trial":)";
  append_number(out, record.trial);
  out += '}';
  return out;
}

BroadcastRecord parse_record(std::string_view line) {
  if (auto fast = CanonicalScanner(line).scan()) return *std::move(fast);
  return parse_record_slow(line);
}

BroadcastRecord parse_record(std::string_view line, const RecordExpectation& expected) {
  BroadcastRecord r = parse_record(line);
  if (r.digest != expected.digest) {
    throw ProtocolError("broadcast record refers to state set " + r.digest + ", expected " + expected.digest);
  }
  if (r.outcome >= expected.outcomes) {
    throw ValidationError("broadcast outcome " + std::to_string(r.outcome) + " is out of range for a set of " +
                          std::to_string(expected.outcomes) + " states");
  }
  return r;
}

// --- Cloud and users --------------------------------------------------------

std::vector<BroadcastRecord> cloud_measure(const PureState& input, int M, const Povm& povm, std::uint64_t trials,
                                           std::uint64_t seed, const RecordStamp& stamp, std::uint64_t first_trial) {
  if (M != povm.copies()) throw ValidationError("copy count does not match the POVM");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (povm.completeness_error() > kPovmCompletenessTolerance) throw ValidationError("POVM is incomplete");
  const std::vector<double> cdf = cumulative(normalized_probabilities(povm, input));
  const CounterStream stream(CounterStream(seed).derive(kTrialStreamTag));
  std::vector<BroadcastRecord> out;
  out.reserve(trials);
  for (std::uint64_t t = first_trial; t < first_trial + trials; ++t) {
    out.push_back(BroadcastRecord{stamp.session_id, t, sample_outcome(cdf, stream.uniform(t)), stamp.digest});
  }
  return out;
}

ProductStateDescriptor user_prepare(const BroadcastRecord& record, const WeightedStateSet& set,
                                    std::string_view set_digest, int copies_per_user) {
  if (record.digest != set_digest) {
    throw ProtocolError("record digest " + record.digest + " does not match the local state set");
  }
  if (record.outcome >= set.size()) throw ValidationError("broadcast outcome out of range");
  if (copies_per_user < 1) throw ValidationError("copies per user must be >= 1");
  return ProductStateDescriptor{record.outcome, copies_per_user, std::cref(set.states()[record.outcome])};
}

ProductStateDescriptor user_prepare(const BroadcastRecord& record, const WeightedStateSet& set, int copies_per_user) {
  return user_prepare(record, set, state_set_digest(set), copies_per_user);
}

UserAgent::UserAgent(const WeightedStateSet& set, std::string digest, int copies_per_user)
    : set_(&set), expected_{std::move(digest), set.size()}, copies_(copies_per_user), histogram_(set.size(), 0) {}

ProductStateDescriptor UserAgent::receive(std::string_view line) {
  const BroadcastRecord record = parse_record(line, expected_);
  ProductStateDescriptor prepared = user_prepare(record, *set_, expected_.digest, copies_);
  ++histogram_[prepared.state_index];
  return prepared;
}

// --- Session configuration --------------------------------------------------

void SessionConfig::validate() const {
  if (d < 2) throw ValidationError("d must be >= 2");
  if (M < 1) throw ValidationError("M must be >= 1");
  if (N < 1) throw ValidationError("N must be >= 1");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (workers < 1) throw ValidationError("workers must be >= 1");
  if (session_id.empty()) throw ValidationError("session_id must be nonempty");
  if (input_amplitudes && input_amplitudes->size() != d) throw ValidationError("input state length does not match d");
  if (const auto* set = std::get_if<WeightedStateSet>(&state_set); set && set->dimension() != d) {
    throw ValidationError("state set dimension does not match d");
  }
}

SessionConfig session_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ValidationError("session config must be a JSON object");
  static const std::vector<std::string> kKeys = {"d",          "M",         "N",     "trials", "master_seed",
                                                 "session_id", "state_set", "input", "workers"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ValidationError("unknown session config field '" + key + "'");
    }
  }
  auto integer = [&](const char* key, auto& out, bool required) {
    if (!j.contains(key)) {
      if (required) throw ValidationError(std::string("session config needs '") + key + "'");
      return;
    }
    if (!j[key].is_number_integer()) throw ValidationError(std::string("'") + key + "' must be an integer");
    if (j[key].get<std::int64_t>() < 0) throw ValidationError(std::string("'") + key + "' must be nonnegative");
    out = j[key].get<std::remove_reference_t<decltype(out)>>();
  };
  SessionConfig cfg;
  integer("d", cfg.d, true);
  integer("M", cfg.M, true);
  integer("N", cfg.N, true);
  integer("trials", cfg.trials, true);
  integer("master_seed", cfg.master_seed, false);
  integer("workers", cfg.workers, false);
  if (j.contains("session_id")) {
    if (!j["session_id"].is_string()) throw ValidationError("'session_id' must be a string");
    cfg.session_id = j["session_id"].get<std::string>();
  }
  if (j.contains("state_set")) {
    const json& s = j["state_set"];
    if (s.is_string()) {
      const std::string ref = s.get<std::string>();
      if (ref == "mub") {
        cfg.state_set = MubStateSet{};
      } else {
        std::filesystem::path p(ref);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        cfg.state_set = FileStateSet{p};
      }
    } else if (s.is_object()) {
      cfg.state_set = state_set_from_json(s);
    } else {
      throw ValidationError("'state_set' must be \"mub\", a file path, or an inline state set");
    }
  }
  if (j.contains("input")) {
    const json& in = j["input"];
    if (in.is_string()) {
      if (in.get<std::string>() != "haar") throw ValidationError("'input' must be \"haar\" or an amplitude list");
    } else {
      cfg.input_amplitudes = vector_from_json(in);
    }
  }
  cfg.validate();
  return cfg;
}

json session_config_to_json(const SessionConfig& cfg) {
  json j{{"d", cfg.d},
         {"M", cfg.M},
         {"N", cfg.N},
         {"trials", cfg.trials},
         {"master_seed", cfg.master_seed},
         {"session_id", cfg.session_id},
         {"workers", cfg.workers}};
  std::visit(
      [&](const auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, MubStateSet>) {
          j["state_set"] = "mub";
        } else if constexpr (std::is_same_v<T, FileStateSet>) {
          j["state_set"] = src.path.string();
        } else {
          j["state_set"] = state_set_to_json(src);
        }
      },
      cfg.state_set);
  j["input"] = cfg.input_amplitudes ? vector_to_json(*cfg.input_amplitudes) : json("haar");
  return j;
}

WeightedStateSet resolve_state_set(const SessionConfig& cfg) {
  return std::visit(
      [&](const auto& src) -> WeightedStateSet {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, MubStateSet>) {
          return mub_as_css(cfg.d);
        } else if constexpr (std::is_same_v<T, FileStateSet>) {
          std::ifstream in(src.path);
          if (!in) throw ValidationError("cannot open state set file " + src.path.string());
          std::stringstream buf;
          buf << in.rdbuf();
          return state_set_from_json(parse_json_text(buf.str()));
        } else {
          return src;
        }
      },
      cfg.state_set);
}

// --- Session ----------------------------------------------------------------

namespace {

struct PartitionTally {
  std::vector<std::uint64_t> histogram;
  bool consistent = true;
};

// Cloud and N users over trials [first, first + count), exchanging lines
// through a broadcast channel in batches.
PartitionTally run_partition(const SessionConfig& cfg, const WeightedStateSet& set, const std::string& digest,
                             const std::vector<double>& cdf, std::uint64_t first, std::uint64_t count) {
  const CounterStream stream(CounterStream(cfg.master_seed).derive(kTrialStreamTag));
  std::vector<UserAgent> users;
  users.reserve(static_cast<std::size_t>(cfg.N));
  for (int u = 0; u < cfg.N; ++u) users.emplace_back(set, digest, 1);

  BroadcastChannel channel;
  BroadcastRecord record{cfg.session_id, 0, 0, digest};
  for (std::uint64_t begin = first; begin < first + count; begin += kBatchSize) {
    const std::uint64_t end = std::min(first + count, begin + kBatchSize);
    channel.clear();
    for (std::uint64_t t = begin; t < end; ++t) {
      record.trial = t;
      record.outcome = sample_outcome(cdf, stream.uniform(t));
      channel.publish(serialize_record(record));
    }
    for (UserAgent& user : users) {
      for (std::size_t i = 0; i < channel.size(); ++i) user.receive(channel.line(i));
    }
  }

  PartitionTally tally{users.front().histogram(), true};
  for (const UserAgent& user : users) tally.consistent = tally.consistent && user.histogram() == tally.histogram;
  return tally;
}

}  // namespace

SessionReport run_session(const SessionConfig& cfg) {
  cfg.validate();
  const WeightedStateSet set = resolve_state_set(cfg);
  if (set.dimension() != cfg.d) throw ValidationError("state set dimension does not match d");
  const Povm povm = povm_from_css(set, cfg.M);

  const CounterStream master(cfg.master_seed);
  PureState input = [&] {
    if (cfg.input_amplitudes) return PureState(*cfg.input_amplitudes);
    Rng rng(master.derive(kInputStreamTag));
    return haar_random_state(cfg.d, rng);
  }();

  const std::vector<double> probabilities = normalized_probabilities(povm, input);
  std::vector<double> overlaps(set.size());
  double exact = 0.0;
  for (std::size_t r = 0; r < set.size(); ++r) {
    overlaps[r] = std::norm(set.states()[r].inner(input));
    exact += probabilities[r] * overlaps[r];
  }
  const std::vector<double> cdf = cumulative(probabilities);
  const std::string digest = state_set_digest(set);

  const auto parts = std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg.workers), cfg.trials);
  std::vector<PartitionTally> tallies(parts);
  auto range_first = [&](std::uint64_t p) { return p * (cfg.trials / parts) + std::min(p, cfg.trials % parts); };
  auto work = [&](std::uint64_t p) {
    const std::uint64_t first = range_first(p);
    tallies[p] = run_partition(cfg, set, digest, cdf, first, range_first(p + 1) - first);
  };
  if (parts == 1) {
    work(0);
  } else {
    std::vector<std::jthread> workers;
    for (std::uint64_t p = 0; p < parts; ++p) workers.emplace_back(work, p);
  }

  SessionReport report;
  report.histogram.assign(set.size(), 0);
  for (const PartitionTally& t : tallies) {
    report.users_consistent = report.users_consistent && t.consistent;
    for (std::size_t r = 0; r < set.size(); ++r) report.histogram[r] += t.histogram[r];
  }

  const double T = static_cast<double>(cfg.trials);
  double mean = 0.0;
  for (std::size_t r = 0; r < set.size(); ++r) mean += static_cast<double>(report.histogram[r]) * overlaps[r];
  mean /= T;
  double ss = 0.0;
  for (std::size_t r = 0; r < set.size(); ++r) {
    const double dev = overlaps[r] - mean;
    ss += static_cast<double>(report.histogram[r]) * dev * dev;
  }
  const double variance = cfg.trials > 1 ? ss / (T - 1.0) : 0.0;

  report.exact_fidelity = exact;
  report.empirical_fidelity = mean;
  report.std_error = std::sqrt(variance / T);
  report.gap = mean - exact;
  report.optimal_fidelity = optimal_mean_fidelity(cfg.d, cfg.M);
  report.trials = cfg.trials;
  report.users = cfg.N;
  report.input = input.amplitudes();
  report.digest = digest;
  report.config = session_config_to_json(cfg);
  return report;
}

json session_report_to_json(const SessionReport& report) {
  return json{{"exact_fidelity", report.exact_fidelity},
              {"empirical_fidelity", report.empirical_fidelity},
              {"stderr", report.std_error},
              {"gap", report.gap},
              {"optimal_fidelity", report.optimal_fidelity},
              {"histogram", report.histogram},
              {"trials", report.trials},
              {"users", report.users},
              {"users_consistent", report.users_consistent},
              {"input", vector_to_json(report.input)},
              {"digest", report.digest},
              {"config", report.config}};
}

}  // namespace cqsr
