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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "cqsr/errors.hpp"
#include "cqsr/estimation.hpp"
#include "cqsr/mub.hpp"
#include "cqsr/protocol.hpp"
#include "cqsr/serialization.hpp"

namespace cqsr {
namespace {

using nlohmann::json;

BroadcastRecord sample_record() { return BroadcastRecord{"s-1", 42, 3, std::string(64, 'a')}; }

TEST(Wire, RoundTrip) {
  const BroadcastRecord r = sample_record();
  EXPECT_EQ(parse_record(serialize_record(r)), r);
  const BroadcastRecord big{"x", 18446744073709551615ULL, 4294967295U, "ff"};
  EXPECT_EQ(parse_record(serialize_record(big)), big);
}

TEST(Wire, CanonicalMatchesLibraryDump) {
  const BroadcastRecord r = sample_record();
  const std::string lib =
      json{{"session_id", r.session_id}, {"trial", r.trial}, {"r", r.outcome}, {"digest", r.digest}}.dump();
  EXPECT_EQ(serialize_record(r), lib);
}

TEST(Wire, EscapedStringsTakeSlowPath) {
  const BroadcastRecord r{"quote\"and\\slash\n", 1, 0, "d"};
  const std::string line = serialize_record(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(parse_record(line), r);
}

TEST(Wire, NonCanonicalLinesStillParse) {
  const BroadcastRecord expect{"s", 7, 2, "ab"};
  EXPECT_EQ(parse_record(R"( { "trial" : 7, "r": 2, "session_id": "s", "digest": "ab" } )"), expect);
  EXPECT_EQ(parse_record(R"({"r":2,"trial":7,"digest":"ab","session_id":"s"})"), expect);
}

TEST(Wire, TruncatedLineIsParseError) {
  const std::string line = serialize_record(sample_record());
  for (std::size_t cut : {std::size_t{0}, std::size_t{1}, line.size() / 2, line.size() - 1}) {
    try {
      parse_record(std::string_view(line).substr(0, cut));
      FAIL() << "cut " << cut;
    } catch (const ParseError& e) {
      EXPECT_LE(e.offset(), cut);
    }
  }
}

TEST(Wire, UnknownAndMissingFields) {
  EXPECT_THROW(parse_record(R"({"digest":"a","r":1,"session_id":"s","trial":1,"extra":0})"), ParseError);
  EXPECT_THROW(parse_record(R"({"digest":"a","r":1,"session_id":"s"})"), ParseError);
  EXPECT_THROW(parse_record(R"({"digest":"a","r":-1,"session_id":"s","trial":1})"), ParseError);
  EXPECT_THROW(parse_record(R"({"digest":"a","r":1.5,"session_id":"s","trial":1})"), ParseError);
  EXPECT_THROW(parse_record(R"([1,2])"), ParseError);
  try {
    parse_record(R"({"digest":"a","r":1,"session_id":"s","trial":1,"extra":0})");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 47u);
  }
}

TEST(Wire, ExpectationChecks) {
  const std::string line = serialize_record(BroadcastRecord{"s", 0, 6, "abc"});
  EXPECT_THROW(parse_record(line, RecordExpectation{"abc", 6}), ValidationError);
  EXPECT_THROW(parse_record(line, RecordExpectation{"xyz", 10}), ProtocolError);
  EXPECT_NO_THROW(parse_record(line, RecordExpectation{"abc", 7}));
}

TEST(CloudMeasure, OutcomeProbabilitiesForZeroState) {
  const WeightedStateSet set = mub_as_css(2);
  const Povm povm = povm_from_css(set, 2);
  const auto p = povm.outcome_probabilities(PureState::basis(2, 0));
  ASSERT_EQ(p.size(), 6u);
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
  for (int r = 2; r < 6; ++r) EXPECT_NEAR(p[static_cast<std::size_t>(r)], 0.125, 1e-12);
}

TEST(CloudMeasure, EmpiricalFrequencies) {
  const WeightedStateSet set = mub_as_css(2);
  const Povm povm = povm_from_css(set, 2);
  const auto records = cloud_measure(PureState::basis(2, 0), 2, povm, 100000, 5, RecordStamp{"s", "d"});
  ASSERT_EQ(records.size(), 100000u);
  std::vector<int> counts(6, 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].trial, i);
    ++counts[records[i].outcome];
  }
  EXPECT_NEAR(counts[0] / 1e5, 0.5, 0.005);
  EXPECT_EQ(counts[1], 0);
}

TEST(CloudMeasure, DeterministicAndOffsettable) {
  const Povm povm = povm_from_css(mub_as_css(3), 1);
  const PureState psi = PureState::basis(3, 1);
  const auto a = cloud_measure(psi, 1, povm, 200, 9, RecordStamp{"s", "d"});
  const auto b = cloud_measure(psi, 1, povm, 200, 9, RecordStamp{"s", "d"});
  EXPECT_EQ(a, b);
  const auto tail = cloud_measure(psi, 1, povm, 100, 9, RecordStamp{"s", "d"}, 100);
  EXPECT_TRUE(std::equal(tail.begin(), tail.end(), a.begin() + 100));
}

TEST(CloudMeasure, Validation) {
  const Povm povm = povm_from_css(mub_as_css(2), 2);
  EXPECT_THROW(cloud_measure(PureState::basis(2, 0), 1, povm, 10, 0, {}), ValidationError);
  EXPECT_THROW(cloud_measure(PureState::basis(2, 0), 2, povm, 0, 0, {}), ValidationError);
  const Povm partial({PureState::basis(2, 0)}, {1.0}, 1);
  EXPECT_THROW(cloud_measure(PureState::basis(2, 0), 1, partial, 10, 0, {}), ValidationError);
}

TEST(UserPrepare, Examples) {
  const WeightedStateSet set = mub_as_css(2);
  const std::string digest = state_set_digest(set);
  const BroadcastRecord rec{"s", 0, 3, digest};
  const ProductStateDescriptor p = user_prepare(rec, set, 4);
  EXPECT_EQ(p.state_index, 3u);
  EXPECT_EQ(p.copies, 4);
  EXPECT_EQ(&p.state.get(), &set.states()[3]);

  std::vector<ProductStateDescriptor> users;
  for (int u = 0; u < 5; ++u) users.push_back(user_prepare(rec, set, digest, 1));
  for (const auto& u : users) EXPECT_EQ(u, users.front());

  EXPECT_THROW(user_prepare(BroadcastRecord{"s", 0, 3, "stale"}, set, 1), ProtocolError);
  EXPECT_THROW(user_prepare(BroadcastRecord{"s", 0, 6, digest}, set, 1), ValidationError);
}

TEST(UserAgent, HistogramFromLines) {
  const WeightedStateSet set = mub_as_css(2);
  const std::string digest = state_set_digest(set);
  UserAgent agent(set, digest, 1);
  agent.receive(serialize_record({"s", 0, 2, digest}));
  agent.receive(serialize_record({"s", 1, 2, digest}));
  agent.receive(serialize_record({"s", 2, 5, digest}));
  EXPECT_EQ(agent.histogram(), (std::vector<std::uint64_t>{0, 0, 2, 0, 0, 1}));
  EXPECT_THROW(agent.receive(serialize_record({"s", 3, 1, "other"})), ProtocolError);
}

SessionConfig qubit_config(std::uint64_t trials, std::uint64_t seed, int N) {
  SessionConfig cfg;
  cfg.d = 2;
  cfg.M = 2;
  cfg.N = N;
  cfg.trials = trials;
  cfg.master_seed = seed;
  return cfg;
}

TEST(Session, ExampleQubit) {
  const SessionReport r = run_session(qubit_config(100000, 1, 7));
  EXPECT_NEAR(r.exact_fidelity, 0.75, 1e-12);
  EXPECT_NEAR(r.empirical_fidelity, 0.75, 0.004);
  EXPECT_LT(std::abs(r.gap), 3.0 * r.std_error);
  EXPECT_TRUE(r.users_consistent);
  EXPECT_EQ(r.users, 7);
  EXPECT_EQ(r.histogram.size(), 6u);
  std::uint64_t total = 0;
  for (auto c : r.histogram) total += c;
  EXPECT_EQ(total, 100000u);
}

TEST(Session, QutritSingleCopy) {
  SessionConfig cfg;
  cfg.d = 3;
  cfg.M = 1;
  cfg.N = 2;
  cfg.trials = 20000;
  cfg.master_seed = 3;
  const SessionReport r = run_session(cfg);
  EXPECT_NEAR(r.exact_fidelity, 0.5, 1e-12);
  EXPECT_LT(std::abs(r.gap), 3.0 * r.std_error);
}

TEST(Session, DeterministicReport) {
  SessionConfig cfg = qubit_config(5000, 77, 3);
  const std::string a = session_report_to_json(run_session(cfg)).dump();
  const std::string b = session_report_to_json(run_session(cfg)).dump();
  EXPECT_EQ(a, b);
}

TEST(Session, WorkerCountDoesNotChangeOutcomes) {
  SessionConfig cfg = qubit_config(20000, 12, 2);
  const SessionReport one = run_session(cfg);
  cfg.workers = 4;
  const SessionReport four = run_session(cfg);
  EXPECT_EQ(one.histogram, four.histogram);
  EXPECT_DOUBLE_EQ(one.empirical_fidelity, four.empirical_fidelity);
}

TEST(Session, UserCountIndependence) {
  std::vector<double> values;
  for (int N : {1, 2, 10}) values.push_back(run_session(qubit_config(10000, 21, N)).empirical_fidelity);
  EXPECT_EQ(values[0], values[1]);
  EXPECT_EQ(values[0], values[2]);
}

TEST(Session, ExactFidelitySpread) {
  double lo = 1.0;
  double hi = 0.0;
  double lo3 = 1.0;
  double hi3 = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SessionConfig cfg = qubit_config(1, seed, 1);
    const double f = run_session(cfg).exact_fidelity;
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    cfg.M = 3;
    const double f3 = run_session(cfg).exact_fidelity;
    lo3 = std::min(lo3, f3);
    hi3 = std::max(hi3, f3);
  }
  EXPECT_LT(hi - lo, 1e-10);
  EXPECT_GT(hi3 - lo3, 1e-3);
}

TEST(Session, Validation) {
  EXPECT_THROW(run_session(qubit_config(0, 1, 1)), ValidationError);
  EXPECT_THROW(run_session(qubit_config(10, 1, 0)), ValidationError);
  SessionConfig cfg = qubit_config(10, 1, 1);
  cfg.d = 4;
  EXPECT_THROW(run_session(cfg), UnsupportedDimensionError);
  cfg = qubit_config(10, 1, 1);
  cfg.M = 4;  // the six-state set is not a 4-copy CSS
  EXPECT_THROW(run_session(cfg), ValidationError);
  cfg = qubit_config(10, 1, 1);
  cfg.input_amplitudes = CVector::Ones(3);
  EXPECT_THROW(run_session(cfg), ValidationError);
}

TEST(Session, ExplicitInput) {
  SessionConfig cfg = qubit_config(50000, 2, 1);
  cfg.input_amplitudes = CVector::Unit(2, 0);
  const SessionReport r = run_session(cfg);
  EXPECT_NEAR(static_cast<double>(r.histogram[0]) / 50000.0, 0.5, 0.01);
  EXPECT_EQ(r.histogram[1], 0u);
}

TEST(SessionConfigJson, RoundTripAndSources) {
  const auto dir = std::filesystem::temp_directory_path() / "cqsr_protocol_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "set.json") << state_set_to_json(mub_as_css(3)).dump();
  }
  const json j = json::parse(R"({"d":3,"M":1,"N":4,"trials":100,"master_seed":5,"session_id":"x",
                                 "state_set":"set.json","input":[[1,0],[0,0],[0,0]],"workers":2})");
  const SessionConfig cfg = session_config_from_json(j, dir);
  EXPECT_EQ(cfg.N, 4);
  EXPECT_EQ(cfg.workers, 2);
  ASSERT_TRUE(std::holds_alternative<FileStateSet>(cfg.state_set));
  EXPECT_EQ(resolve_state_set(cfg).size(), 12u);
  const SessionConfig again = session_config_from_json(session_config_to_json(cfg), dir);
  EXPECT_EQ(session_config_to_json(again), session_config_to_json(cfg));

  json inline_set = j;
  inline_set["state_set"] = state_set_to_json(mub_as_css(3));
  EXPECT_TRUE(std::holds_alternative<WeightedStateSet>(session_config_from_json(inline_set, dir).state_set));

  json unknown = j;
  unknown["colour"] = 1;
  EXPECT_THROW(session_config_from_json(unknown, dir), ValidationError);
  json negative = j;
  negative["trials"] = -3;
  EXPECT_THROW(session_config_from_json(negative, dir), ValidationError);
  json missing = j;
  missing.erase("M");
  EXPECT_THROW(session_config_from_json(missing, dir), ValidationError);
  json absent_file = j;
  absent_file["state_set"] = "nope.json";
  EXPECT_THROW(resolve_state_set(session_config_from_json(absent_file, dir)), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST(SessionReportJson, Keys) {
  const json j = session_report_to_json(run_session(qubit_config(100, 1, 1)));
  for (const char* key : {"exact_fidelity", "empirical_fidelity", "stderr", "histogram", "config", "gap"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

}  // namespace
}  // namespace cqsr
