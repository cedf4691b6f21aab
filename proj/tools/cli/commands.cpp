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

#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cqsr/css.hpp"
#include "cqsr/errors.hpp"
#include "cqsr/estimation.hpp"
#include "cqsr/full_tensor.hpp"
#include "cqsr/mub.hpp"
#include "cqsr/protocol.hpp"
#include "cqsr/serialization.hpp"
#include "cqsr/stats.hpp"

namespace cqsr::cli {
namespace {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write " + path);
  file << text;
}

std::vector<PureState> candidates_from_json(const json& j) {
  if (!j.is_object() || !j.contains("states") || !j["states"].is_array()) {
    throw ValidationError("candidate file needs an array field 'states'");
  }
  std::vector<PureState> out;
  for (const auto& s : j["states"]) out.emplace_back(vector_from_json(s));
  if (out.empty()) throw ValidationError("candidate file lists no states");
  if (j.contains("d") && (!j["d"].is_number_integer() || j["d"].get<int>() != out.front().dimension())) {
    throw ValidationError("candidate file 'd' does not match the state length");
  }
  return out;
}

// --- verify-css -------------------------------------------------------------

struct VerifyArgs {
  std::string input;
  int copies = 1;
  double tolerance = kNumericTolerance;
  bool cross_check = false;
};

int verify_css(const VerifyArgs& a, std::ostream& out) {
  const WeightedStateSet set = state_set_from_json(parse_json_text(read_text(a.input)));
  if (a.copies < 1) throw ValidationError("--copies must be >= 1");
  const CssReport report = css_defect(set, a.copies, a.tolerance);
  json j = css_report_to_json(report);
  j["dimension"] = set.dimension();
  j["states"] = set.size();
  bool ok = report.is_css;
  if (a.cross_check) {
    const CssReport brute = css_defect_brute_force(set, a.copies, tensor_cap_from_env(), a.tolerance);
    j["brute_force_defect"] = brute.defect;
    ok = ok && brute.is_css;
  }
  out << j.dump(2) << '\n';
  return ok ? kSuccess : kNegative;
}

// --- gen-mub ----------------------------------------------------------------

int gen_mub(int d, const std::string& output, std::ostream& out) {
  const WeightedStateSet set = mub_as_css(d);
  write_text(output, state_set_to_json(set).dump(2) + "\n", out);
  return kSuccess;
}

// --- solve-css --------------------------------------------------------------

struct SolveArgs {
  std::string input;
  int random = 0;
  int dimension = 0;
  int copies = 1;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  std::string output;
};

int solve_css(const SolveArgs& a, std::ostream& out) {
  std::vector<PureState> candidates;
  int d = a.dimension;
  if (!a.input.empty()) {
    candidates = candidates_from_json(parse_json_text(read_text(a.input)));
    if (d != 0 && d != candidates.front().dimension()) throw ValidationError("--dimension does not match candidates");
    d = candidates.front().dimension();
  } else {
    if (d < 1) throw ValidationError("--dimension is required with --random");
    Rng rng(a.seed);
    candidates = random_candidate_pool(d, a.random, rng);
  }
  if (a.copies < 1) throw ValidationError("--copies must be >= 1");

  const CssSolveResult result = css_solve(candidates, d, a.copies, CssSolveOptions{a.tolerance, 0});
  json report = css_report_to_json(result.report);
  report["feasible"] = result.feasible();
  report["residual"] = result.residual;
  report["iterations"] = result.iterations;
  report["candidates"] = candidates.size();
  if (!result.feasible()) {
    out << report.dump(2) << '\n';
    return kNegative;
  }
  const std::string set_text = state_set_to_json(*result.solution).dump(2) + "\n";
  if (a.output.empty() || a.output == "-") {
    out << set_text;
  } else {
    write_text(a.output, set_text, out);
    out << report.dump(2) << '\n';
  }
  return kSuccess;
}

// --- simulate ---------------------------------------------------------------

int simulate(const std::string& config_path, const std::string& output, std::ostream& out) {
  const json j = parse_json_text(read_text(config_path));
  const std::filesystem::path base = std::filesystem::path(config_path).parent_path();
  const SessionConfig cfg = session_config_from_json(j, base);
  const SessionReport report = run_session(cfg);
  write_text(output, session_report_to_json(report).dump(2) + "\n", out);
  return kSuccess;
}

// --- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::string dimensions;
  std::string copies;
  std::string users = "1";
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::string set;
  int pool = 0;
  std::string output;
};

// An (M+1)-copy CSS for (d, M): the MUB set when it qualifies, otherwise
// weights solved over a random pool that grows on failure.
std::optional<WeightedStateSet> universal_set(int d, int M, std::uint64_t seed, int pool) {
  if (d == 2 || (d > 2 && is_prime(d))) {
    WeightedStateSet mub = mub_as_css(d);
    if (css_defect(mub, M + 1).is_css) return mub;
  }
  const auto D = static_cast<int>(dim_sym(d, M + 1));
  int count = pool > 0 ? pool : std::max(40, 2 * D * D);
  for (int attempt = 0; attempt < 3; ++attempt, count *= 2) {
    Rng rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(d) << 32 | static_cast<std::uint64_t>(M)) ^
                       static_cast<std::uint64_t>(attempt)));
    CssSolveResult result = css_solve(random_candidate_pool(d, count, rng), d, M + 1);
    if (result.feasible()) return std::move(result.solution);
  }
  return std::nullopt;
}

int sweep(const SweepArgs& a, std::ostream& out) {
  const std::vector<int> ds = parse_int_list(a.dimensions);
  const std::vector<int> ms = parse_int_list(a.copies);
  const std::vector<int> ns = parse_int_list(a.users);
  if (a.trials < 1) throw ValidationError("--trials must be >= 1");
  std::optional<WeightedStateSet> fixed;
  if (!a.set.empty()) fixed = state_set_from_json(parse_json_text(read_text(a.set)));

  std::string csv = "d,M,N,R,exact,empirical,stderr\n";
  bool complete = true;
  for (int d : ds) {
    for (int M : ms) {
      std::optional<WeightedStateSet> set = fixed ? fixed : universal_set(d, M, a.seed, a.pool);
      for (int N : ns) {
        std::string row = std::to_string(d) + "," + std::to_string(M) + "," + std::to_string(N) + ",";
        if (!set) {
          complete = false;
          row += "0," + format_double(optimal_mean_fidelity(d, M)) + ",nan,nan\n";
          csv += row;
          continue;
        }
        SessionConfig cfg;
        cfg.d = d;
        cfg.M = M;
        cfg.N = N;
        cfg.trials = a.trials;
        cfg.master_seed = a.seed;
        cfg.session_id = "sweep";
        cfg.state_set = *set;
        const SessionReport report = run_session(cfg);
        row += std::to_string(set->size()) + "," + format_double(optimal_mean_fidelity(d, M)) + "," +
               format_double(report.empirical_fidelity) + "," + format_double(report.std_error) + "\n";
        csv += row;
      }
    }
  }
  write_text(a.output, csv, out);
  return complete ? kSuccess : kNegative;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  auto to_int = [&](std::string_view s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ValidationError("invalid integer list '" + text + "'");
    }
    return v;
  };
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = to_int(std::string_view(text).substr(0, dots));
    const int hi = to_int(std::string_view(text).substr(dots + 2));
    if (hi < lo) throw ValidationError("empty range '" + text + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(to_int(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::uint64_t tensor_cap_from_env() {
  const char* raw = std::getenv("CQSR_MAX_TENSOR_DIM");
  if (raw == nullptr || *raw == '\0') return kDefaultTensorCap;
  std::uint64_t cap = 0;
  const std::string_view s(raw);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), cap);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || cap == 0) {
    throw ValidationError("CQSR_MAX_TENSOR_DIM must be a positive integer");
  }
  return cap;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measure-broadcast-prepare state distribution toolkit", "cqsr"};
  app.require_subcommand(1);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify-css", "Check whether a weighted state set is an M-copy CSS");
  verify->add_option("--input", verify_args.input, "State set JSON file")->required();
  verify->add_option("--copies", verify_args.copies, "Copy number M")->required();
  verify->add_option("--tolerance", verify_args.tolerance, "Defect tolerance");
  verify->add_flag("--cross-check", verify_args.cross_check, "Also evaluate on the full tensor space");

  int mub_dimension = 0;
  std::string mub_output;
  auto* gen = app.add_subcommand("gen-mub", "Write the MUB state set for d = 2 or odd prime d");
  gen->add_option("--dimension", mub_dimension, "Hilbert space dimension d")->required();
  gen->add_option("--output", mub_output, "Output file (default stdout)");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve-css", "Solve for nonnegative CSS weights over candidate states");
  auto* solve_input = solve->add_option("--input", solve_args.input, "Candidate states JSON file");
  auto* solve_random = solve->add_option("--random", solve_args.random, "Size of a Haar-random candidate pool");
  solve_input->excludes(solve_random);
  solve->add_option("--dimension", solve_args.dimension, "Hilbert space dimension d");
  solve->add_option("--copies", solve_args.copies, "Copy number M")->required();
  solve->add_option("--seed", solve_args.seed, "Seed for the random pool");
  solve->add_option("--tolerance", solve_args.tolerance, "Acceptance tolerance on the CSS defect");
  solve->add_option("--output", solve_args.output, "Output file for the solved set (default stdout)");

  std::string sim_config;
  std::string sim_output;
  auto* sim = app.add_subcommand("simulate", "Run one measure-broadcast-prepare session");
  sim->add_option("--config", sim_config, "Session config JSON file")->required();
  sim->add_option("--output", sim_output, "Output file for the report (default stdout)");

  SweepArgs sweep_args;
  auto* sw = app.add_subcommand("sweep", "Tabulate optimal vs simulated fidelity as CSV");
  sw->add_option("--dimension", sweep_args.dimensions, "Dimensions: 3, 2..4 or 2,3,5")->required();
  sw->add_option("--copies", sweep_args.copies, "Copy numbers M, same syntax")->required();
  sw->add_option("--users", sweep_args.users, "User counts N, same syntax");
  sw->add_option("--trials", sweep_args.trials, "Trials per row");
  sw->add_option("--seed", sweep_args.seed, "Master seed");
  sw->add_option("--set", sweep_args.set, "Use this state set for every row");
  sw->add_option("--pool", sweep_args.pool, "Random candidate pool size when solving for a set");
  sw->add_option("--output", sweep_args.output, "CSV output file (default stdout)");

  std::vector<const char*> argv{"cqsr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*verify) return verify_css(verify_args, out);
    if (*gen) return gen_mub(mub_dimension, mub_output, out);
    if (*solve) {
      if (solve_args.input.empty() && solve_args.random < 1) {
        throw ValidationError("solve-css needs --input or --random");
      }
      return solve_css(solve_args, out);
    }
    if (*sim) return simulate(sim_config, sim_output, out);
    if (*sw) return sweep(sweep_args, out);
  } catch (const SizeLimitError& e) {
    err << "size limit: " << e.what() << '\n';
    return kSizeLimit;
  } catch (const UnsupportedDimensionError& e) {
    err << "unsupported dimension: " << e.what() << '\n';
    return kUnsupportedDimension;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace cqsr::cli
