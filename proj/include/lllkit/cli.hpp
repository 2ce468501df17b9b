// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lllkit/local.hpp"
#include "lllkit/solver.hpp"
#include "lllkit/tiles.hpp"

namespace lllkit {

enum ExitCode : int {
  kExitOk = 0,
  kExitRejected = 1,  // gate rejection, UNSAT, pattern occurrence, refused depth
  kExitInput = 2,
  kExitBudget = 3,
  kExitInternal = 4,  // a self-check failed
};

struct Budgets {
  std::uint64_t enumeration = kDefaultEnumerationBudget;
  std::uint64_t vertices = kDefaultVertexBudget;  // memory: materialized tile vertices
  std::chrono::milliseconds time{60000};
};

// Overrides from LLLKIT_BUDGET_ENUM, LLLKIT_BUDGET_VERTICES and
// LLLKIT_TIME_LIMIT_MS. Non-positive or unparsable values are InputError.
Budgets budgets_from_env(Budgets base = {});

struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> inputs;   // role -> path
  std::map<std::string, std::string> params;   // flag -> raw value
  std::map<std::string, std::string> outputs;  // role -> path
  Budgets budgets;
  std::uint64_t seed = 0;
  bool oracle = false;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = kExitOk;  // meaningful when config is empty (help, usage error)
};

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out,
                        std::ostream& err);
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view bytes);

struct BenchmarkRow {
  std::uint64_t n = 0;
  std::uint64_t rounds = 0;
  unsigned log_star_n = 0;
  std::vector<LedgerPhase> phases;
};

// family: "cycle" (Z_n, a path below n = 4), "path" or "torus2" (n a square).
// pipeline: "gps", "hom" or "avoid". Nonzero seed permutes the ids.
std::vector<BenchmarkRow> benchmark_rounds(const std::vector<std::uint64_t>& sizes,
                                           const std::string& pipeline,
                                           const std::string& family, std::uint64_t seed,
                                           const Budgets& budgets = {});
// Header: n,rounds,log_star_n followed by the phase names of the pipeline.
std::string benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::string& pipeline);
std::vector<std::string> benchmark_phase_names(const std::string& pipeline);

// The network used by benchmark_rounds.
NetworkGraph family_network(const std::string& family, std::uint64_t n, std::uint64_t seed);

}  // namespace lllkit
