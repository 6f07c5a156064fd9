#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ftgr/adversary.hpp"
#include "ftgr/checks.hpp"
#include "ftgr/experiment.hpp"
#include "ftgr/netsim.hpp"

namespace ftgr {

// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // unrealizable, a failed check or a replay divergence
inline constexpr int kExitUsage = 2;   // malformed input or configuration

// Prints the edge list or "unrealizable" for a whitespace or comma separated
// sequence.
int cmd_realize(const std::string& sequence, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  SimConfig config;
  double crash_prob = RandomAdversary::kDefaultCrashProbability;
  std::optional<CrashPlan> plan;
  std::string trace_path;  // empty = no trace file
};

void write_run_summary(std::ostream& os, const SimConfig& config, const RunResult& result);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

int cmd_verify(const VerifyOptions& options, const std::string& counterexample_path,
               std::ostream& out, std::ostream& err);

struct ReplayReport {
  bool identical = false;
  int divergent_round = 0;  // 0 = none; final record is reported as rounds + 1
  std::string detail;
};

// Rebuilds the configuration and crash decisions from a trace, re-runs it and
// compares every line. Throws std::invalid_argument on an unreadable trace,
// a version mismatch or a model that disagrees with `expected_model`.
ReplayReport replay(const ExecutionTrace& trace, std::optional<Model> expected_model = {});
int cmd_replay(const std::string& path, std::optional<Model> expected_model, std::ostream& out,
               std::ostream& err);

// Reads whitespace or comma separated integers from a file.
std::vector<int> read_degree_file(const std::string& path);

}  // namespace ftgr
