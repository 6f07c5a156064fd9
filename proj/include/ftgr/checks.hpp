#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftgr/adversary.hpp"
#include "ftgr/netsim.hpp"

namespace ftgr {

struct Verdict {
  bool ok = true;
  std::string problem;  // first failure, empty when ok
};

// Every surviving node terminated with the same D' and the same realization.
Verdict check_agreement(const RunResult& result);

// |D'| >= n - crashed, D' agrees with the input on every id it holds, ids
// missing from D' all crashed, and every survivor's own degree is in every
// survivor's D'.
Verdict check_validity(const SimConfig& config, const RunResult& result);

// Agreement, validity and the engine monitors in one call.
Verdict check_run(const SimConfig& config, const RunResult& result);

struct VerifyOptions {
  int n = 3;
  int f = 2;
  Model model = Model::CC;
  int group_size = 0;
  int horizon = 0;  // 0 selects PlanEnumerator::kBaseHorizon * group count
  SubsetPolicy policy = SubsetPolicy::All;
  Mutation mutation = Mutation::None;
  std::vector<int> degrees;  // empty selects 0, 1, ..., n - 1
  bool stop_at_first = true;
};

struct Counterexample {
  CrashPlan plan;
  std::string problem;
  ExecutionTrace trace;
};

struct VerifyReport {
  std::uint64_t plans = 0;
  std::uint64_t failures = 0;
  std::uint64_t horizon_short = 0;  // runs where a crash after the horizon could still matter
  int max_rounds = 0;
  int max_active = 0;
  std::optional<Counterexample> first;

  bool ok() const { return failures == 0 && horizon_short == 0; }
};

SimConfig verify_config(const VerifyOptions& options);

// Runs every enumerated plan. Execution errors count as failures.
VerifyReport verify_exhaustive(const VerifyOptions& options);

}  // namespace ftgr
