#include "ftgr/checks.hpp"

#include <algorithm>

namespace ftgr {

namespace {

Verdict fail(std::string what) { return Verdict{false, std::move(what)}; }

std::string u(NodeIndex i) { return "u" + std::to_string(i); }

}  // namespace

Verdict check_agreement(const RunResult& result) {
  const NodeOutcome* reference = nullptr;
  for (const auto& o : result.nodes) {
    if (o.crash_round != 0)
      continue;
    if (o.mode != Mode::Exit || !o.verdict)
      return fail(u(o.index) + " survived without terminating");
    if (!reference) {
      reference = &o;
      continue;
    }
    if (!(o.view == reference->view))
      return fail(u(reference->index) + " and " + u(o.index) + " hold different D'");
    if (*o.verdict != *reference->verdict)
      return fail(u(reference->index) + " and " + u(o.index) + " realized different graphs");
  }
  return {};
}

Verdict check_validity(const SimConfig& config, const RunResult& result) {
  const int n = config.n;
  std::vector<char> crashed(n + 1, 0);
  int crash_count = 0;
  for (const auto& o : result.nodes)
    if (o.crash_round != 0) {
      crashed[o.index] = 1;
      ++crash_count;
    }
  for (const auto& o : result.nodes) {
    if (crashed[o.index])
      continue;
    const auto& view = o.view;
    if (static_cast<int>(view.size()) < n - crash_count)
      return fail(u(o.index) + " has |D'| = " + std::to_string(view.size()) + " < n - crashed = " +
                  std::to_string(n - crash_count));
    for (NodeIndex j = 1; j <= n; ++j) {
      if (view.contains(j)) {
        if (*view.degree(j) != config.degrees[j - 1])
          return fail(u(o.index) + " holds a wrong degree for " + u(j));
      } else if (!crashed[j]) {
        return fail(u(o.index) + " is missing surviving " + u(j));
      }
    }
  }
  return {};
}

Verdict check_run(const SimConfig& config, const RunResult& result) {
  if (auto v = check_agreement(result); !v.ok)
    return v;
  if (auto v = check_validity(config, result); !v.ok)
    return v;
  if (!result.monitors.ok())
    return fail("monitor: " + result.monitors.first_problem);
  return {};
}

SimConfig verify_config(const VerifyOptions& options) {
  SimConfig c;
  c.n = options.n;
  c.f = options.f;
  c.model = options.model;
  c.group_size = options.group_size;
  c.protocol.mutation = options.mutation;
  c.adversary = "scripted";
  c.degrees = options.degrees;
  if (c.degrees.empty())
    for (int i = 0; i < options.n; ++i)
      c.degrees.push_back(i);
  c.validate();
  return c;
}

VerifyReport verify_exhaustive(const VerifyOptions& options) {
  SimConfig config = verify_config(options);
  const int g = config.layout().group_count();
  const int horizon = options.horizon > 0 ? options.horizon : PlanEnumerator::kBaseHorizon * g;
  const PlanEnumerator plans(options.n, options.f, horizon, options.policy, g);

  VerifyReport report;
  auto record = [&](const CrashPlan& plan, const std::string& problem) {
    ++report.failures;
    if (report.first)
      return;
    SimConfig traced = config;
    traced.record_trace = true;
    ScriptedAdversary replay(plan);
    Counterexample cx{plan, problem, {}};
    try {
      cx.trace = run(traced, replay).trace;
    } catch (const ExecutionError& e) {
      cx.trace = e.trace();
    }
    report.first = std::move(cx);
  };

  report.plans = plans.for_each([&](const CrashPlan& plan) {
    ScriptedAdversary adversary(plan);
    try {
      const RunResult result = run(config, adversary);
      report.max_rounds = std::max(report.max_rounds, result.metrics.rounds);
      report.max_active = std::max(report.max_active, result.monitors.max_active);
      if (result.metrics.crashes < config.f && result.metrics.contested > horizon)
        ++report.horizon_short;
      if (const auto v = check_run(config, result); !v.ok)
        record(plan, v.problem);
    } catch (const ExecutionError& e) {
      record(plan, e.what());
    }
    return !(options.stop_at_first && report.failures > 0);
  });
  return report;
}

}  // namespace ftgr
