#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ftgr/netsim.hpp"

namespace ftgr {

struct CrashEvent {
  int round = 0;
  NodeIndex node = 0;
  std::optional<std::vector<NodeIndex>> recipients;  // nullopt = deliver everything
  bool operator==(const CrashEvent&) const = default;
};

// A fully scripted schedule, at most one event per node.
struct CrashPlan {
  std::vector<CrashEvent> events;

  bool operator==(const CrashPlan&) const = default;
  // Throws std::invalid_argument for round < 1, unknown nodes or repeats.
  void validate(int n) const;

  // Text form, one event per line: "<round> <node> <recipients...>", where
  // "*" stands for all recipients and no recipients means a clean crash.
  // '#' starts a comment.
  static CrashPlan parse(std::istream& is);
  static CrashPlan parse(const std::string& text);
  std::string format() const;
};

class NoneAdversary : public Adversary {
 public:
  std::vector<CrashDecision> decide(const RoundView&) override { return {}; }
  std::string name() const override { return "none"; }
};

class ScriptedAdversary : public Adversary {
 public:
  explicit ScriptedAdversary(CrashPlan plan);
  std::vector<CrashDecision> decide(const RoundView& view) override;
  std::string name() const override { return "scripted"; }

 private:
  CrashPlan plan_;
};

// Each running node crashes independently with probability p per round while
// budget remains; every recipient of a crasher is kept with probability 1/2.
class RandomAdversary : public Adversary {
 public:
  static constexpr double kDefaultCrashProbability = 0.02;

  RandomAdversary(std::uint64_t seed, int f, double p = kDefaultCrashProbability);
  std::vector<CrashDecision> decide(const RoundView& view) override;
  std::string name() const override { return "random"; }

 private:
  double uniform();

  std::mt19937_64 rng_;
  int f_;
  double p_;
};

// Round 1: the ceil(f/2) lowest indices crash, each reaching every other
// recipient. Afterwards every node that turns active is crashed in the first
// round of its second copy, reaching alternating recipients but never the
// next running index.
class WorstCaseAdversary : public Adversary {
 public:
  explicit WorstCaseAdversary(int f) : f_(f) {}
  std::vector<CrashDecision> decide(const RoundView& view) override;
  std::string name() const override { return "worst"; }

 private:
  int f_;
  std::vector<int> first_active_;  // round each node was first seen active
};

// Builds "none", "worst", "random" or "scripted" (the latter needs a plan).
std::unique_ptr<Adversary> make_adversary(const std::string& name, int f, std::uint64_t seed,
                                          double crash_prob, const std::optional<CrashPlan>& plan);

enum class SubsetPolicy {
  All,       // every subset of the other nodes
  Extremes,  // only the empty and the full subset
};

// Static crash schedules: every choice of crashing nodes (up to f), crash
// round in 1..horizon and delivery subset.
class PlanEnumerator {
 public:
  static constexpr int kMaxNodes = 4;
  static constexpr int kMaxFaults = 3;
  static constexpr int kBaseHorizon = 14;

  // The horizon cap is kBaseHorizon * group_count. Throws std::length_error
  // when a cap is exceeded.
  PlanEnumerator(int n, int f, int horizon, SubsetPolicy policy, int group_count = 1);

  std::uint64_t count() const;
  // Stops early once the callback returns false. Returns the number visited.
  std::uint64_t for_each(const std::function<bool(const CrashPlan&)>& visit) const;

 private:
  int n_;
  int f_;
  int horizon_;
  SubsetPolicy policy_;
};

}  // namespace ftgr
