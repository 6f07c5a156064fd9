#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftgr/protocol.hpp"
#include "ftgr/trace.hpp"

namespace ftgr {

enum class Model { CC, NCC };
const char* to_string(Model m);
Model parse_model(const std::string& s);

struct SimConfig {
  int n = 0;
  std::vector<int> degrees;  // degrees[i - 1] belongs to u_i
  Model model = Model::CC;
  int capacity_c = 1;  // NCC per-round limit is capacity_c * group size
  int group_size = 0;  // NCC only; 0 selects ceil(log2 n)
  int f = 0;           // crash budget, f < n
  bool strict = true;  // NCC: any drop or over-limit send aborts the run
  ProtocolOptions protocol;
  bool record_trace = false;
  std::uint64_t seed = 0;  // informational; copied into the trace header
  std::string adversary;   // informational; copied into the trace header

  GroupLayout layout() const;
  int round_cap() const;
  void validate() const;  // throws std::invalid_argument
};

struct Metrics {
  int rounds = 0;  // last round in which a surviving node sent or changed state
  std::uint64_t messages = 0;
  std::vector<std::uint64_t> per_round;
  int crashes = 0;
  int allokay_senders = 0;  // nodes that got at least one all-okay out
  int max_send = 0;         // largest per-node send count in any round
  int max_receive = 0;      // largest per-node delivered count in any round
  std::uint64_t dropped = 0;
  std::uint64_t send_overflow = 0;
  int contested = 0;  // last round that began with two or more running nodes
};

// Per-execution invariant monitors maintained by the engine.
struct Monitors {
  int max_active = 0;  // most nodes simultaneously Active in one round
  bool phase1_exclusion = true;
  bool smite_after_twice = true;  // true = never observed
  bool monotone_views = true;
  bool capacity = true;
  std::string first_problem;

  bool ok() const {
    return max_active <= 1 && phase1_exclusion && smite_after_twice && monotone_views && capacity;
  }
};

struct NodeOutcome {
  NodeIndex index = 0;
  Mode mode = Mode::Listening;
  int crash_round = 0;  // 0 = never crashed
  Mode crashed_while = Mode::Crashed;  // mode during the crash round
  DegreeView view;
  std::optional<RealizationOutcome> verdict;
};

struct RunResult {
  std::vector<NodeOutcome> nodes;  // nodes[i - 1] is u_i
  Metrics metrics;
  Monitors monitors;
  ExecutionTrace trace;
};

// --- adversary interface ---------------------------------------------------

struct CrashDecision {
  NodeIndex node = 0;
  bool deliver_all = false;
  std::vector<NodeIndex> delivered;  // recipients that still receive this round
};

// Everything the adversary may observe before choosing this round's crashes:
// every node's full local state and every outbox.
struct RoundView {
  int round;
  const SimConfig& config;
  const GroupLayout& layout;
  std::span<const RealizationNode> nodes;        // nodes[i - 1] is u_i
  std::span<const std::vector<Envelope>> outboxes;  // outboxes[i - 1]
  int crashes_so_far;
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::vector<CrashDecision> decide(const RoundView& view) = 0;
  virtual std::string name() const = 0;
};

// The adversary or a script broke the rules (budget, unknown node, ...).
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The execution itself failed: protocol violation, strict capacity breach or
// the round watchdog. Carries the trace recorded so far.
class ExecutionError : public std::runtime_error {
 public:
  enum class Kind { ProtocolViolation, Capacity, RoundCap };
  ExecutionError(Kind kind, int round, const std::string& what, ExecutionTrace trace)
      : std::runtime_error(what), kind_(kind), round_(round), trace_(std::move(trace)) {}
  Kind kind() const { return kind_; }
  int round() const { return round_; }
  const ExecutionTrace& trace() const { return trace_; }

 private:
  Kind kind_;
  int round_;
  ExecutionTrace trace_;
};

struct DeliverySubset {
  NodeIndex sender = 0;
  std::vector<NodeIndex> recipients;
};

// Delivery for one round: live senders deliver everything, a crashing sender
// only its subset (nothing if it has none). Returns per-receiver inboxes
// sorted by sender and adds the delivered counts to `metrics`. Throws
// HarnessError if a subset names a sender that is not crashing.
std::vector<std::vector<Envelope>> deliver_round(std::span<const std::vector<Envelope>> outboxes,
                                                 std::span<const NodeIndex> crashing,
                                                 std::span<const DeliverySubset> subsets,
                                                 Metrics& metrics);

// Trace header line for a configuration and its inverse.
std::string trace_header(const SimConfig& config);
SimConfig config_from_header(const std::string& line);

// Steps rounds until every surviving node has terminated.
RunResult run(const SimConfig& config, Adversary& adversary);

}  // namespace ftgr
