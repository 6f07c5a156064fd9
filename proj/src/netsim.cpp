#include "ftgr/netsim.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace ftgr {

using ojson = nlohmann::ordered_json;

const char* to_string(Model m) { return m == Model::CC ? "cc" : "ncc"; }

Model parse_model(const std::string& s) {
  if (s == "cc")
    return Model::CC;
  if (s == "ncc")
    return Model::NCC;
  throw std::invalid_argument("unknown model '" + s + "' (expected cc or ncc)");
}

GroupLayout SimConfig::layout() const {
  if (model == Model::CC)
    return GroupLayout::clique(n);
  return GroupLayout(n, group_size > 0 ? group_size : ceil_log2(n));
}

int SimConfig::round_cap() const { return 10 * layout().group_count() * (n + f) + 20; }

void SimConfig::validate() const {
  if (n < 1)
    throw std::invalid_argument("n must be >= 1");
  if (static_cast<int>(degrees.size()) != n)
    throw std::invalid_argument("degree list has " + std::to_string(degrees.size()) +
                                " entries, expected n = " + std::to_string(n));
  for (int d : degrees)
    if (d < 0)
      throw std::invalid_argument("degrees must be non-negative");
  if (f < 0 || f >= n)
    throw std::invalid_argument("crash budget must satisfy 0 <= f < n");
  if (capacity_c < 1)
    throw std::invalid_argument("capacity constant must be >= 1");
  if (group_size < 0)
    throw std::invalid_argument("group size must be >= 0");
}

namespace {

ojson envelope_json(const Envelope& e) { return ojson::array({e.from, e.to, encode(e.msg)}); }

// Appends the deliveries of one sender, honouring an optional recipient mask.
void deliver_from(const std::vector<Envelope>& outbox, const std::vector<char>* mask,
                  std::vector<std::vector<Envelope>>& inboxes, std::uint64_t& count) {
  for (const auto& e : outbox) {
    if (mask && !(*mask)[e.to])
      continue;
    inboxes[e.to - 1].push_back(e);
    ++count;
  }
}

}  // namespace

std::vector<std::vector<Envelope>> deliver_round(std::span<const std::vector<Envelope>> outboxes,
                                                 std::span<const NodeIndex> crashing,
                                                 std::span<const DeliverySubset> subsets,
                                                 Metrics& metrics) {
  const int n = static_cast<int>(outboxes.size());
  std::vector<char> is_crashing(n + 1, 0);
  for (NodeIndex c : crashing) {
    if (c < 1 || c > n)
      throw HarnessError("crash of unknown node " + std::to_string(c));
    is_crashing[c] = 1;
  }
  std::vector<std::vector<char>> masks(n + 1);
  for (const auto& s : subsets) {
    if (s.sender < 1 || s.sender > n || !is_crashing[s.sender])
      throw HarnessError("delivery subset for non-crashing sender " + std::to_string(s.sender));
    masks[s.sender].assign(n + 1, 0);
    for (NodeIndex r : s.recipients) {
      if (r < 1 || r > n)
        throw HarnessError("delivery subset names unknown node " + std::to_string(r));
      masks[s.sender][r] = 1;
    }
  }

  std::vector<std::vector<Envelope>> inboxes(n);
  std::uint64_t count = 0;
  const std::vector<char> nothing(n + 1, 0);
  for (NodeIndex i = 1; i <= n; ++i) {
    const auto& outbox = outboxes[i - 1];
    if (!is_crashing[i])
      deliver_from(outbox, nullptr, inboxes, count);
    else
      deliver_from(outbox, masks[i].empty() ? &nothing : &masks[i], inboxes, count);
  }
  metrics.messages += count;
  metrics.per_round.push_back(count);
  return inboxes;
}

namespace {

class Engine {
 public:
  Engine(const SimConfig& config, Adversary& adversary)
      : cfg_(config), adv_(adversary), layout_(config.layout()), n_(config.n) {
    nodes_.reserve(n_);
    for (NodeIndex i = 1; i <= n_; ++i)
      nodes_.emplace_back(i, cfg_.degrees[i - 1], layout_, cfg_.protocol);
    outboxes_.resize(n_);
    inboxes_.resize(n_);
    crash_round_.assign(n_ + 1, 0);
    crashed_while_.assign(n_ + 1, Mode::Crashed);
    view_size_.assign(n_ + 1, 0);
    mask_.assign(n_ + 1, 0);
    if (cfg_.model == Model::NCC)
      limit_ = Capacity{cfg_.capacity_c}.limit(layout_);
    if (cfg_.record_trace)
      result_.trace.lines().push_back(trace_header(cfg_));
  }

  RunResult run() {
    const int cap = cfg_.round_cap();
    int round = 0;
    while (any_running()) {
      ++round;
      if (round > cap)
        fail(ExecutionError::Kind::RoundCap, round,
             "no termination within " + std::to_string(cap) + " rounds");
      try {
        step(round);
      } catch (const ProtocolViolation& e) {
        fail(ExecutionError::Kind::ProtocolViolation, round, e.what());
      }
    }
    finish();
    return std::move(result_);
  }

 private:
  bool any_running() const {
    return std::any_of(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.running(); });
  }

  [[noreturn]] void fail(ExecutionError::Kind kind, int round, const std::string& what) {
    if (cfg_.record_trace && !round_json_.is_null())
      result_.trace.lines().push_back(round_json_.dump());
    throw ExecutionError(kind, round, "round " + std::to_string(round) + ": " + what,
                         result_.trace);
  }

  void note_problem(const std::string& what) {
    if (result_.monitors.first_problem.empty())
      result_.monitors.first_problem = what;
  }

  void step(int round) {
    const bool trace = cfg_.record_trace;
    if (trace) {
      round_json_ = ojson::object();
      round_json_["round"] = round;
    }
    ojson transitions = ojson::array();
    bool activity = false;
    if (std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.running(); }) >= 2)
      result_.metrics.contested = round;

    // Sends.
    before_.resize(n_);
    int active = 0;
    for (NodeIndex i = 1; i <= n_; ++i) {
      auto& node = nodes_[i - 1];
      auto& out = outboxes_[i - 1];
      out.clear();
      before_[i - 1] = node.mode();
      node.emit(round, out);
      if (node.mode() == Mode::Active)
        ++active;
      for (const auto& e : out)
        if (const auto* fe = std::get_if<FaultEntry>(&e.msg);
            fe && fe->cls == EntryClass::Smite && twice_any_.size() && twice_any_[fe->subject]) {
          result_.monitors.smite_after_twice = false;
          note_problem("smite sent for u" + std::to_string(fe->subject) +
                       " which was heard twice in phase 1");
          break;
        }
      if (limit_ > 0 && static_cast<int>(out.size()) > limit_) {
        result_.metrics.send_overflow += out.size() - limit_;
        result_.monitors.capacity = false;
        note_problem("u" + std::to_string(i) + " sends " + std::to_string(out.size()) +
                     " messages in round " + std::to_string(round));
        if (cfg_.strict)
          fail(ExecutionError::Kind::Capacity, round, result_.monitors.first_problem);
        out.resize(limit_);
      }
      result_.metrics.max_send = std::max(result_.metrics.max_send, static_cast<int>(out.size()));
    }
    result_.monitors.max_active = std::max(result_.monitors.max_active, active);
    if (active > 1)
      note_problem(std::to_string(active) + " active nodes in round " + std::to_string(round));

    // Adversary.
    const RoundView view{round, cfg_, layout_, nodes_, outboxes_, result_.metrics.crashes};
    auto decisions = adv_.decide(view);
    crashing_.clear();
    ojson crashes = ojson::array();
    for (const auto& d : decisions) {
      if (d.node < 1 || d.node > n_)
        throw HarnessError("adversary crashed unknown node " + std::to_string(d.node));
      if (crash_round_[d.node] != 0)
        throw HarnessError("adversary crashed u" + std::to_string(d.node) + " twice");
      if (result_.metrics.crashes + 1 > cfg_.f)
        throw HarnessError("adversary exceeded crash budget f = " + std::to_string(cfg_.f));
      ++result_.metrics.crashes;
      crash_round_[d.node] = round;
      crashing_.push_back(d.node);

      std::fill(mask_.begin(), mask_.end(), 0);
      if (d.deliver_all)
        std::fill(mask_.begin(), mask_.end(), 1);
      for (NodeIndex r : d.delivered) {
        if (r < 1 || r > n_)
          throw HarnessError("delivery subset names unknown node " + std::to_string(r));
        mask_[r] = 1;
      }
      auto& out = outboxes_[d.node - 1];
      std::erase_if(out, [&](const Envelope& e) { return !mask_[e.to]; });
      if (trace) {
        ojson got = ojson::array();
        for (const auto& e : out)
          got.push_back(e.to);
        crashes.push_back(ojson::array({d.node, got}));
      }
    }

    // Delivery. Crashing outboxes were already cut down to their subsets.
    for (auto& in : inboxes_)
      in.clear();
    std::uint64_t count = 0;
    ojson deliveries = ojson::array();
    for (NodeIndex i = 1; i <= n_; ++i) {
      for (const auto& e : outboxes_[i - 1]) {
        inboxes_[e.to - 1].push_back(e);
        ++count;
        if (trace)
          deliveries.push_back(envelope_json(e));
        if (std::holds_alternative<AllOkay>(e.msg) && !sent_allokay_.count(i)) {
          sent_allokay_.insert(i);
          ++result_.metrics.allokay_senders;
        }
      }
      const bool survived = crash_round_[i] == 0;
      if (!outboxes_[i - 1].empty() && survived)
        activity = true;
    }
    result_.metrics.messages += count;
    result_.metrics.per_round.push_back(count);

    for (NodeIndex c : crashing_) {
      crashed_while_[c] = nodes_[c - 1].mode();
      nodes_[c - 1].crash();
    }

    // Receive-side capacity.
    ojson dropped = ojson::array();
    for (NodeIndex i = 1; i <= n_; ++i) {
      auto& in = inboxes_[i - 1];
      result_.metrics.max_receive =
          std::max(result_.metrics.max_receive, static_cast<int>(in.size()));
      if (limit_ > 0 && static_cast<int>(in.size()) > limit_) {
        auto lost = enforce_capacity(in, limit_);
        result_.metrics.dropped += lost.size();
        result_.monitors.capacity = false;
        note_problem("u" + std::to_string(i) + " dropped " + std::to_string(lost.size()) +
                     " messages in round " + std::to_string(round));
        if (trace)
          for (const auto& e : lost)
            dropped.push_back(envelope_json(e));
        if (cfg_.strict)
          fail(ExecutionError::Kind::Capacity, round, result_.monitors.first_problem);
      }
    }

    // Local computation.
    for (NodeIndex i = 1; i <= n_; ++i) {
      auto& node = nodes_[i - 1];
      if (!node.crashed())
        node.absorb(round, inboxes_[i - 1]);
    }

    if (round == 2 * layout_.group_count())
      check_phase1();

    for (NodeIndex i = 1; i <= n_; ++i) {
      const auto& node = nodes_[i - 1];
      const Mode was = before_[i - 1];
      if (node.mode() != was) {
        if (!node.crashed())
          activity = true;
        if (trace)
          transitions.push_back(ojson::array({i, to_string(was), to_string(node.mode())}));
      }
      const std::size_t size = node.view().size();
      if (size < view_size_[i]) {
        result_.monitors.monotone_views = false;
        note_problem("D' shrank at u" + std::to_string(i));
      }
      view_size_[i] = size;
    }
    if (activity)
      result_.metrics.rounds = round;

    if (trace) {
      round_json_["crashes"] = std::move(crashes);
      round_json_["deliveries"] = std::move(deliveries);
      round_json_["dropped"] = std::move(dropped);
      round_json_["transitions"] = std::move(transitions);
      result_.trace.lines().push_back(round_json_.dump());
      round_json_ = nullptr;
    }
  }

  void check_phase1() {
    twice_any_.assign(n_ + 1, 0);
    std::vector<char> zero_any(n_ + 1, 0);
    for (const auto& node : nodes_) {
      if (node.crashed())
        continue;
      for (NodeIndex s = 1; s <= n_; ++s) {
        if (s == node.index())
          continue;
        const int t = node.tally().times_heard(s);
        if (t == 2)
          twice_any_[s] = 1;
        if (t == 0)
          zero_any[s] = 1;
      }
    }
    for (NodeIndex s = 1; s <= n_; ++s)
      if (twice_any_[s] && zero_any[s]) {
        result_.monitors.phase1_exclusion = false;
        note_problem("u" + std::to_string(s) + " heard twice by one node and never by another");
      }
  }

  void finish() {
    auto& out = result_.nodes;
    out.reserve(n_);
    for (const auto& node : nodes_) {
      NodeOutcome o;
      o.index = node.index();
      o.mode = node.mode();
      o.crash_round = crash_round_[node.index()];
      o.crashed_while = crashed_while_[node.index()];
      o.view = node.view();
      o.verdict = node.verdict();
      out.push_back(std::move(o));
    }
    if (!cfg_.record_trace)
      return;
    ojson nodes = ojson::array();
    for (const auto& o : out) {
      ojson j;
      j["node"] = o.index;
      j["mode"] = to_string(o.mode);
      j["crash_round"] = o.crash_round;
      ojson v = ojson::array();
      for (const auto& [id, d] : o.view.entries())
        v.push_back(ojson::array({id, d}));
      j["view"] = std::move(v);
      j["verdict"] = o.verdict ? format_outcome(*o.verdict) : std::string("-");
      nodes.push_back(std::move(j));
    }
    ojson fin;
    fin["rounds"] = result_.metrics.rounds;
    fin["messages"] = result_.metrics.messages;
    fin["crashes"] = result_.metrics.crashes;
    fin["dropped"] = result_.metrics.dropped;
    fin["nodes"] = std::move(nodes);
    ojson line;
    line["final"] = std::move(fin);
    result_.trace.lines().push_back(line.dump());
  }

  const SimConfig& cfg_;
  Adversary& adv_;
  GroupLayout layout_;
  int n_;
  int limit_ = 0;

  std::vector<RealizationNode> nodes_;
  std::vector<std::vector<Envelope>> outboxes_;
  std::vector<std::vector<Envelope>> inboxes_;
  std::vector<Mode> before_;
  std::vector<int> crash_round_;
  std::vector<Mode> crashed_while_;
  std::vector<std::size_t> view_size_;
  std::vector<char> mask_;
  std::vector<char> twice_any_;
  std::vector<NodeIndex> crashing_;
  std::set<NodeIndex> sent_allokay_;
  ojson round_json_;
  RunResult result_;
};

}  // namespace

RunResult run(const SimConfig& config, Adversary& adversary) {
  config.validate();
  Engine engine(config, adversary);
  return engine.run();
}

}  // namespace ftgr
