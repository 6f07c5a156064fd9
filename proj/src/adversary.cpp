#include "ftgr/adversary.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>

namespace ftgr {

void CrashPlan::validate(int n) const {
  std::set<NodeIndex> seen;
  for (const auto& e : events) {
    if (e.round < 1)
      throw std::invalid_argument("crash round must be >= 1");
    if (e.node < 1 || e.node > n)
      throw std::invalid_argument("crash plan names unknown node " + std::to_string(e.node));
    if (!seen.insert(e.node).second)
      throw std::invalid_argument("node " + std::to_string(e.node) + " crashes twice in plan");
    if (e.recipients)
      for (NodeIndex r : *e.recipients)
        if (r < 1 || r > n)
          throw std::invalid_argument("crash plan names unknown recipient " + std::to_string(r));
  }
}

CrashPlan CrashPlan::parse(std::istream& is) {
  CrashPlan plan;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;)
      tokens.push_back(t);
    if (tokens.empty())
      continue;
    auto number = [&](const std::string& t) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != t.size())
        throw std::invalid_argument("plan line " + std::to_string(lineno) + ": bad number '" + t +
                                    "'");
      return v;
    };
    if (tokens.size() < 2)
      throw std::invalid_argument("plan line " + std::to_string(lineno) +
                                  ": expected '<round> <node> [recipients]'");
    CrashEvent e;
    e.round = number(tokens[0]);
    e.node = number(tokens[1]);
    if (tokens.size() == 3 && tokens[2] == "*") {
      e.recipients = std::nullopt;
    } else {
      e.recipients.emplace();
      for (std::size_t i = 2; i < tokens.size(); ++i)
        e.recipients->push_back(number(tokens[i]));
    }
    plan.events.push_back(std::move(e));
  }
  return plan;
}

CrashPlan CrashPlan::parse(const std::string& text) {
  std::istringstream is(text);
  return parse(is);
}

std::string CrashPlan::format() const {
  std::ostringstream os;
  for (const auto& e : events) {
    os << e.round << ' ' << e.node;
    if (!e.recipients)
      os << " *";
    else
      for (NodeIndex r : *e.recipients)
        os << ' ' << r;
    os << '\n';
  }
  return os.str();
}

ScriptedAdversary::ScriptedAdversary(CrashPlan plan) : plan_(std::move(plan)) {
  for (const auto& e : plan_.events)
    if (e.round < 1 || e.node < 1)
      throw std::invalid_argument("crash plan event with round or node below 1");
}

std::vector<CrashDecision> ScriptedAdversary::decide(const RoundView& view) {
  std::vector<CrashDecision> out;
  for (const auto& e : plan_.events) {
    if (e.round != view.round)
      continue;
    if (e.node > view.config.n)
      throw HarnessError("crash plan names unknown node " + std::to_string(e.node));
    if (view.nodes[e.node - 1].crashed())
      continue;
    CrashDecision d;
    d.node = e.node;
    d.deliver_all = !e.recipients.has_value();
    if (e.recipients)
      d.delivered = *e.recipients;
    out.push_back(std::move(d));
  }
  return out;
}

RandomAdversary::RandomAdversary(std::uint64_t seed, int f, double p)
    : rng_(seed), f_(f), p_(p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("crash probability must lie in [0, 1]");
}

// 53 high bits to a double in [0, 1); the standard distributions are not
// reproducible across library implementations.
double RandomAdversary::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::vector<CrashDecision> RandomAdversary::decide(const RoundView& view) {
  std::vector<CrashDecision> out;
  int budget = f_ - view.crashes_so_far;
  for (const auto& node : view.nodes) {
    if (budget <= 0)
      break;
    if (!node.running())
      continue;
    if (uniform() >= p_)
      continue;
    CrashDecision d;
    d.node = node.index();
    for (NodeIndex r = 1; r <= view.config.n; ++r)
      if (r != d.node && uniform() < 0.5)
        d.delivered.push_back(r);
    out.push_back(std::move(d));
    --budget;
  }
  return out;
}

std::vector<CrashDecision> WorstCaseAdversary::decide(const RoundView& view) {
  const int n = view.config.n;
  std::vector<CrashDecision> out;
  int budget = f_ - view.crashes_so_far;
  if (budget <= 0)
    return out;
  if (first_active_.empty())
    first_active_.assign(n + 1, 0);

  auto alternate = [&](NodeIndex self, NodeIndex skip) {
    std::vector<NodeIndex> keep;
    bool take = true;
    for (const auto& e : view.outboxes[self - 1]) {
      if (e.to == skip)
        continue;
      if (take)
        keep.push_back(e.to);
      take = !take;
    }
    return keep;
  };

  if (view.round == 1) {
    const int k = std::min((f_ + 1) / 2, n - 1);
    for (NodeIndex i = 1; i <= k; ++i)
      out.push_back({i, false, alternate(i, 0)});
    return out;
  }

  const int g = view.layout.group_count();
  for (const auto& node : view.nodes) {
    const NodeIndex i = node.index();
    if (!node.running() || budget <= 0)
      continue;
    const auto& outbox = view.outboxes[i - 1];
    const bool entry = node.mode() == Mode::Active &&
                       (outbox.empty() || std::holds_alternative<FaultEntry>(outbox.front().msg));
    if (!entry)
      continue;
    if (first_active_[i] == 0)
      first_active_[i] = view.round;
    if (view.round != first_active_[i] + g)
      continue;
    NodeIndex successor = 0;
    for (NodeIndex j = i + 1; j <= n && !successor; ++j)
      if (view.nodes[j - 1].running())
        successor = j;
    out.push_back({i, false, alternate(i, successor)});
    --budget;
  }
  return out;
}

std::unique_ptr<Adversary> make_adversary(const std::string& name, int f, std::uint64_t seed,
                                          double crash_prob, const std::optional<CrashPlan>& plan) {
  if (name == "none")
    return std::make_unique<NoneAdversary>();
  if (name == "worst")
    return std::make_unique<WorstCaseAdversary>(f);
  if (name == "random")
    return std::make_unique<RandomAdversary>(seed, f, crash_prob);
  if (name == "scripted") {
    if (!plan)
      throw std::invalid_argument("the scripted adversary needs a plan file");
    return std::make_unique<ScriptedAdversary>(*plan);
  }
  throw std::invalid_argument("unknown adversary '" + name +
                              "' (expected none, worst, random or scripted)");
}

PlanEnumerator::PlanEnumerator(int n, int f, int horizon, SubsetPolicy policy, int group_count)
    : n_(n), f_(f), horizon_(horizon), policy_(policy) {
  if (n < 1 || f < 0 || f >= n || horizon < 1)
    throw std::invalid_argument("enumerator needs n >= 1, 0 <= f < n and horizon >= 1");
  if (n > kMaxNodes)
    throw std::length_error("enumeration is capped at n = " + std::to_string(kMaxNodes));
  if (f > kMaxFaults)
    throw std::length_error("enumeration is capped at f = " + std::to_string(kMaxFaults));
  if (horizon > kBaseHorizon * group_count)
    throw std::length_error("enumeration horizon is capped at " +
                            std::to_string(kBaseHorizon * group_count));
}

namespace {

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i)
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace

std::uint64_t PlanEnumerator::count() const {
  const std::uint64_t subsets = policy_ == SubsetPolicy::All ? std::uint64_t{1} << (n_ - 1) : 2;
  const std::uint64_t per_crash = static_cast<std::uint64_t>(horizon_) * subsets;
  std::uint64_t total = 0;
  for (int k = 0; k <= f_; ++k) {
    std::uint64_t term = binomial(n_, k);
    for (int i = 0; i < k; ++i)
      term *= per_crash;
    total += term;
  }
  return total;
}

std::uint64_t PlanEnumerator::for_each(const std::function<bool(const CrashPlan&)>& visit) const {
  const int subsets = policy_ == SubsetPolicy::All ? 1 << (n_ - 1) : 2;
  const int per_crash = horizon_ * subsets;

  auto recipients = [&](NodeIndex self, int code) {
    std::vector<NodeIndex> out;
    if (policy_ == SubsetPolicy::Extremes) {
      if (code == 1)
        for (NodeIndex r = 1; r <= n_; ++r)
          if (r != self)
            out.push_back(r);
      return out;
    }
    int bit = 0;
    for (NodeIndex r = 1; r <= n_; ++r) {
      if (r == self)
        continue;
      if (code & (1 << bit))
        out.push_back(r);
      ++bit;
    }
    return out;
  };

  std::uint64_t visited = 0;
  CrashPlan plan;
  for (int k = 0; k <= f_; ++k) {
    std::vector<NodeIndex> chosen(k);
    for (int i = 0; i < k; ++i)
      chosen[i] = i + 1;
    while (true) {
      std::vector<int> digit(k, 0);
      while (true) {
        plan.events.resize(k);
        for (int i = 0; i < k; ++i) {
          plan.events[i].node = chosen[i];
          plan.events[i].round = digit[i] / subsets + 1;
          plan.events[i].recipients = recipients(chosen[i], digit[i] % subsets);
        }
        ++visited;
        if (!visit(plan))
          return visited;
        int pos = k - 1;
        while (pos >= 0 && ++digit[pos] == per_crash)
          digit[pos--] = 0;
        if (pos < 0)
          break;
      }
      int pos = k - 1;
      while (pos >= 0 && chosen[pos] == n_ - k + pos + 1)
        --pos;
      if (pos < 0)
        break;
      ++chosen[pos];
      for (int i = pos + 1; i < k; ++i)
        chosen[i] = chosen[i - 1] + 1;
    }
  }
  return visited;
}

}  // namespace ftgr
