#include <map>

#include "doctest.h"
#include "ftgr/adversary.hpp"
#include "ftgr/checks.hpp"
#include "json.hpp"

using namespace ftgr;

TEST_CASE("ceil_log2") {
  CHECK(ceil_log2(1) == 1);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(8) == 3);
  CHECK(ceil_log2(9) == 4);
  CHECK(ceil_log2(64) == 6);
}

TEST_CASE("group layout for n = 8") {
  const auto l = GroupLayout::capacitated(8);
  CHECK(l.group_size() == 3);
  CHECK(l.group_count() == 3);
  CHECK(l.last_member(1) - l.first_member(1) + 1 == 3);
  CHECK(l.last_member(2) - l.first_member(2) + 1 == 3);
  CHECK(l.last_member(3) - l.first_member(3) + 1 == 2);
  CHECK(l.group_of(1) == 1);
  CHECK(l.group_of(4) == 2);
  CHECK(l.group_of(8) == 3);
  std::vector<NodeIndex> out;
  l.members_except(2, 5, out);
  CHECK(out == std::vector<NodeIndex>{4, 6});
  CHECK(GroupLayout::clique(8).group_count() == 1);
}

TEST_CASE("one broadcast sweep covers every ordered pair exactly once within capacity") {
  for (int n = 2; n <= 70; ++n) {
    const auto l = GroupLayout::capacitated(n);
    const int g = l.group_count();
    std::map<std::pair<int, int>, int> seen;
    std::vector<NodeIndex> targets;
    for (int step = 0; step < g; ++step) {
      std::vector<int> received(n + 1, 0);
      for (NodeIndex i = 1; i <= n; ++i) {
        l.members_except(broadcast_destination(l.group_of(i), step, g), i, targets);
        CHECK(static_cast<int>(targets.size()) <= l.group_size());
        for (NodeIndex t : targets) {
          ++seen[{i, t}];
          ++received[t];
        }
      }
      for (int r : received)
        CHECK(r <= l.group_size());
    }
    CHECK(static_cast<int>(seen.size()) == n * (n - 1));
    for (const auto& [pair, count] : seen)
      CHECK(count == 1);
  }
}

TEST_CASE("global update visits own group first and wraps") {
  CHECK(update_group(2, 0, 3) == 2);
  CHECK(update_group(2, 1, 3) == 3);
  CHECK(update_group(2, 2, 3) == 1);
  CHECK(update_group(1, 0, 1) == 1);
}

TEST_CASE("enforce_capacity keeps the lowest senders") {
  std::vector<Envelope> small;
  for (int s = 1; s <= 3; ++s)
    small.push_back({s, 9, AllOkay{}});
  CHECK(enforce_capacity(small, 5).empty());
  CHECK(small.size() == 3);

  std::vector<Envelope> big;
  for (int s = 1; s <= 7; ++s)
    big.push_back({s, 9, AllOkay{}});
  const auto dropped = enforce_capacity(big, 5);
  REQUIRE(big.size() == 5);
  CHECK(big.back().from == 5);
  REQUIRE(dropped.size() == 2);
  CHECK(dropped.front().from == 6);
}

TEST_CASE("NCC activation gap scales with the group count") {
  CHECK(activation_due(3, ListeningState{2, 40}, 3 * 4) == 52);
}

namespace {

SimConfig ncc_config(int n, int f) {
  SimConfig c;
  c.n = n;
  c.f = f;
  c.model = Model::NCC;
  c.record_trace = true;
  for (int i = 1; i <= n; ++i)
    c.degrees.push_back(i % 3);
  return c;
}

}  // namespace

TEST_CASE("NCC fault-free schedule for n = 8") {
  NoneAdversary none;
  const auto r = run(ncc_config(8, 0), none);
  // Two 3-round sweeps, activation of u1 at 3G = 9, then a 3-round update.
  CHECK(r.metrics.rounds == 11);
  CHECK(r.metrics.messages == 2 * 8 * 7 + 7);
  CHECK(r.metrics.max_receive <= 3);
  CHECK(r.metrics.max_send <= 3);
  CHECK(r.metrics.dropped == 0);
  CHECK(check_run(ncc_config(8, 0), r).ok);
}

TEST_CASE("one faulty entry at G = 4 takes 8 rounds of sends") {
  auto c = ncc_config(16, 1);
  REQUIRE(c.layout().group_count() == 4);
  // u16 stays silent in the second sweep, so every node heard it once.
  ScriptedAdversary adv(CrashPlan::parse("5 16\n"));
  const auto r = run(c, adv);
  REQUIRE(check_run(c, r).ok);
  std::vector<int> entry_rounds;
  std::map<int, std::set<int>> groups;
  for (std::size_t i = 1; i + 1 < r.trace.lines().size(); ++i) {
    const auto rec = nlohmann::json::parse(r.trace.lines()[i]);
    const int round = rec["round"].get<int>();
    for (const auto& d : rec["deliveries"])
      if (d[2].get<std::string>().rfind("F16:", 0) == 0) {
        CHECK(d[0].get<int>() == 1);
        if (entry_rounds.empty() || entry_rounds.back() != round)
          entry_rounds.push_back(round);
        groups[round].insert(c.layout().group_of(d[1].get<int>()));
      }
  }
  CHECK(entry_rounds == std::vector<int>{12, 13, 14, 15, 16, 17, 18, 19});
  for (int k = 0; k < 8; ++k)
    CHECK(groups[12 + k] == std::set<int>{k % 4 + 1});
  CHECK(r.metrics.rounds == 23);
}

TEST_CASE("NCC with a single group matches CC") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 3 + static_cast<int>(seed % 5);
    const int f = static_cast<int>(seed % n);
    SimConfig cc;
    cc.n = n;
    cc.f = f;
    cc.record_trace = true;
    for (int i = 1; i <= n; ++i)
      cc.degrees.push_back((i * 7) % n);
    SimConfig ncc = cc;
    ncc.model = Model::NCC;
    ncc.group_size = n;
    REQUIRE(ncc.layout().group_count() == 1);

    RandomAdversary a(seed, f, 0.2), b(seed, f, 0.2);
    const auto x = run(cc, a);
    const auto y = run(ncc, b);
    CAPTURE(seed);
    CHECK(x.metrics.rounds == y.metrics.rounds);
    CHECK(x.metrics.messages == y.metrics.messages);
    for (int i = 0; i < n; ++i) {
      CHECK(x.nodes[i].view == y.nodes[i].view);
      CHECK(x.nodes[i].verdict == y.nodes[i].verdict);
    }
    REQUIRE(x.trace.lines().size() == y.trace.lines().size());
    for (std::size_t i = 1; i < x.trace.lines().size(); ++i)
      CHECK(x.trace.lines()[i] == y.trace.lines()[i]);
  }
}

TEST_CASE("NCC exhaustive enumeration at n = 3") {
  VerifyOptions o;
  o.n = 3;
  o.f = 2;
  o.model = Model::NCC;
  const auto report = verify_exhaustive(o);
  CHECK(report.plans == PlanEnumerator(3, 2, 28, SubsetPolicy::All, 2).count());
  CHECK(report.ok());
  CHECK(report.max_active <= 1);
}

TEST_CASE("NCC never exceeds capacity under random crashes") {
  for (int n : {8, 16, 32})
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto c = ncc_config(n, 4);
      c.record_trace = false;
      RandomAdversary a(seed, 4, 0.05);
      const auto r = run(c, a);
      CHECK(r.metrics.max_receive <= ceil_log2(n));
      CHECK(r.metrics.max_send <= ceil_log2(n));
      CHECK(r.monitors.capacity);
    }
}
