#include "doctest.h"
#include "ftgr/adversary.hpp"
#include "ftgr/checks.hpp"
#include "json.hpp"

using namespace ftgr;

namespace {

SimConfig config(std::vector<int> degrees, int f = 0) {
  SimConfig c;
  c.n = static_cast<int>(degrees.size());
  c.degrees = std::move(degrees);
  c.f = f;
  return c;
}

// Crashes more nodes in round 1 than its budget allows.
class Greedy : public Adversary {
 public:
  std::vector<CrashDecision> decide(const RoundView& v) override {
    if (v.round != 1)
      return {};
    return {{1, false, {}}, {2, false, {}}};
  }
  std::string name() const override { return "greedy"; }
};

}  // namespace

TEST_CASE("fault-free run on four nodes") {
  NoneAdversary none;
  const auto c = config({1, 1, 1, 1});
  const auto r = run(c, none);
  CHECK(r.metrics.rounds == 3);
  CHECK(r.metrics.messages == 2 * 4 * 3 + 3);
  CHECK(r.metrics.per_round == std::vector<std::uint64_t>{12, 12, 3});
  CHECK(r.metrics.allokay_senders == 1);
  for (const auto& o : r.nodes) {
    CHECK(o.mode == Mode::Exit);
    REQUIRE(o.verdict);
    CHECK(format_outcome(*o.verdict) == "1-2 3-4");
  }
  CHECK(check_run(c, r).ok);
}

TEST_CASE("single node run") {
  NoneAdversary none;
  const auto c = config({0});
  const auto r = run(c, none);
  CHECK(r.metrics.rounds == 3);
  CHECK(r.metrics.messages == 0);
  CHECK(r.nodes[0].view.entries() == std::vector<std::pair<NodeIndex, int>>{{1, 0}});
}

TEST_CASE("u2 crashing in round 1 reaching only u3") {
  const auto c = config({1, 2, 2, 1}, 1);
  ScriptedAdversary adv(CrashPlan::parse("1 2 3\n"));
  const auto r = run(c, adv);
  CHECK(check_run(c, r).ok);
  for (const auto& o : r.nodes)
    if (!o.crash_round)
      CHECK(o.view.size() >= 3);
  CHECK(r.nodes[1].crash_round == 1);
  // u3 heard u2 once: Faulty. u1 and u4 never did: Smite. u1 rebroadcasts
  // the smite twice and the degree of u2 is dropped everywhere.
  CHECK_FALSE(r.nodes[0].view.contains(2));
  CHECK_FALSE(r.nodes[2].view.contains(2));
}

TEST_CASE("deliver_round semantics") {
  std::vector<std::vector<Envelope>> out(6);
  for (int t = 2; t <= 6; ++t)
    out[0].push_back({1, t, AllOkay{}});
  for (int t = 1; t <= 6; ++t)
    if (t != 2)
      out[1].push_back({2, t, AllOkay{}});

  SUBCASE("live sender delivers everything") {
    Metrics m;
    const auto in = deliver_round(out, {}, {}, m);
    CHECK(m.messages == 10);
    CHECK(in[2].size() == 2);
  }
  SUBCASE("crashing sender with an empty subset delivers nothing") {
    Metrics m;
    const std::vector<NodeIndex> crash{1};
    const auto in = deliver_round(out, crash, {}, m);
    CHECK(m.messages == 5);
    CHECK(in[2].size() == 1);
  }
  SUBCASE("crashing sender with the full subset looks live") {
    Metrics m;
    const std::vector<NodeIndex> crash{1};
    const std::vector<DeliverySubset> subsets{{1, {2, 3, 4, 5, 6}}};
    deliver_round(out, crash, subsets, m);
    CHECK(m.messages == 10);
  }
  SUBCASE("subset for a live sender is a harness error") {
    Metrics m;
    const std::vector<DeliverySubset> subsets{{2, {3}}};
    CHECK_THROWS_AS(deliver_round(out, {}, subsets, m), HarnessError);
  }
}

TEST_CASE("budget violations are rejected") {
  Greedy g;
  CHECK_THROWS_AS(run(config({1, 1, 1}, 1), g), HarnessError);
}

TEST_CASE("configuration validation") {
  NoneAdversary none;
  CHECK_THROWS_AS(run(config({}), none), std::invalid_argument);
  CHECK_THROWS_AS(run(config({1, 1}, 2), none), std::invalid_argument);
  auto c = config({1, 1});
  c.degrees.push_back(3);
  CHECK_THROWS_AS(run(c, none), std::invalid_argument);
  CHECK(config({1, 1, 1}, 2).round_cap() == 10 * 5 + 20);
}

TEST_CASE("no delivery from a node after its crash round") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto c = config({3, 2, 2, 1, 1, 1}, 4);
    c.record_trace = true;
    RandomAdversary adv(seed, 4, 0.2);
    const auto r = run(c, adv);
    std::map<int, int> crashed_at;
    for (std::size_t i = 1; i + 1 < r.trace.lines().size(); ++i) {
      const auto rec = nlohmann::json::parse(r.trace.lines()[i]);
      const int round = rec["round"].get<int>();
      for (const auto& d : rec["deliveries"]) {
        const int from = d[0].get<int>();
        if (crashed_at.count(from))
          CHECK(crashed_at[from] == round);
      }
      for (const auto& cr : rec["crashes"])
        crashed_at[cr[0].get<int>()] = round;
    }
    CHECK(check_run(c, r).ok);
  }
}

TEST_CASE("identical configuration and seed give identical traces") {
  auto c = config({2, 2, 2, 1, 1}, 3);
  c.record_trace = true;
  RandomAdversary a(77, 3, 0.1), b(77, 3, 0.1);
  CHECK(run(c, a).trace.str() == run(c, b).trace.str());
}

TEST_CASE("trace header round-trips the configuration") {
  auto c = config({2, 0, 1}, 1);
  c.model = Model::NCC;
  c.capacity_c = 2;
  c.seed = 9;
  c.adversary = "random";
  c.protocol.mutation = Mutation::SkipBelowIndexFold;
  const auto back = config_from_header(trace_header(c));
  CHECK(back.n == 3);
  CHECK(back.degrees == c.degrees);
  CHECK(back.model == Model::NCC);
  CHECK(back.capacity_c == 2);
  CHECK(back.group_size == c.layout().group_size());
  CHECK(back.seed == 9);
  CHECK(back.adversary == "random");
  CHECK(back.protocol.mutation == Mutation::SkipBelowIndexFold);
  CHECK_THROWS_AS(config_from_header("{\"format\":\"ftgr-trace\",\"version\":2}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_header("not json"), std::invalid_argument);
}

TEST_CASE("message accounting at f = 0") {
  NoneAdversary none;
  for (int n : {2, 3, 5, 9, 17}) {
    const auto r = run(config(std::vector<int>(n, 1)), none);
    CHECK(r.metrics.messages == static_cast<std::uint64_t>(2 * n * (n - 1) + (n - 1)));
    CHECK(r.metrics.rounds == 3);
  }
}
