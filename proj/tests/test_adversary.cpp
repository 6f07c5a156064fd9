#include "doctest.h"
#include "ftgr/adversary.hpp"
#include "ftgr/checks.hpp"
#include "ftgr/experiment.hpp"

using namespace ftgr;

namespace {

SimConfig config(std::vector<int> degrees, int f) {
  SimConfig c;
  c.n = static_cast<int>(degrees.size());
  c.degrees = std::move(degrees);
  c.f = f;
  return c;
}

}  // namespace

TEST_CASE("plan text round trip") {
  const auto plan = CrashPlan::parse("# comment\n3 2 1 4\n1 4 *\n5 1\n");
  REQUIRE(plan.events.size() == 3);
  CHECK(plan.events[0] == CrashEvent{3, 2, std::vector<NodeIndex>{1, 4}});
  CHECK(plan.events[1] == CrashEvent{1, 4, std::nullopt});
  CHECK(plan.events[2] == CrashEvent{5, 1, std::vector<NodeIndex>{}});
  CHECK(CrashPlan::parse(plan.format()) == plan);
  CHECK(CrashPlan::parse("").events.empty());
}

TEST_CASE("malformed plans are rejected") {
  CHECK_THROWS_AS(CrashPlan::parse("x 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(CrashPlan::parse("0 1\n").validate(3), std::invalid_argument);
  CHECK_THROWS_AS(CrashPlan::parse("1 5\n").validate(3), std::invalid_argument);
  CHECK_THROWS_AS(CrashPlan::parse("1 2\n3 2\n").validate(3), std::invalid_argument);
  CHECK_THROWS_AS(CrashPlan::parse("1 2 9\n").validate(3), std::invalid_argument);
}

TEST_CASE("an empty plan behaves like no adversary") {
  auto c = config({2, 2, 1, 1}, 2);
  c.record_trace = true;
  NoneAdversary none;
  ScriptedAdversary empty{CrashPlan{}};
  const auto a = run(c, none);
  const auto b = run(c, empty);
  CHECK(a.metrics.rounds == b.metrics.rounds);
  CHECK(a.metrics.messages == b.metrics.messages);
  CHECK(a.trace.lines().back() == b.trace.lines().back());
}

TEST_CASE("worst case with f = 0 behaves like no adversary") {
  const auto c = config({1, 1, 1, 1, 2, 2}, 0);
  NoneAdversary none;
  WorstCaseAdversary worst(0);
  CHECK(run(c, none).metrics.messages == run(c, worst).metrics.messages);
  CHECK(run(c, worst).metrics.crashes == 0);
}

TEST_CASE("u1 crashing after one copy hands over at A(2) = 3 + 3") {
  auto c = config({1, 1, 1, 1}, 2);
  c.record_trace = true;
  // u4 is silent throughout, u1 sends S4 once and crashes in round 4.
  ScriptedAdversary adv(CrashPlan::parse("1 4\n4 1\n"));
  const auto r = run(c, adv);
  REQUIRE(check_run(c, r).ok);
  CHECK(r.trace.lines()[6].find("[2,\"listening\",\"active\"]") != std::string::npos);
  CHECK(r.metrics.rounds == 8);
  // 2 sweeps by three nodes, one S4 copy from u1, two from u2, one AllOkay.
  CHECK(r.metrics.messages == 2 * 3 * 3 + 3 + 2 * 3 + 3);
}

TEST_CASE("random adversary respects its budget and is reproducible") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto c = config({3, 3, 2, 2, 1, 1, 0, 0}, 3);
    RandomAdversary a(seed, 3, 0.3), b(seed, 3, 0.3);
    const auto x = run(c, a);
    const auto y = run(c, b);
    CHECK(x.metrics.crashes <= 3);
    CHECK(x.metrics.rounds == y.metrics.rounds);
    CHECK(x.metrics.messages == y.metrics.messages);
    CHECK(check_run(c, x).ok);
  }
}

TEST_CASE("seed-pinned random regressions") {
  struct Pinned {
    std::uint64_t seed;
    int rounds;
    std::uint64_t messages;
    int crashes;
  };
  for (const auto& p : {Pinned{3, 5, 287, 2}, Pinned{11, 5, 292, 3}, Pinned{42, 8, 285, 2}}) {
    SimConfig c;
    c.n = 12;
    c.f = 5;
    c.seed = p.seed;
    c.degrees = DegreeSpec::parse("random").resolve(12, p.seed);
    const auto row = run_one(c, "random", 0.05);
    CAPTURE(p.seed);
    CHECK(row.rounds == p.rounds);
    CHECK(row.messages == p.messages);
    CHECK(row.crashes == p.crashes);
    CHECK(row.agreement_ok);
  }
}

TEST_CASE("worst case rounds grow linearly in f at n = 16") {
  std::vector<double> fs, rounds;
  for (int f = 1; f <= 8; ++f) {
    const auto c = config(std::vector<int>(16, 3), f);
    WorstCaseAdversary worst(f);
    const auto r = run(c, worst);
    CAPTURE(f);
    CHECK(r.metrics.crashes == f);
    CHECK(r.metrics.rounds <= 3 + 5 * f);
    CHECK(check_run(c, r).ok);
    if (f > 2)
      CHECK(r.metrics.rounds > rounds[f - 3]);
    fs.push_back(f);
    rounds.push_back(r.metrics.rounds);
  }
  const auto fit = least_squares(fs, rounds);
  CHECK(fit.slope >= 1.0);
  CHECK(fit.slope <= 5.0);
}

TEST_CASE("enumerator counts") {
  for (int h : {1, 2, 5, 14}) {
    // One fault-free plan, plus one of two nodes at one of h rounds with one
    // of two subsets of the single other node.
    CHECK(PlanEnumerator(2, 1, h, SubsetPolicy::All).count() == 1 + 4 * static_cast<std::uint64_t>(h));
  }
  // n = 3: each of the other two nodes is in or out of the subset.
  const int h = 3;
  std::uint64_t expect = 0;
  for (int mask = 0; mask < 8; ++mask) {
    std::uint64_t ways = 1;
    for (int i = 0; i < 3; ++i)
      if (mask & (1 << i))
        ways *= h * 4;
    if (__builtin_popcount(mask) <= 2)
      expect += ways;
  }
  const PlanEnumerator e(3, 2, h, SubsetPolicy::All);
  CHECK(e.count() == expect);
  std::set<std::string> distinct;
  CHECK(e.for_each([&](const CrashPlan& p) {
    p.validate(3);
    distinct.insert(p.format());
    return true;
  }) == expect);
  CHECK(distinct.size() == expect);
  CHECK(PlanEnumerator(3, 2, h, SubsetPolicy::Extremes).count() == 1 + 3 * 2 * h + 3 * 4 * h * h);
  CHECK(e.for_each([](const CrashPlan&) { return false; }) == 1);
}

TEST_CASE("enumerator caps") {
  CHECK_THROWS_AS(PlanEnumerator(5, 1, 14, SubsetPolicy::All), std::length_error);
  CHECK_THROWS_AS(PlanEnumerator(4, 4, 14, SubsetPolicy::All), std::invalid_argument);
  CHECK_THROWS_AS(PlanEnumerator(4, 2, 15, SubsetPolicy::All), std::length_error);
  CHECK_NOTHROW(PlanEnumerator(4, 2, 28, SubsetPolicy::All, 2));
}

TEST_CASE("exhaustive verification at n = 2") {
  VerifyOptions o;
  o.n = 2;
  o.f = 1;
  const auto report = verify_exhaustive(o);
  CHECK(report.plans == 1 + 4 * 14);
  CHECK(report.ok());
  CHECK(report.horizon_short == 0);
}

TEST_CASE("make_adversary") {
  CHECK(make_adversary("none", 0, 1, 0.02, {})->name() == "none");
  CHECK(make_adversary("worst", 2, 1, 0.02, {})->name() == "worst");
  CHECK(make_adversary("random", 2, 1, 0.02, {})->name() == "random");
  CHECK(make_adversary("scripted", 2, 1, 0.02, CrashPlan{})->name() == "scripted");
  CHECK_THROWS_AS(make_adversary("scripted", 2, 1, 0.02, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_adversary("bogus", 2, 1, 0.02, {}), std::invalid_argument);
}
