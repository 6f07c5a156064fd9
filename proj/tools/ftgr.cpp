#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftgr/commands.hpp"

namespace {

using namespace ftgr;

std::vector<int> int_list(const std::string& text) {
  DegreeSpec s = DegreeSpec::parse(text);
  if (s.kind != DegreeSpec::Kind::List)
    throw std::invalid_argument("expected a list of integers, got '" + text + "'");
  return s.values;
}

std::vector<std::string> word_list(std::string text) {
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream is(text);
  std::vector<std::string> out;
  for (std::string w; is >> w;)
    out.push_back(w);
  return out;
}

// Output stream for --out: stdout when empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw std::invalid_argument("cannot write '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crash-tolerant degree-sequence realization simulator"};
  app.require_subcommand(1);

  // realize
  auto* realize = app.add_subcommand("realize", "Havel-Hakimi realization of a degree sequence");
  std::vector<std::string> realize_args;
  std::string realize_file;
  realize->add_option("degrees", realize_args, "Degrees, space or comma separated");
  realize->add_option("--degree-file", realize_file, "Read the degrees from a file");

  // shared simulation flags
  int n = 4;
  std::string degrees = "uniform:1";
  std::string degree_file;
  std::string model = "cc";
  std::string adversary = "none";
  std::string plan_file;
  std::uint64_t seed = 1;
  int f = 0;
  int capacity_c = 1;
  int group_size = 0;
  bool strict = true;
  std::string out_path;
  double crash_prob = RandomAdversary::kDefaultCrashProbability;

  auto* simulate = app.add_subcommand("simulate", "Run one execution");
  simulate->add_option("--n", n, "Number of nodes")->check(CLI::PositiveNumber);
  simulate->add_option("--degrees", degrees, "List, uniform:k or random");
  simulate->add_option("--degree-file", degree_file, "Read the degree list from a file");
  simulate->add_option("--model", model, "cc or ncc");
  simulate->add_option("--adversary", adversary, "none, worst, random or scripted");
  simulate->add_option("--plan-file", plan_file, "Crash plan for the scripted adversary");
  simulate->add_option("--seed", seed, "Seed for the adversary and random degrees");
  simulate->add_option("--f", f, "Crash budget");
  simulate->add_option("--capacity-c", capacity_c, "NCC capacity constant");
  simulate->add_option("--group-size", group_size, "NCC group size (0 = ceil(log2 n))");
  simulate->add_option("--strict", strict, "NCC: abort on any capacity breach");
  simulate->add_option("--crash-prob", crash_prob, "Random adversary per-round crash probability");
  simulate->add_option("--out", out_path, "Summary file (default stdout)");
  std::string trace_path;
  simulate->add_option("--trace", trace_path, "Write the execution trace here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a grid of executions and emit CSV");
  std::string sweep_n = "16", sweep_f = "0", sweep_adv = "random";
  int seeds = 1, workers = 1;
  sweep->add_option("--n", sweep_n, "Node counts, comma separated");
  sweep->add_option("--f", sweep_f, "Crash budgets, comma separated");
  sweep->add_option("--adversary", sweep_adv, "Adversaries, comma separated");
  sweep->add_option("--seeds", seeds, "Seeds per point")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "First seed");
  sweep->add_option("--degrees", degrees, "List, uniform:k or random");
  sweep->add_option("--model", model, "cc or ncc");
  sweep->add_option("--capacity-c", capacity_c, "NCC capacity constant");
  sweep->add_option("--group-size", group_size, "NCC group size (0 = ceil(log2 n))");
  sweep->add_option("--strict", strict, "NCC: abort on any capacity breach");
  sweep->add_option("--crash-prob", crash_prob, "Random adversary per-round crash probability");
  sweep->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_path, "CSV file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Exhaustive crash-schedule enumeration");
  VerifyOptions vo;
  std::string mutant = "none", subsets = "all", verify_degrees;
  bool keep_going = false;
  verify->add_option("--n", vo.n, "Number of nodes (<= 4)");
  verify->add_option("--f", vo.f, "Crash budget (<= 3)");
  verify->add_option("--model", model, "cc or ncc");
  verify->add_option("--group-size", vo.group_size, "NCC group size (0 = ceil(log2 n))");
  verify->add_option("--horizon", vo.horizon, "Last crash round (0 = default)");
  verify->add_option("--subsets", subsets, "all or extremes");
  verify->add_option("--degrees", verify_degrees, "Degree list (default 0..n-1)");
  verify->add_option("--mutant", mutant, "none, heard-once, skip-fold or invert-fold");
  verify->add_flag("--all", keep_going, "Count every failure instead of stopping at the first");
  verify->add_option("--out", out_path, "Write the counterexample trace here");

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a trace and compare");
  std::string replay_path;
  std::string replay_model;
  replay->add_option("trace", replay_path, "Trace file")->required();
  replay->add_option("--model", replay_model, "Reject traces recorded under another model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (realize->parsed()) {
      std::string text;
      if (!realize_file.empty()) {
        std::ifstream in(realize_file);
        if (!in) {
          std::cerr << "error: cannot open '" << realize_file << "'\n";
          return kExitUsage;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
      }
      for (const auto& a : realize_args)
        text += " " + a;
      return cmd_realize(text, std::cout, std::cerr);
    }

    if (simulate->parsed()) {
      SimulateOptions so;
      auto& c = so.config;
      c.n = n;
      c.model = parse_model(model);
      c.f = f;
      c.capacity_c = capacity_c;
      c.group_size = group_size;
      c.strict = strict;
      c.seed = seed;
      c.adversary = adversary;
      c.degrees = degree_file.empty() ? DegreeSpec::parse(degrees).resolve(n, seed)
                                      : read_degree_file(degree_file);
      so.crash_prob = crash_prob;
      so.trace_path = trace_path;
      if (!plan_file.empty()) {
        std::ifstream in(plan_file);
        if (!in)
          throw std::invalid_argument("cannot open plan file '" + plan_file + "'");
        so.plan = CrashPlan::parse(in);
        if (adversary == "none")
          c.adversary = "scripted";
      }
      Output o(out_path);
      return cmd_simulate(so, o.get(), std::cerr);
    }

    if (sweep->parsed()) {
      SweepOptions so;
      so.ns = int_list(sweep_n);
      so.fs = int_list(sweep_f);
      so.adversaries = word_list(sweep_adv);
      so.model = parse_model(model);
      so.seeds = seeds;
      so.base_seed = seed;
      so.degrees = DegreeSpec::parse(degrees);
      so.capacity_c = capacity_c;
      so.group_size = group_size;
      so.strict = strict;
      so.crash_prob = crash_prob;
      so.workers = workers;
      Output o(out_path);
      return cmd_sweep(so, o.get(), std::cerr);
    }

    if (verify->parsed()) {
      vo.model = parse_model(model);
      if (subsets == "all")
        vo.policy = SubsetPolicy::All;
      else if (subsets == "extremes")
        vo.policy = SubsetPolicy::Extremes;
      else
        throw std::invalid_argument("unknown subset policy '" + subsets + "'");
      if (mutant == "none")
        vo.mutation = Mutation::None;
      else if (mutant == "heard-once")
        vo.mutation = Mutation::KeepLocalOnHeardOnce;
      else if (mutant == "skip-fold")
        vo.mutation = Mutation::SkipBelowIndexFold;
      else if (mutant == "invert-fold")
        vo.mutation = Mutation::InvertBelowIndexFold;
      else
        throw std::invalid_argument("unknown mutant '" + mutant + "'");
      if (!verify_degrees.empty())
        vo.degrees = int_list(verify_degrees);
      vo.stop_at_first = !keep_going;
      return cmd_verify(vo, out_path, std::cout, std::cerr);
    }

    if (replay->parsed()) {
      std::optional<Model> expected;
      if (!replay_model.empty())
        expected = parse_model(replay_model);
      return cmd_replay(replay_path, expected, std::cout, std::cerr);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
