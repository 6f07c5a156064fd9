#include "ftgr/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace ftgr {

namespace {

std::vector<int> parse_ints(std::string text, const std::string& what) {
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream is(text);
  std::vector<int> out;
  for (std::string t; is >> t;) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || v < 0 || v > 1'000'000'000)
      throw std::invalid_argument("bad " + what + " '" + t + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string view_string(const DegreeView& view) {
  std::string s = "{";
  for (const auto& [i, d] : view.entries()) {
    if (s.size() > 1)
      s += ',';
    s += std::to_string(i) + ":" + std::to_string(d);
  }
  return s + "}";
}

}  // namespace

std::vector<int> read_degree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open degree file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ints(ss.str(), "degree");
}

int cmd_realize(const std::string& sequence, std::ostream& out, std::ostream& err) {
  std::vector<int> degrees;
  try {
    degrees = parse_ints(sequence, "degree");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const auto outcome = havel_hakimi(DegreeSequence::from_degrees(degrees));
  out << format_outcome(outcome) << '\n';
  return is_realized(outcome) ? kExitOk : kExitFailed;
}

void write_run_summary(std::ostream& os, const SimConfig& c, const RunResult& r) {
  const auto& m = r.metrics;
  os << "model " << to_string(c.model) << "  n " << c.n << "  f " << c.f << "  adversary "
     << (c.adversary.empty() ? "none" : c.adversary) << '\n';
  if (c.model == Model::NCC)
    os << "groups " << c.layout().group_count() << " of " << c.layout().group_size()
       << "  capacity " << Capacity{c.capacity_c}.limit(c.layout()) << '\n';
  os << "rounds " << m.rounds << '\n';
  os << "messages " << m.messages << '\n';
  os << "crashes " << m.crashes << '\n';
  os << "allokay_senders " << m.allokay_senders << '\n';
  os << "max_send " << m.max_send << "  max_receive " << m.max_receive << "  dropped " << m.dropped
     << '\n';
  os << "max_active " << r.monitors.max_active << '\n';
  const Verdict agreement = check_agreement(r);
  const Verdict validity = check_validity(c, r);
  os << "agreement " << (agreement.ok ? "ok" : "FAILED: " + agreement.problem) << '\n';
  os << "validity " << (validity.ok ? "ok" : "FAILED: " + validity.problem) << '\n';
  os << "monitors " << (r.monitors.ok() ? "ok" : "FAILED: " + r.monitors.first_problem) << '\n';
  for (const auto& o : r.nodes) {
    os << 'u' << o.index << ' ' << to_string(o.mode);
    if (o.crash_round)
      os << " (round " << o.crash_round << ')';
    else
      os << "  D'=" << view_string(o.view)
         << "  verdict=" << (o.verdict ? format_outcome(*o.verdict) : std::string("-"));
    os << '\n';
  }
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  SimConfig config = options.config;
  config.record_trace = !options.trace_path.empty();
  std::unique_ptr<Adversary> adversary;
  try {
    config.validate();
    if (options.plan)
      options.plan->validate(config.n);
    adversary = make_adversary(config.adversary.empty() ? "none" : config.adversary, config.f,
                               config.seed, options.crash_prob, options.plan);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  auto save = [&](const ExecutionTrace& trace) {
    if (options.trace_path.empty())
      return;
    std::ofstream f(options.trace_path);
    if (!f)
      throw std::runtime_error("cannot write trace '" + options.trace_path + "'");
    trace.write(f);
  };

  try {
    const RunResult result = run(config, *adversary);
    save(result.trace);
    write_run_summary(out, config, result);
    return check_run(config, result).ok ? kExitOk : kExitFailed;
  } catch (const ExecutionError& e) {
    save(e.trace());
    err << "execution failed: " << e.what() << '\n';
    return kExitFailed;
  } catch (const HarnessError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<SweepRow> rows;
  try {
    rows = run_sweep(options);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  write_csv(out, rows);
  write_summary(out, rows);
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) {
    return r.agreement_ok && r.validity_ok && r.monitors_ok;
  });
  return ok ? kExitOk : kExitFailed;
}

int cmd_verify(const VerifyOptions& options, const std::string& counterexample_path,
               std::ostream& out, std::ostream& err) {
  VerifyReport report;
  try {
    report = verify_exhaustive(options);
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  out << "plans " << report.plans << '\n';
  out << "failures " << report.failures << '\n';
  out << "horizon_short " << report.horizon_short << '\n';
  out << "max_rounds " << report.max_rounds << '\n';
  out << "max_active " << report.max_active << '\n';
  if (report.first) {
    out << "counterexample: " << report.first->problem << '\n';
    out << "plan:\n" << report.first->plan.format();
    if (!counterexample_path.empty()) {
      std::ofstream f(counterexample_path);
      report.first->trace.write(f);
      out << "trace written to " << counterexample_path << '\n';
    } else {
      out << "trace:\n";
      report.first->trace.write(out);
    }
  }
  out << (report.ok() ? "PASS" : "FAIL") << '\n';
  return report.ok() ? kExitOk : kExitFailed;
}

ReplayReport replay(const ExecutionTrace& trace, std::optional<Model> expected_model) {
  using ojson = nlohmann::ordered_json;
  if (trace.empty())
    throw std::invalid_argument("empty trace");
  SimConfig config = config_from_header(trace.lines().front());
  if (expected_model && *expected_model != config.model)
    throw std::invalid_argument(std::string("model mismatch: trace was recorded under ") +
                                to_string(config.model) + ", replay requested " +
                                to_string(*expected_model));
  config.record_trace = true;

  // Unreadable records contribute no crashes; the comparison below then
  // reports them as a divergence.
  CrashPlan plan;
  for (std::size_t i = 1; i < trace.lines().size(); ++i) {
    const ojson rec = ojson::parse(trace.lines()[i], nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("round") ||
        !rec.contains("crashes") || !rec["round"].is_number_integer() ||
        !rec["crashes"].is_array())
      continue;
    for (const auto& c : rec["crashes"]) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_array())
        continue;
      CrashEvent e;
      e.round = rec["round"].get<int>();
      e.node = c[0].get<int>();
      e.recipients.emplace();
      for (const auto& r : c[1])
        if (r.is_number_integer())
          e.recipients->push_back(r.get<int>());
      if (e.round >= 1 && e.node >= 1 && e.node <= config.n)
        plan.events.push_back(std::move(e));
    }
  }

  ExecutionTrace again;
  ScriptedAdversary adversary(plan);
  try {
    again = run(config, adversary).trace;
  } catch (const ExecutionError& e) {
    again = e.trace();
  } catch (const HarnessError& e) {
    return {false, 1, std::string("crash records are inconsistent: ") + e.what()};
  }

  const auto& a = trace.lines();
  const auto& b = again.lines();
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i)
    if (a[i] != b[i])
      return {false, static_cast<int>(i), "record " + std::to_string(i) + " differs"};
  if (a.size() != b.size())
    return {false, static_cast<int>(common),
            "trace has " + std::to_string(a.size()) + " records, replay produced " +
                std::to_string(b.size())};
  return {true, 0, "identical"};
}

int cmd_replay(const std::string& path, std::optional<Model> expected_model, std::ostream& out,
               std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot open trace '" << path << "'\n";
    return kExitUsage;
  }
  ReplayReport report;
  try {
    report = replay(ExecutionTrace::read(in), expected_model);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (report.identical) {
    out << "identical\n";
    return kExitOk;
  }
  out << "divergence at round " << report.divergent_round << ": " << report.detail << '\n';
  return kExitFailed;
}

}  // namespace ftgr
