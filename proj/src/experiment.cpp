#include "ftgr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "ftgr/adversary.hpp"
#include "ftgr/checks.hpp"

namespace ftgr {

namespace {

int parse_int(const std::string& t, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.size() || t.empty())
    throw std::invalid_argument("bad " + what + " '" + t + "'");
  return v;
}

}  // namespace

DegreeSpec DegreeSpec::parse(const std::string& text) {
  DegreeSpec spec;
  if (text == "random") {
    spec.kind = Kind::Random;
    return spec;
  }
  if (text.rfind("uniform:", 0) == 0) {
    spec.kind = Kind::Uniform;
    spec.uniform = parse_int(text.substr(8), "uniform degree");
    if (spec.uniform < 0)
      throw std::invalid_argument("degrees must be non-negative");
    return spec;
  }
  spec.kind = Kind::List;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream is(normalized);
  for (std::string t; is >> t;) {
    const int d = parse_int(t, "degree");
    if (d < 0)
      throw std::invalid_argument("degrees must be non-negative");
    spec.values.push_back(d);
  }
  if (spec.values.empty())
    throw std::invalid_argument("empty degree list");
  return spec;
}

std::vector<int> DegreeSpec::resolve(int n, std::uint64_t seed) const {
  switch (kind) {
    case Kind::List:
      if (static_cast<int>(values.size()) != n)
        throw std::invalid_argument("degree list has " + std::to_string(values.size()) +
                                    " entries, expected n = " + std::to_string(n));
      return values;
    case Kind::Uniform: return std::vector<int>(n, uniform);
    case Kind::Random: return random_graphic_degrees(n, seed);
  }
  return {};
}

std::vector<int> random_graphic_degrees(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> d(n);
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    for (int& x : d)
      x = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (erdos_gallai(DegreeSequence::from_degrees(d)))
      return d;
  }
  throw std::runtime_error("no graphic sequence drawn for n = " + std::to_string(n));
}

SweepRow run_one(const SimConfig& config, const std::string& adversary, double crash_prob) {
  SweepRow row;
  row.n = config.n;
  row.f = config.f;
  row.model = config.model;
  row.adversary = adversary;
  row.seed = config.seed;
  auto adv = make_adversary(adversary, config.f, config.seed, crash_prob, std::nullopt);
  try {
    const RunResult r = run(config, *adv);
    row.rounds = r.metrics.rounds;
    row.messages = r.metrics.messages;
    row.crashes = r.metrics.crashes;
    row.allokay_senders = r.metrics.allokay_senders;
    row.max_active = r.monitors.max_active;
    row.max_send = r.metrics.max_send;
    row.max_receive = r.metrics.max_receive;
    row.dropped = r.metrics.dropped;
    row.agreement_ok = check_agreement(r).ok;
    row.validity_ok = check_validity(config, r).ok;
    row.monitors_ok = r.monitors.ok();
    row.verdict = "unrealizable";
    for (const auto& o : r.nodes)
      if (o.crash_round == 0 && o.verdict && is_realized(*o.verdict))
        row.verdict = "realized";
  } catch (const ExecutionError& e) {
    row.verdict = std::string("error: ") + e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepOptions& o) {
  for (const auto& adv : o.adversaries)
    if (adv != "none" && adv != "worst" && adv != "random")
      throw std::invalid_argument("sweep adversary must be none, worst or random, got '" + adv +
                                  "'");
  std::vector<SimConfig> jobs;
  std::vector<std::string> adversary_of;
  for (int n : o.ns)
    for (int f : o.fs)
      for (const auto& adv : o.adversaries)
        for (int s = 0; s < o.seeds; ++s) {
          SimConfig c;
          c.n = n;
          c.f = f;
          c.model = o.model;
          c.capacity_c = o.capacity_c;
          c.group_size = o.group_size;
          c.strict = o.strict;
          c.seed = o.base_seed + static_cast<std::uint64_t>(s);
          c.adversary = adv;
          c.degrees = o.degrees.resolve(n, c.seed);
          c.validate();
          jobs.push_back(std::move(c));
          adversary_of.push_back(adv);
        }

  std::vector<SweepRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();)
      rows[i] = run_one(jobs[i], adversary_of[i], o.crash_prob);
  };
  const int threads = std::max(1, o.workers);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }

  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.n, a.f, a.adversary, a.seed) < std::tie(b.n, b.f, b.adversary, b.seed);
  });
  return rows;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("least_squares needs matching non-empty samples");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = m * sxx - sx * sx;
  if (den == 0)
    return {0, sy / m};
  const double slope = (m * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / m};
}

const char* const kSweepCsvHeader =
    "n,f,model,adversary,seed,rounds,messages,crashes,allokay_senders,max_active,max_send,"
    "max_receive,dropped,agreement_ok,validity_ok,monitors_ok,verdict";

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    std::string verdict = r.verdict;
    std::replace(verdict.begin(), verdict.end(), ',', ';');
    os << r.n << ',' << r.f << ',' << to_string(r.model) << ',' << r.adversary << ',' << r.seed
       << ',' << r.rounds << ',' << r.messages << ',' << r.crashes << ',' << r.allokay_senders
       << ',' << r.max_active << ',' << r.max_send << ',' << r.max_receive << ',' << r.dropped
       << ',' << r.agreement_ok << ',' << r.validity_ok << ',' << r.monitors_ok << ',' << verdict
       << '\n';
  }
}

void write_summary(std::ostream& os, const std::vector<SweepRow>& rows) {
  std::map<std::tuple<std::string, int, int>, int> max_rounds;
  for (const auto& r : rows) {
    auto& m = max_rounds[{to_string(r.model), r.n, r.f}];
    m = std::max(m, r.rounds);
  }
  std::map<std::pair<std::string, int>, std::pair<std::vector<double>, std::vector<double>>> series;
  for (const auto& [key, rounds] : max_rounds) {
    const auto& [model, n, f] = key;
    os << "# max_rounds model=" << model << " n=" << n << " f=" << f << " rounds=" << rounds
       << '\n';
    auto& s = series[{model, n}];
    s.first.push_back(f);
    s.second.push_back(rounds);
  }
  for (const auto& [key, s] : series) {
    if (s.first.size() < 2)
      continue;
    const LinearFit fit = least_squares(s.first, s.second);
    os << "# fit model=" << key.first << " n=" << key.second << " slope=" << fit.slope
       << " intercept=" << fit.intercept << '\n';
  }
}

}  // namespace ftgr
