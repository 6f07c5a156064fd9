#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ftgr/netsim.hpp"

namespace ftgr {

// Degree assignment: an explicit list, "uniform:k" or "random".
struct DegreeSpec {
  enum class Kind { List, Uniform, Random } kind = Kind::Uniform;
  std::vector<int> values;
  int uniform = 1;

  // Accepts "1,2,3", "1 2 3", "uniform:k" and "random". Throws
  // std::invalid_argument.
  static DegreeSpec parse(const std::string& text);
  std::vector<int> resolve(int n, std::uint64_t seed) const;
};

// Uniform degrees in [0, n - 1], redrawn until the sequence is graphic.
std::vector<int> random_graphic_degrees(int n, std::uint64_t seed);

struct SweepOptions {
  std::vector<int> ns{16};
  std::vector<int> fs{0};
  Model model = Model::CC;
  std::vector<std::string> adversaries{"random"};
  int seeds = 1;
  std::uint64_t base_seed = 1;
  DegreeSpec degrees;
  int capacity_c = 1;
  int group_size = 0;
  bool strict = true;
  double crash_prob = 0.02;
  int workers = 1;
};

struct SweepRow {
  int n = 0;
  int f = 0;
  Model model = Model::CC;
  std::string adversary;
  std::uint64_t seed = 0;
  int rounds = 0;
  std::uint64_t messages = 0;
  int crashes = 0;
  int allokay_senders = 0;
  int max_active = 0;
  int max_send = 0;
  int max_receive = 0;
  std::uint64_t dropped = 0;
  bool agreement_ok = false;
  bool validity_ok = false;
  bool monitors_ok = false;
  std::string verdict;  // "realized", "unrealizable" or "error: ..."
};

// One row per (n, f, adversary, seed), sorted by that key.
std::vector<SweepRow> run_sweep(const SweepOptions& options);
SweepRow run_one(const SimConfig& config, const std::string& adversary, double crash_prob);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

extern const char* const kSweepCsvHeader;
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
// '#' lines: max rounds per (model, n, f) and the fit of max rounds against f.
void write_summary(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace ftgr
