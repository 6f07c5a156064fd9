#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ftgr {

// A degree demand per node. Node ids are distinct and >= 1; degrees >= 0.
// Degrees >= the number of nodes are accepted (they are simply unrealizable).
class DegreeSequence {
 public:
  struct Entry {
    int id;
    int degree;
    bool operator==(const Entry&) const = default;
  };

  DegreeSequence() = default;
  explicit DegreeSequence(std::vector<Entry> entries);

  // Ids 1..n in order.
  static DegreeSequence from_degrees(const std::vector<int>& degrees);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::vector<int> degrees() const;

 private:
  std::vector<Entry> entries_;
};

// Simple undirected graph; edges are stored as (min, max) id pairs.
struct RealizedGraph {
  std::vector<int> node_ids;
  std::set<std::pair<int, int>> edges;

  bool operator==(const RealizedGraph&) const = default;
  int degree_of(int id) const;
  bool is_simple() const;
};

struct Unrealizable {
  bool operator==(const Unrealizable&) const = default;
};

using RealizationOutcome = std::variant<RealizedGraph, Unrealizable>;

inline bool is_realized(const RealizationOutcome& o) {
  return std::holds_alternative<RealizedGraph>(o);
}

// Erdos-Gallai: even degree sum plus the k-prefix inequality for every k.
bool erdos_gallai(const DegreeSequence& seq);

// Havel-Hakimi construction. The peeled node is always the current maximum
// residual degree; ties (both for peeling and for choosing neighbours) go to
// the smaller node id, so the output is a pure function of the input.
RealizationOutcome havel_hakimi(const DegreeSequence& seq);

inline constexpr std::size_t kBruteForceMaxNodes = 8;

// Exhaustive search over every edge subset of the complete graph on the ids.
// Throws std::length_error above kBruteForceMaxNodes.
bool brute_force_realizable(const DegreeSequence& seq);

bool verify_degrees(const RealizedGraph& graph, const DegreeSequence& seq);

// "unrealizable", or the edge list as "u-v u-v ..." (empty for no edges).
std::string format_outcome(const RealizationOutcome& outcome);

}  // namespace ftgr
