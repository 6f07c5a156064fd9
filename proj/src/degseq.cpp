#include "ftgr/degseq.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>

namespace ftgr {

DegreeSequence::DegreeSequence(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::set<int> seen;
  for (const auto& e : entries_) {
    if (e.id < 1)
      throw std::invalid_argument("node id must be >= 1");
    if (e.degree < 0)
      throw std::invalid_argument("degree must be non-negative");
    if (!seen.insert(e.id).second)
      throw std::invalid_argument("duplicate node id " + std::to_string(e.id));
  }
}

DegreeSequence DegreeSequence::from_degrees(const std::vector<int>& degrees) {
  std::vector<Entry> entries;
  entries.reserve(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i)
    entries.push_back({static_cast<int>(i) + 1, degrees[i]});
  return DegreeSequence(std::move(entries));
}

std::vector<int> DegreeSequence::degrees() const {
  std::vector<int> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_)
    out.push_back(e.degree);
  return out;
}

int RealizedGraph::degree_of(int id) const {
  int d = 0;
  for (const auto& [u, v] : edges)
    d += (u == id) + (v == id);
  return d;
}

bool RealizedGraph::is_simple() const {
  std::set<int> ids(node_ids.begin(), node_ids.end());
  for (const auto& [u, v] : edges) {
    if (u >= v)
      return false;
    if (!ids.count(u) || !ids.count(v))
      return false;
  }
  return true;
}

bool erdos_gallai(const DegreeSequence& seq) {
  std::vector<std::int64_t> d;
  for (const auto& e : seq.entries())
    d.push_back(e.degree);
  std::sort(d.begin(), d.end(), std::greater<>());
  const std::int64_t sum = std::accumulate(d.begin(), d.end(), std::int64_t{0});
  if (sum % 2 != 0)
    return false;

  const std::size_t n = d.size();
  std::int64_t prefix = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    prefix += d[k - 1];
    std::int64_t rhs = static_cast<std::int64_t>(k) * static_cast<std::int64_t>(k - 1);
    for (std::size_t i = k; i < n; ++i)
      rhs += std::min<std::int64_t>(d[i], static_cast<std::int64_t>(k));
    if (prefix > rhs)
      return false;
  }
  return true;
}

RealizationOutcome havel_hakimi(const DegreeSequence& seq) {
  struct Residual {
    int id;
    int degree;
  };
  std::vector<Residual> rest;
  RealizedGraph g;
  for (const auto& e : seq.entries()) {
    rest.push_back({e.id, e.degree});
    g.node_ids.push_back(e.id);
  }
  std::sort(g.node_ids.begin(), g.node_ids.end());

  auto order = [](const Residual& a, const Residual& b) {
    return a.degree != b.degree ? a.degree > b.degree : a.id < b.id;
  };

  while (!rest.empty()) {
    std::sort(rest.begin(), rest.end(), order);
    const Residual head = rest.front();
    rest.erase(rest.begin());
    if (head.degree > static_cast<int>(rest.size()))
      return Unrealizable{};
    for (int k = 0; k < head.degree; ++k) {
      if (--rest[k].degree < 0)
        return Unrealizable{};
      g.edges.emplace(std::min(head.id, rest[k].id), std::max(head.id, rest[k].id));
    }
  }
  return g;
}

bool brute_force_realizable(const DegreeSequence& seq) {
  const std::size_t n = seq.size();
  if (n > kBruteForceMaxNodes)
    throw std::length_error("brute_force_realizable: at most " +
                            std::to_string(kBruteForceMaxNodes) + " nodes");

  const auto target = seq.degrees();
  std::vector<std::pair<int, int>> slots;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      slots.emplace_back(static_cast<int>(i), static_cast<int>(j));

  // Gray-code walk: each step toggles exactly one edge, so the per-node
  // degree vector and the count of mismatching nodes update in O(1).
  std::vector<int> deg(n, 0);
  int mismatched = 0;
  for (std::size_t i = 0; i < n; ++i)
    mismatched += target[i] != 0;
  if (mismatched == 0)
    return true;

  std::vector<bool> present(slots.size(), false);
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto slot = static_cast<std::size_t>(std::countr_zero(step));
    const int delta = present[slot] ? -1 : 1;
    present[slot] = !present[slot];
    for (int v : {slots[slot].first, slots[slot].second}) {
      const bool was = deg[v] == target[v];
      deg[v] += delta;
      const bool now = deg[v] == target[v];
      mismatched += static_cast<int>(was) - static_cast<int>(now);
    }
    if (mismatched == 0)
      return true;
  }
  return false;
}

bool verify_degrees(const RealizedGraph& graph, const DegreeSequence& seq) {
  std::set<int> ids;
  for (const auto& e : seq.entries())
    ids.insert(e.id);
  for (const auto& [u, v] : graph.edges)
    if (u == v || !ids.count(u) || !ids.count(v))
      return false;
  for (const auto& e : seq.entries())
    if (graph.degree_of(e.id) != e.degree)
      return false;
  return true;
}

std::string format_outcome(const RealizationOutcome& outcome) {
  const auto* g = std::get_if<RealizedGraph>(&outcome);
  if (!g)
    return "unrealizable";
  std::string out;
  for (const auto& [u, v] : g->edges) {
    if (!out.empty())
      out += ' ';
    out += std::to_string(u) + "-" + std::to_string(v);
  }
  return out;
}

}  // namespace ftgr
