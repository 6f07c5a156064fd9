#pragma once

#include <vector>

#include "ftgr/message.hpp"

namespace ftgr {

// ceil(log2 n), never below 1.
int ceil_log2(int n);

// Contiguous partition of the sorted index order 1..n into groups of at most
// group_size members. The congested clique is the one-group layout; the
// node-capacitated clique uses group_size = ceil(log2 n).
class GroupLayout {
 public:
  GroupLayout(int n, int group_size);

  static GroupLayout clique(int n) { return GroupLayout(n, n < 1 ? 1 : n); }
  static GroupLayout capacitated(int n) { return GroupLayout(n, ceil_log2(n)); }

  int n() const { return n_; }
  int group_size() const { return group_size_; }
  int group_count() const { return group_count_; }

  // 1-based group of a 1-based node index.
  int group_of(NodeIndex i) const { return (i - 1) / group_size_ + 1; }
  NodeIndex first_member(int group) const { return (group - 1) * group_size_ + 1; }
  NodeIndex last_member(int group) const;

  // Members of `group` other than `self`, ascending.
  void members_except(int group, NodeIndex self, std::vector<NodeIndex>& out) const;

 private:
  int n_;
  int group_size_;
  int group_count_;
};

// Per-round send/receive limit c * group_size.
struct Capacity {
  int constant = 1;
  int limit(const GroupLayout& layout) const { return constant * layout.group_size(); }
};

// Global-Broadcast sweep step r (0-based) for source group j (1-based):
// the 1-based destination group ((r + j) mod G) + 1.
int broadcast_destination(int source_group, int step, int group_count);

// Group visited at `step` of an all-okay Global-Update started from
// own_group: own_group .. G, then 1 .. own_group - 1.
int update_group(int own_group, int step, int group_count);

// Receive-side overflow rule: keep the lowest sender indices up to `limit`
// and return the dropped tail. `inbox` must be sorted by sender.
std::vector<Envelope> enforce_capacity(std::vector<Envelope>& inbox, int limit);

}  // namespace ftgr
