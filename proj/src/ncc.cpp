#include "ftgr/ncc.hpp"

#include <algorithm>
#include <stdexcept>

namespace ftgr {

int ceil_log2(int n) {
  int bits = 0;
  while ((1LL << bits) < n)
    ++bits;
  return std::max(bits, 1);
}

GroupLayout::GroupLayout(int n, int group_size) : n_(n), group_size_(group_size) {
  if (n < 1)
    throw std::invalid_argument("layout needs at least one node");
  if (group_size < 1)
    throw std::invalid_argument("group size must be >= 1");
  group_count_ = (n + group_size - 1) / group_size;
}

NodeIndex GroupLayout::last_member(int group) const {
  return std::min(group * group_size_, n_);
}

void GroupLayout::members_except(int group, NodeIndex self, std::vector<NodeIndex>& out) const {
  out.clear();
  for (NodeIndex i = first_member(group); i <= last_member(group); ++i)
    if (i != self)
      out.push_back(i);
}

int broadcast_destination(int source_group, int step, int group_count) {
  return (step + source_group) % group_count + 1;
}

int update_group(int own_group, int step, int group_count) {
  return (own_group - 1 + step) % group_count + 1;
}

std::vector<Envelope> enforce_capacity(std::vector<Envelope>& inbox, int limit) {
  std::vector<Envelope> dropped;
  if (static_cast<int>(inbox.size()) <= limit)
    return dropped;
  std::stable_sort(inbox.begin(), inbox.end(),
                   [](const Envelope& a, const Envelope& b) { return a.from < b.from; });
  dropped.assign(inbox.begin() + limit, inbox.end());
  inbox.resize(limit);
  return dropped;
}

}  // namespace ftgr
