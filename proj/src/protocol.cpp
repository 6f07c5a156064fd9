#include "ftgr/protocol.hpp"

#include <string>

namespace ftgr {

namespace {

[[noreturn]] void violation(const std::string& what) { throw ProtocolViolation(what); }

void resolve_cell(NodeIndex i, FaultyList& list, DegreeView& view) {
  const Entry& e = list.at(i);
  if (e.cls == EntryClass::Faulty) {
    if (!e.degree)
      violation("faulty cell " + std::to_string(i) + " has no degree");
    view.insert(i, *e.degree);
    list.clear(i);
  } else if (e.cls == EntryClass::Smite) {
    list.remove(i);
  }
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Listening: return "listening";
    case Mode::Active: return "active";
    case Mode::Exit: return "exit";
    case Mode::Crashed: return "crashed";
  }
  return "?";
}

std::optional<NodeIndex> FaultyList::next_pending(NodeIndex after) const {
  for (NodeIndex i = after + 1; i <= size(); ++i)
    if (pending(i))
      return i;
  return std::nullopt;
}

int FaultyList::pending_count() const {
  int c = 0;
  for (NodeIndex i = 1; i <= size(); ++i)
    c += pending(i);
  return c;
}

void DegreeView::insert(NodeIndex i, int degree) {
  if (degree < 0)
    violation("negative degree for " + std::to_string(i));
  if (contains(i)) {
    if (degree_[i] != degree)
      violation("conflicting degrees for " + std::to_string(i));
    return;
  }
  degree_[i] = degree;
  ++count_;
}

std::vector<std::pair<NodeIndex, int>> DegreeView::entries() const {
  std::vector<std::pair<NodeIndex, int>> out;
  out.reserve(count_);
  for (NodeIndex i = 1; i < static_cast<NodeIndex>(degree_.size()); ++i)
    if (degree_[i] >= 0)
      out.emplace_back(i, degree_[i]);
  return out;
}

DegreeSequence DegreeView::as_sequence() const {
  std::vector<DegreeSequence::Entry> es;
  for (const auto& [i, d] : entries())
    es.push_back({i, d});
  return DegreeSequence(std::move(es));
}

void Phase1Tally::record(const Announce& a) {
  if (a.sender < 1 || a.sender > size())
    violation("announce from unknown index " + std::to_string(a.sender));
  if (count_[a.sender] > 0 && degree_[a.sender] != a.degree)
    violation("two different degrees announced by " + std::to_string(a.sender));
  if (++count_[a.sender] > 2)
    violation("more than two announcements from " + std::to_string(a.sender));
  degree_[a.sender] = a.degree;
}

void phase1_emit(NodeIndex self, int degree, int round, const GroupLayout& layout,
                 std::vector<Envelope>& out) {
  const int g = layout.group_count();
  const int step = (round - 1) % g;
  const int dest = broadcast_destination(layout.group_of(self), step, g);
  std::vector<NodeIndex> targets;
  layout.members_except(dest, self, targets);
  for (NodeIndex t : targets)
    out.push_back({self, t, Announce{self, degree}});
}

std::pair<FaultyList, DegreeView> classify(NodeIndex self, int degree, const Phase1Tally& tally) {
  const int n = tally.size();
  FaultyList list(n);
  DegreeView view(n);
  view.insert(self, degree);
  for (NodeIndex j = 1; j <= n; ++j) {
    if (j == self)
      continue;
    switch (tally.times_heard(j)) {
      case 2: view.insert(j, *tally.degree(j)); break;
      case 1: list.set(j, Entry{EntryClass::Faulty, tally.degree(j)}); break;
      default: list.set(j, Entry{EntryClass::Smite, std::nullopt}); break;
    }
  }
  return {std::move(list), std::move(view)};
}

int activation_due(NodeIndex self, const ListeningState& state, int gap) {
  if (state.last_active >= self)
    violation("u" + std::to_string(self) + " last heard from higher transmitter u" +
              std::to_string(state.last_active));
  return state.last_heard_round + gap * (self - state.last_active);
}

void listening_update(const FaultEntry& msg, int times_heard, FaultyList& list, DegreeView& view,
                      Mutation mutation) {
  const NodeIndex s = msg.subject;
  if (s < 1 || s > list.size())
    violation("fault entry for unknown index " + std::to_string(s));
  if (msg.cls == EntryClass::Null)
    violation("null fault entry");
  if (msg.cls == EntryClass::Smite && msg.degree)
    violation("smite entry carrying a degree");

  if (times_heard == 1) {
    if (view.contains(s)) {
      if (msg.cls == EntryClass::Smite)
        violation("smite received for " + std::to_string(s) + " whose degree is in D'");
      if (msg.degree && *msg.degree != *view.degree(s))
        violation("conflicting degree for " + std::to_string(s));
      return;
    }
    if (list.removed(s))
      return;
    if (mutation == Mutation::KeepLocalOnHeardOnce && list.pending(s))
      return;
    list.set(s, Entry{msg.cls, msg.cls == EntryClass::Faulty ? msg.degree : std::nullopt});
    return;
  }

  if (msg.cls == EntryClass::Smite) {
    if (view.contains(s))
      violation("smite confirmed for " + std::to_string(s) + " whose degree is in D'");
    list.remove(s);
  } else {
    if (!msg.degree)
      violation("faulty entry without degree");
    if (!list.removed(s)) {
      view.insert(s, *msg.degree);
      list.clear(s);
    }
  }

  if (mutation == Mutation::SkipBelowIndexFold)
    return;
  for (NodeIndex p = 1; p < s; ++p) {
    if (!list.pending(p))
      continue;
    if (mutation == Mutation::InvertBelowIndexFold && list.at(p).cls == EntryClass::Faulty)
      list.clear(p);
    else
      resolve_cell(p, list, view);
  }
}

void fold_remaining(FaultyList& list, DegreeView& view) {
  for (NodeIndex p = 1; p <= list.size(); ++p)
    if (list.pending(p))
      resolve_cell(p, list, view);
}

RealizationOutcome finalize(const DegreeView& view) { return havel_hakimi(view.as_sequence()); }

RealizationNode::RealizationNode(NodeIndex self, int degree, const GroupLayout& layout,
                                 ProtocolOptions opts)
    : self_(self),
      degree_(degree),
      layout_(&layout),
      opts_(opts),
      tally_(layout.n()),
      list_(layout.n()),
      view_(layout.n()) {
  if (self < 1 || self > layout.n())
    throw std::invalid_argument("node index out of range");
  if (degree < 0)
    throw std::invalid_argument("negative input degree");
}

std::optional<int> RealizationNode::activation_round() const {
  if (mode_ != Mode::Listening || !classified_)
    return std::nullopt;
  return activation_due(self_, listen_, 3 * layout_->group_count());
}

void RealizationNode::crash() { mode_ = Mode::Crashed; }

void RealizationNode::enter_exit() {
  fold_remaining(list_, view_);
  mode_ = Mode::Exit;
  verdict_ = finalize(view_);
}

void RealizationNode::start_active() {
  mode_ = Mode::Active;
  active_ = ActiveState{list_.next_pending(0).value_or(0), 0, 0};
}

void RealizationNode::advance_cursor() {
  const int g = layout_->group_count();
  if (++active_.step < g)
    return;
  active_.step = 0;
  if (++active_.copy < 2)
    return;
  const NodeIndex done = active_.subject;
  resolve_cell(done, list_, view_);
  active_ = ActiveState{list_.next_pending(done).value_or(0), 0, 0};
}

void RealizationNode::emit(int round, std::vector<Envelope>& out) {
  if (!running())
    return;
  const int g = layout_->group_count();
  if (round <= 2 * g) {
    phase1_emit(self_, degree_, round, *layout_, out);
    return;
  }
  if (!classified_)
    violation("phase 2 before classification");

  if (mode_ == Mode::Listening) {
    const int due = activation_due(self_, listen_, 3 * g);
    if (round < due)
      return;
    if (round > due)
      violation("u" + std::to_string(self_) + " missed its activation round");
    start_active();
  }

  if (mode_ == Mode::Active) {
    if (active_.subject != 0) {
      const Entry& e = list_.at(active_.subject);
      const FaultEntry msg{active_.subject, e.cls,
                           e.cls == EntryClass::Faulty ? e.degree : std::nullopt};
      layout_->members_except(active_.step + 1, self_, scratch_);
      for (NodeIndex t : scratch_)
        out.push_back({self_, t, msg});
      advance_cursor();
      return;
    }
    enter_exit();
    update_step_ = 0;
  }

  if (mode_ == Mode::Exit && update_step_ < g) {
    const int group = update_group(layout_->group_of(self_), update_step_, g);
    layout_->members_except(group, self_, scratch_);
    for (NodeIndex t : scratch_)
      out.push_back({self_, t, AllOkay{}});
    ++update_step_;
  }
}

void RealizationNode::absorb(int round, std::span<const Envelope> inbox) {
  if (mode_ == Mode::Crashed || mode_ == Mode::Exit)
    return;
  const int g = layout_->group_count();
  if (round <= 2 * g) {
    for (const auto& env : inbox) {
      const auto* a = std::get_if<Announce>(&env.msg);
      if (!a || a->sender != env.from)
        violation("unexpected phase-1 message");
      tally_.record(*a);
    }
    if (round == 2 * g) {
      auto [list, view] = classify(self_, degree_, tally_);
      list_ = std::move(list);
      view_ = std::move(view);
      classified_ = true;
    }
    return;
  }
  if (mode_ != Mode::Listening)
    return;

  for (const auto& env : inbox) {
    if (std::holds_alternative<AllOkay>(env.msg)) {
      enter_exit();
      update_step_ = g;
      return;
    }
    const auto* fe = std::get_if<FaultEntry>(&env.msg);
    if (!fe)
      violation("announce received in phase 2");
    listen_ = ListeningState{env.from, round};
    int times = 1;
    if (pending_sender_ == env.from && pending_subject_ == fe->subject) {
      times = 2;
      pending_sender_ = pending_subject_ = 0;
    } else {
      pending_sender_ = env.from;
      pending_subject_ = fe->subject;
    }
    listening_update(*fe, times, list_, view_, opts_.mutation);
  }
}

}  // namespace ftgr
