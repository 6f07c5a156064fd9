#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ftgr/degseq.hpp"
#include "ftgr/message.hpp"
#include "ftgr/ncc.hpp"

namespace ftgr {

struct Entry {
  EntryClass cls = EntryClass::Null;
  std::optional<int> degree;
  bool operator==(const Entry&) const = default;
};

// Per-peer classification table F_u, indexed 1..n. A cell that was removed
// as a smite-node stays removed: later reports about it are ignored.
class FaultyList {
 public:
  explicit FaultyList(int n = 0) : cells_(n + 1), removed_(n + 1, false) {}

  int size() const { return static_cast<int>(cells_.size()) - 1; }
  const Entry& at(NodeIndex i) const { return cells_[i]; }
  bool pending(NodeIndex i) const { return cells_[i].cls != EntryClass::Null; }
  bool removed(NodeIndex i) const { return removed_[i]; }

  void set(NodeIndex i, Entry e) { cells_[i] = std::move(e); }
  void clear(NodeIndex i) { cells_[i] = Entry{}; }
  void remove(NodeIndex i) {
    cells_[i] = Entry{};
    removed_[i] = true;
  }

  // Smallest pending index strictly greater than `after`.
  std::optional<NodeIndex> next_pending(NodeIndex after = 0) const;
  int pending_count() const;

  bool operator==(const FaultyList&) const = default;

 private:
  std::vector<Entry> cells_;
  std::vector<bool> removed_;
};

// The local D'. Insert-only: a degree once present is never removed, and a
// second insert for the same index must agree with the first.
class DegreeView {
 public:
  explicit DegreeView(int n = 0) : degree_(n + 1, -1) {}

  bool contains(NodeIndex i) const { return degree_[i] >= 0; }
  std::optional<int> degree(NodeIndex i) const {
    return contains(i) ? std::optional<int>(degree_[i]) : std::nullopt;
  }
  void insert(NodeIndex i, int degree);
  std::size_t size() const { return count_; }

  std::vector<std::pair<NodeIndex, int>> entries() const;
  DegreeSequence as_sequence() const;

  bool operator==(const DegreeView& o) const { return degree_ == o.degree_; }

 private:
  std::vector<int> degree_;
  std::size_t count_ = 0;
};

// Test-only rule flips used to show the exhaustive oracle detects broken
// update rules.
enum class Mutation {
  None,
  KeepLocalOnHeardOnce,  // heard-once no longer overwrites the local class
  SkipBelowIndexFold,    // heard-twice no longer resolves lower pending cells
  InvertBelowIndexFold,  // heard-twice nulls lower faulty cells instead of keeping their degree
};

struct ProtocolOptions {
  Mutation mutation = Mutation::None;
};

enum class Mode { Listening, Active, Exit, Crashed };
const char* to_string(Mode m);

struct ListeningState {
  // Index 0 is the virtual predecessor of u_1 heard at round 0, so with
  // silence throughout u_i activates at round gap * i.
  NodeIndex last_active = 0;
  int last_heard_round = 0;
  bool operator==(const ListeningState&) const = default;
};

struct ActiveState {
  NodeIndex subject = 0;  // 0 once every pending cell has been sent
  int copy = 0;           // 0 = first copy, 1 = second copy
  int step = 0;           // group within the current pass
  bool operator==(const ActiveState&) const = default;
};

// Phase-1 reception counts.
class Phase1Tally {
 public:
  explicit Phase1Tally(int n = 0) : count_(n + 1, 0), degree_(n + 1, -1) {}
  void record(const Announce& a);
  int times_heard(NodeIndex i) const { return count_[i]; }
  std::optional<int> degree(NodeIndex i) const {
    return count_[i] ? std::optional<int>(degree_[i]) : std::nullopt;
  }
  int size() const { return static_cast<int>(count_.size()) - 1; }

 private:
  std::vector<int> count_;
  std::vector<int> degree_;
};

// --- individual protocol steps --------------------------------------------

// Announce(self, degree) to the peers scheduled for phase-1 `round`.
void phase1_emit(NodeIndex self, int degree, int round, const GroupLayout& layout,
                 std::vector<Envelope>& out);

// End-of-phase-1 classification: heard twice -> D', once -> Faulty(d),
// never -> Smite. The node's own degree always enters D'.
std::pair<FaultyList, DegreeView> classify(NodeIndex self, int degree, const Phase1Tally& tally);

// Round at which a silent listener takes over.
int activation_due(NodeIndex self, const ListeningState& state, int gap);

// Apply one received rebroadcast. `times_heard` is 1 for the first copy from
// this sender and 2 for the second.
void listening_update(const FaultEntry& msg, int times_heard, FaultyList& list, DegreeView& view,
                      Mutation mutation = Mutation::None);

// Exit fold: remaining Faulty degrees enter D'; Smite cells are dropped.
void fold_remaining(FaultyList& list, DegreeView& view);

RealizationOutcome finalize(const DegreeView& view);

// --- the per-node state machine -------------------------------------------

class RealizationNode {
 public:
  RealizationNode(NodeIndex self, int degree, const GroupLayout& layout, ProtocolOptions opts = {});

  // Start-of-round transitions plus this round's sends.
  void emit(int round, std::vector<Envelope>& out);
  // Local computation over this round's deliveries (sorted by sender).
  void absorb(int round, std::span<const Envelope> inbox);
  void crash();

  NodeIndex index() const { return self_; }
  int input_degree() const { return degree_; }
  Mode mode() const { return mode_; }
  bool crashed() const { return mode_ == Mode::Crashed; }
  // Exit reached and nothing left to send.
  bool terminated() const { return mode_ == Mode::Exit && update_step_ >= layout_->group_count(); }
  bool running() const { return mode_ != Mode::Crashed && !terminated(); }

  const FaultyList& faulty_list() const { return list_; }
  const DegreeView& view() const { return view_; }
  const ListeningState& listening() const { return listen_; }
  const ActiveState& active() const { return active_; }
  const Phase1Tally& tally() const { return tally_; }
  bool classified() const { return classified_; }
  std::optional<int> activation_round() const;
  const std::optional<RealizationOutcome>& verdict() const { return verdict_; }

 private:
  void enter_exit();
  void start_active();
  void advance_cursor();

  NodeIndex self_;
  int degree_;
  const GroupLayout* layout_;
  ProtocolOptions opts_;

  Mode mode_ = Mode::Listening;
  Phase1Tally tally_;
  bool classified_ = false;
  FaultyList list_;
  DegreeView view_;
  ListeningState listen_;
  ActiveState active_;
  int update_step_ = 0;

  // First copy seen from the current transmitter, awaiting its second.
  NodeIndex pending_sender_ = 0;
  NodeIndex pending_subject_ = 0;

  std::optional<RealizationOutcome> verdict_;
  std::vector<NodeIndex> scratch_;
};

}  // namespace ftgr
