// The counter-based propagation engine: the lower closure (forward firing
// plus three backchaining modes), the two-stage upper closure with source
// pointers and SCC localization, expand, conflict detection, and the exact
// undo trail.
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "aspen/program.hpp"
#include "aspen/semantics.hpp"

namespace aspen {

struct PropOptions {
  bool useScc = true;     // localize upper-closure recomputation to SCCs
  bool useSource = true;  // source pointers prune upper-closure requeues
};

struct BodyLit {
  Atom atom = 0;
  int64_t weight = 1;
  bool positive = true;
  bool tracked = true;  // occurrence present in the upper-closure plist copy
};

struct CompiledRule {
  RuleKind kind = RuleKind::Basic;
  int64_t bound = 0;
  std::vector<Atom> heads;
  std::vector<BodyLit> body;  // weight rules: descending weight, ties by atom
};

// An occurrence of an atom in a rule body.
struct Occ {
  int32_t rule = 0;
  int32_t idx = 0;  // position in CompiledRule::body
};

class PropState {
 public:
  PropState(const Program& p, PropOptions opts = {});

  PropState(const PropState&) = delete;
  PropState& operator=(const PropState&) = delete;

  const Program& program() const { return *prog_; }
  int numAtoms() const { return n_; }

  // Enqueues a literal for the next propagation round (idempotent).
  void pushLiteral(Literal x);

  // Runs the lower closure to its fixpoint (or a conflict).
  void propagateAtleast();

  // Runs the two-stage upper closure on the pending removal queue.
  void propagateAtmost();

  // Alternates the two closures until both queues drain; newly derived
  // literals accumulate in the assignment.
  void expand();

  bool conflict() const { return scalars_[kConflict] != 0; }
  bool covers() const { return scalars_[kCovered] == n_; }
  int64_t assignedCount() const { return scalars_[kCovered]; }

  bool isTrue(Atom a) const { return aPos_[a] != 0; }
  bool isFalse(Atom a) const { return aNeg_[a] != 0; }
  bool isAssigned(Atom a) const { return aPos_[a] != 0 || aNeg_[a] != 0; }
  // Membership in the upper closure. Without a positive loop the removal
  // machinery is idle and the upper set is simply every non-false atom.
  bool inUpper(Atom a) const {
    return atmostActive_ ? aUpper_[a] != 0 : aNeg_[a] == 0;
  }

  AtomSet positiveAtoms() const;
  LitSet assignment() const;

  // Running weight of decided literals, one cell per minimize statement.
  const std::vector<int64_t>& objectivePartial() const { return objPartial_; }

  // Trail frames. assume() marks a frame and enqueues x; backtrack() undoes
  // every mutation since the matching mark and returns the frame's literal.
  void assume(Literal x);
  Literal backtrack();
  size_t decisionLevel() const { return frames_.size(); }

  // Per-atom component ids over the positive dependency graph.
  const std::vector<int>& sccIds() const { return scc_; }
  bool hasPositiveLoop() const { return hasLoop_; }

  // Connectivity test in the rule-hyperedge graph, skipping inactive rules
  // and false atoms (true atoms are kept).
  bool independent(Literal x1, Literal x2) const;

  // Instrumentation.
  uint64_t mutationCount() const { return mutations_; }
  uint64_t expandCalls() const { return expandCalls_; }

  // Exact-state fingerprint for undo tests: every logged cell.
  std::vector<int64_t> snapshot() const;

  // Cursor position of a weight rule's true-backchain scan (tests only).
  int64_t lastPosCursor(int rule) const { return lastPos_[rule]; }

 private:
  static constexpr int kCovered = 0;
  static constexpr int kConflict = 1;

  void set(int64_t& cell, int64_t v);
  void setConflict();
  void pushPos(Atom a);
  void pushNeg(Atom a);
  void pushUpper(Atom a);
  void clearQueues();

  bool ruleActive(int r) const;
  bool isUpperActive(int r) const;

  void fire(const Occ& o);
  void inactivate(const Occ& o);
  void inactivationEvent(int r);
  void backchainTrue(int r);
  void backchainFalse(int r);
  void backchainTrueOnlyRule(Atom a);
  void seedRemoval(Atom head, int r);
  void upperLossEvent(int r, bool crossed);
  void addUpper(Atom head, int r);
  void bumpUnavailable(int r, int64_t weight);
  void propagateFalseUpper(const Occ& o);
  void propagateTrueUpper(const Occ& o);
  void removeFromUpper(Atom a);
  void processPos(Atom a);
  void processNeg(Atom a);
  void computeSccs();
  void buildRules();
  void initCounters();

  const Program* prog_;
  PropOptions opts_;
  int n_ = 0;
  bool atmostActive_ = false;
  bool firstAtmostDone_ = false;

  std::vector<CompiledRule> rules_;
  std::vector<std::vector<Occ>> plist_, nlist_, plistUpper_;
  std::vector<std::vector<int>> hlist_;
  std::vector<std::vector<int>> touching_;  // rules mentioning the atom at all
  std::vector<int> scc_;
  bool hasLoop_ = false;
  std::vector<std::vector<std::pair<int, int64_t>>> minPosOcc_, minNegOcc_;

  // Mutable cells; every write goes through set() and is undone exactly.
  std::vector<int64_t> aPos_, aNeg_, aUpper_, headof_, source_;
  std::vector<int64_t> literal_, inactive_, upper_, rmin_, rmax_, lastPos_, lastNeg_;
  std::vector<int64_t> objPartial_;
  std::vector<int64_t> scalars_;

  std::deque<Atom> posq_, negq_, uq_, addq_;
  std::vector<uint8_t> onPosq_, onNegq_, onUq_, onAddq_;

  struct LogEntry {
    int64_t* cell;
    int64_t old;
  };
  std::vector<LogEntry> log_;
  struct Frame {
    Literal lit;
    size_t mark;
  };
  std::vector<Frame> frames_;

  uint64_t mutations_ = 0;
  uint64_t expandCalls_ = 0;
};

// Per-atom component ids of the positive dependency graph (edges from
// positive body atoms to heads).
std::vector<int> compute_sccs(const Program& p);

// Strongly connected components of an arbitrary directed graph given as
// adjacency lists; returns a component id per vertex.
std::vector<int> tarjan_scc(const std::vector<std::vector<int>>& adj);

}  // namespace aspen
