#include "aspen/propagate.hpp"

#include <algorithm>
#include <cassert>

namespace aspen {

// ---- SCC computation -------------------------------------------------------

std::vector<int> tarjan_scc(const std::vector<std::vector<int>>& adj) {
  const int n = (int)adj.size();
  std::vector<int> comp(n, -1), index(n, -1), low(n, 0);
  std::vector<int> stack;
  std::vector<uint8_t> onStack(n, 0);
  int nextIndex = 0, nextComp = 0;

  // Explicit DFS frames: (vertex, next child position).
  struct DfsFrame {
    int v;
    size_t child;
  };
  std::vector<DfsFrame> dfs;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    dfs.push_back({root, 0});
    index[root] = low[root] = nextIndex++;
    stack.push_back(root);
    onStack[root] = 1;
    while (!dfs.empty()) {
      DfsFrame& f = dfs.back();
      const int v = f.v;
      if (f.child < adj[v].size()) {
        const int w = adj[v][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = nextIndex++;
          stack.push_back(w);
          onStack[w] = 1;
          dfs.push_back({w, 0});
        } else if (onStack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          for (;;) {
            const int w = stack.back();
            stack.pop_back();
            onStack[w] = 0;
            comp[w] = nextComp;
            if (w == v) break;
          }
          ++nextComp;
        }
        dfs.pop_back();
        if (!dfs.empty()) {
          const int parent = dfs.back().v;
          low[parent] = std::min(low[parent], low[v]);
        }
      }
    }
  }
  return comp;
}

std::vector<int> compute_sccs(const Program& p) {
  std::vector<std::vector<int>> adj(p.numAtoms());
  for (const Rule& r : p.rules) {
    for (Atom a : r.posBody) {
      for (Atom h : r.heads) adj[a].push_back(h);
    }
  }
  return tarjan_scc(adj);
}

// ---- Construction ----------------------------------------------------------

PropState::PropState(const Program& p, PropOptions opts)
    : prog_(&p), opts_(opts), n_(p.numAtoms()) {
  computeSccs();
  buildRules();
  initCounters();
}

void PropState::computeSccs() {
  scc_ = compute_sccs(*prog_);
  hasLoop_ = false;
  for (const Rule& r : prog_->rules) {
    for (Atom a : r.posBody) {
      for (Atom h : r.heads) {
        if (scc_[a] == scc_[h]) hasLoop_ = true;
      }
    }
  }
  atmostActive_ = opts_.useScc ? hasLoop_ : true;
}

void PropState::buildRules() {
  rules_.reserve(prog_->rules.size());
  plist_.assign(n_, {});
  nlist_.assign(n_, {});
  plistUpper_.assign(n_, {});
  hlist_.assign(n_, {});
  touching_.assign(n_, {});
  minPosOcc_.assign(n_, {});
  minNegOcc_.assign(n_, {});

  for (const Rule& src : prog_->rules) {
    CompiledRule cr;
    cr.kind = src.kind;
    cr.bound = src.bound;
    cr.heads = src.heads;
    const bool weighted = src.kind == RuleKind::Weight;
    for (size_t i = 0; i < src.posBody.size(); ++i) {
      BodyLit bl;
      bl.atom = src.posBody[i];
      bl.positive = true;
      bl.weight = weighted ? src.posWeights[i] : 1;
      bl.tracked = !opts_.useScc;
      for (Atom h : src.heads) {
        if (scc_[h] == scc_[bl.atom]) bl.tracked = true;
      }
      cr.body.push_back(bl);
    }
    for (size_t i = 0; i < src.negBody.size(); ++i) {
      BodyLit bl;
      bl.atom = src.negBody[i];
      bl.positive = false;
      bl.weight = weighted ? src.negWeights[i] : 1;
      bl.tracked = false;  // only positive occurrences feed the upper closure
      cr.body.push_back(bl);
    }
    if (weighted) {
      // Descending weight so backchain cursors stop at the first literal that
      // cannot be forced; ties broken by atom index, positive first.
      std::stable_sort(cr.body.begin(), cr.body.end(),
                       [](const BodyLit& a, const BodyLit& b) {
                         if (a.weight != b.weight) return a.weight > b.weight;
                         if (a.atom != b.atom) return a.atom < b.atom;
                         return a.positive && !b.positive;
                       });
    }
    rules_.push_back(std::move(cr));
  }

  for (int r = 0; r < (int)rules_.size(); ++r) {
    const CompiledRule& cr = rules_[r];
    for (int32_t i = 0; i < (int32_t)cr.body.size(); ++i) {
      const BodyLit& bl = cr.body[i];
      if (bl.positive) {
        plist_[bl.atom].push_back({r, i});
        if (bl.tracked) plistUpper_[bl.atom].push_back({r, i});
      } else {
        nlist_[bl.atom].push_back({r, i});
      }
    }
    for (Atom h : cr.heads) hlist_[h].push_back(r);
    std::vector<Atom> touched;
    for (Atom h : cr.heads) touched.push_back(h);
    for (const BodyLit& bl : cr.body) touched.push_back(bl.atom);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (Atom a : touched) touching_[a].push_back(r);
  }

  for (int s = 0; s < (int)prog_->optimize.size(); ++s) {
    for (const WeightedLiteral& wl : prog_->optimize[s].entries) {
      if (wl.lit.positive) {
        minPosOcc_[wl.lit.atom].push_back({s, wl.weight});
      } else {
        minNegOcc_[wl.lit.atom].push_back({s, wl.weight});
      }
    }
  }
}

void PropState::initCounters() {
  const int nr = (int)rules_.size();
  aPos_.assign(n_, 0);
  aNeg_.assign(n_, 0);
  aUpper_.assign(n_, 0);
  headof_.assign(n_, 0);
  source_.assign(n_, 0);
  literal_.assign(nr, 0);
  inactive_.assign(nr, 0);
  upper_.assign(nr, 0);
  rmin_.assign(nr, 0);
  rmax_.assign(nr, 0);
  lastPos_.assign(nr, 0);
  lastNeg_.assign(nr, 0);
  objPartial_.assign(prog_->optimize.size(), 0);
  scalars_.assign(2, 0);
  onPosq_.assign(n_, 0);
  onNegq_.assign(n_, 0);
  onUq_.assign(n_, 0);
  onAddq_.assign(n_, 0);

  std::vector<uint8_t> activeAtInit(nr, 1);
  for (int r = 0; r < nr; ++r) {
    const CompiledRule& cr = rules_[r];
    // upper_ counts what the rule still needs beyond literals currently
    // assumed available to the upper closure: every negative occurrence and
    // every untracked positive occurrence starts available, every tracked
    // positive occurrence starts unavailable (the upper set starts empty).
    switch (cr.kind) {
      case RuleKind::Basic:
      case RuleKind::Choice: {
        literal_[r] = (int64_t)cr.body.size();
        inactive_[r] = 0;
        for (const BodyLit& bl : cr.body) {
          if (bl.positive && bl.tracked) ++upper_[r];
        }
        break;
      }
      case RuleKind::Cardinality: {
        literal_[r] = cr.bound;
        inactive_[r] = cr.bound - (int64_t)cr.body.size();
        upper_[r] = cr.bound;
        for (const BodyLit& bl : cr.body) {
          if (!bl.positive || !bl.tracked) --upper_[r];
        }
        if (inactive_[r] > 0) activeAtInit[r] = 0;
        break;
      }
      case RuleKind::Weight: {
        for (const BodyLit& bl : cr.body) {
          rmax_[r] += bl.weight;
          if (!bl.positive || !bl.tracked) upper_[r] += bl.weight;
        }
        if (rmax_[r] < cr.bound) activeAtInit[r] = 0;
        break;
      }
    }
    if (activeAtInit[r]) {
      for (Atom h : cr.heads) ++headof_[h];
    }
  }

  for (int r = 0; r < nr; ++r) {
    if (!activeAtInit[r]) continue;
    const CompiledRule& cr = rules_[r];
    // Rules that fire from the empty assignment.
    const bool fires = (cr.kind == RuleKind::Basic && literal_[r] == 0) ||
                       (cr.kind == RuleKind::Cardinality && literal_[r] <= 0) ||
                       (cr.kind == RuleKind::Weight && rmin_[r] >= cr.bound);
    if (fires) {
      for (Atom h : cr.heads) pushPos(h);
    }
    if (atmostActive_ && isUpperActive(r)) {
      for (Atom h : cr.heads) addUpper(h, r);
    }
  }
  for (Atom a = 0; a < n_; ++a) {
    if (headof_[a] == 0) pushNeg(a);
  }
}

// ---- Trail and queues ------------------------------------------------------

void PropState::set(int64_t& cell, int64_t v) {
  log_.push_back({&cell, cell});
  cell = v;
  ++mutations_;
}

void PropState::setConflict() {
  if (scalars_[kConflict] == 0) set(scalars_[kConflict], 1);
}

void PropState::pushPos(Atom a) {
  if (aNeg_[a]) {
    setConflict();
    return;
  }
  if (aPos_[a] || onPosq_[a]) return;
  onPosq_[a] = 1;
  posq_.push_back(a);
}

void PropState::pushNeg(Atom a) {
  if (aPos_[a]) {
    setConflict();
    return;
  }
  if (aNeg_[a] || onNegq_[a]) return;
  onNegq_[a] = 1;
  negq_.push_back(a);
}

void PropState::pushUpper(Atom a) {
  if (!atmostActive_ || onUq_[a]) return;
  onUq_[a] = 1;
  uq_.push_back(a);
}

void PropState::addUpper(Atom head, int r) {
  if (aNeg_[head] || aUpper_[head] || onAddq_[head]) return;
  if (opts_.useSource && source_[head] == 0) set(source_[head], r + 1);
  onAddq_[head] = 1;
  addq_.push_back(head);
}

void PropState::seedRemoval(Atom head, int r) {
  if (!atmostActive_) return;
  if (opts_.useSource) {
    const int64_t s = source_[head];
    if (s != 0 && s != r + 1) return;  // a different rule still justifies head
    if (s != 0) set(source_[head], 0);
  }
  pushUpper(head);
}

void PropState::clearQueues() {
  for (Atom a : posq_) onPosq_[a] = 0;
  for (Atom a : negq_) onNegq_[a] = 0;
  for (Atom a : uq_) onUq_[a] = 0;
  for (Atom a : addq_) onAddq_[a] = 0;
  posq_.clear();
  negq_.clear();
  uq_.clear();
  addq_.clear();
}

// ---- Activity tests --------------------------------------------------------

bool PropState::ruleActive(int r) const {
  const CompiledRule& cr = rules_[r];
  if (cr.kind == RuleKind::Weight) return rmax_[r] >= cr.bound;
  return inactive_[r] <= 0;
}

bool PropState::isUpperActive(int r) const {
  const CompiledRule& cr = rules_[r];
  if (cr.kind == RuleKind::Weight) return upper_[r] >= cr.bound;
  return upper_[r] <= 0;
}

// ---- Lower closure ---------------------------------------------------------

void PropState::fire(const Occ& o) {
  const int r = o.rule;
  const CompiledRule& cr = rules_[r];
  switch (cr.kind) {
    case RuleKind::Basic: {
      set(literal_[r], literal_[r] - 1);
      if (literal_[r] == 0) {
        pushPos(cr.heads[0]);
      } else if (aNeg_[cr.heads[0]] && ruleActive(r)) {
        backchainFalse(r);
      }
      break;
    }
    case RuleKind::Choice: {
      set(literal_[r], literal_[r] - 1);
      break;
    }
    case RuleKind::Cardinality: {
      set(literal_[r], literal_[r] - 1);
      if (literal_[r] == 0) {
        pushPos(cr.heads[0]);
      } else if (literal_[r] > 0 && aNeg_[cr.heads[0]] && ruleActive(r)) {
        backchainFalse(r);
      }
      break;
    }
    case RuleKind::Weight: {
      const int64_t w = cr.body[o.idx].weight;
      const int64_t old = rmin_[r];
      set(rmin_[r], old + w);
      if (old < cr.bound) {
        if (rmin_[r] >= cr.bound) {
          pushPos(cr.heads[0]);
        } else if (aNeg_[cr.heads[0]] && ruleActive(r)) {
          backchainFalse(r);
        }
      }
      break;
    }
  }
}

// A rule lost one availability. If it crossed below its threshold every head
// must seek support elsewhere. Even while it stays capable, a head it sources
// is suspect: the justification recorded at admission time may since have
// rotated onto atoms the head itself supports, so the head is retracted and
// stage 2 re-admits it under a fresh certificate if one exists.
void PropState::upperLossEvent(int r, bool crossed) {
  if (!atmostActive_) return;
  if (crossed) {
    for (Atom h : rules_[r].heads) seedRemoval(h, r);
  } else if (opts_.useSource) {
    for (Atom h : rules_[r].heads) {
      if (source_[h] == r + 1 && aUpper_[h]) {
        set(source_[h], 0);
        pushUpper(h);
      }
    }
  }
}

// Folds the loss of a negative or untracked positive occurrence into the
// upper-closure counter.
void PropState::bumpUnavailable(int r, int64_t weight) {
  const CompiledRule& cr = rules_[r];
  if (cr.kind == RuleKind::Weight) {
    const int64_t old = upper_[r];
    set(upper_[r], old - weight);
    upperLossEvent(r, old >= cr.bound && upper_[r] < cr.bound);
  } else {
    set(upper_[r], upper_[r] + 1);
    upperLossEvent(r, upper_[r] == 1);
  }
}

void PropState::inactivate(const Occ& o) {
  const int r = o.rule;
  const CompiledRule& cr = rules_[r];
  const BodyLit& bl = cr.body[o.idx];
  if (!bl.positive || !bl.tracked) bumpUnavailable(r, bl.weight);
  switch (cr.kind) {
    case RuleKind::Basic:
    case RuleKind::Choice: {
      set(inactive_[r], inactive_[r] + 1);
      if (inactive_[r] == 1) inactivationEvent(r);
      break;
    }
    case RuleKind::Cardinality: {
      set(inactive_[r], inactive_[r] + 1);
      if (inactive_[r] == 1) {
        inactivationEvent(r);
      } else if (inactive_[r] == 0) {
        // The rule just became tight: a true head with no other active rule
        // now forces the remaining body literals.
        const Atom h = cr.heads[0];
        if (aPos_[h] && headof_[h] == 1) backchainTrue(r);
      }
      break;
    }
    case RuleKind::Weight: {
      const int64_t old = rmax_[r];
      set(rmax_[r], old - bl.weight);
      if (old >= cr.bound && rmax_[r] < cr.bound) {
        inactivationEvent(r);
      } else if (rmax_[r] >= cr.bound) {
        const Atom h = cr.heads[0];
        if (aPos_[h] && headof_[h] == 1) backchainTrue(r);
      }
      break;
    }
  }
}

void PropState::inactivationEvent(int r) {
  for (Atom h : rules_[r].heads) {
    set(headof_[h], headof_[h] - 1);
    if (headof_[h] == 0) {
      pushNeg(h);
    } else if (headof_[h] == 1 && aPos_[h]) {
      backchainTrueOnlyRule(h);
    }
  }
}

void PropState::backchainTrue(int r) {
  const CompiledRule& cr = rules_[r];
  switch (cr.kind) {
    case RuleKind::Basic: {
      for (const BodyLit& bl : cr.body) {
        if (bl.positive) {
          if (!aPos_[bl.atom]) pushPos(bl.atom);
        } else {
          if (!aNeg_[bl.atom]) pushNeg(bl.atom);
        }
      }
      break;
    }
    case RuleKind::Choice: {
      if (literal_[r] <= 0) break;
      for (const BodyLit& bl : cr.body) {
        if (bl.positive) {
          if (!aPos_[bl.atom]) pushPos(bl.atom);
        } else {
          if (!aNeg_[bl.atom]) pushNeg(bl.atom);
        }
      }
      break;
    }
    case RuleKind::Cardinality: {
      // Exactly bound many non-falsified occurrences remain, so each
      // unassigned one must come out satisfied.
      if (literal_[r] <= 0 || inactive_[r] != 0) break;
      for (const BodyLit& bl : cr.body) {
        if (aPos_[bl.atom] || aNeg_[bl.atom]) continue;
        if (bl.positive) {
          pushPos(bl.atom);
        } else {
          pushNeg(bl.atom);
        }
      }
      break;
    }
    case RuleKind::Weight: {
      if (rmax_[r] < cr.bound) break;
      const int64_t sz = (int64_t)cr.body.size();
      for (int64_t i = lastPos_[r]; i < sz; ++i) {
        const BodyLit& bl = cr.body[i];
        if (aPos_[bl.atom] || aNeg_[bl.atom]) continue;
        if (rmax_[r] - bl.weight < cr.bound) {
          if (bl.positive) {
            pushPos(bl.atom);
          } else {
            pushNeg(bl.atom);
          }
        } else {
          // Weights descend, so no later occurrence is forced either; resume
          // here the next time the rule's slack shrinks.
          set(lastPos_[r], i);
          return;
        }
      }
      set(lastPos_[r], sz);
      break;
    }
  }
}

void PropState::backchainFalse(int r) {
  const CompiledRule& cr = rules_[r];
  switch (cr.kind) {
    case RuleKind::Basic: {
      if (literal_[r] != 1 || inactive_[r] > 0) break;
      for (const BodyLit& bl : cr.body) {
        const bool sat = bl.positive ? aPos_[bl.atom] != 0 : aNeg_[bl.atom] != 0;
        if (sat) continue;
        if (bl.positive) {
          pushNeg(bl.atom);
        } else {
          pushPos(bl.atom);
        }
        break;
      }
      break;
    }
    case RuleKind::Choice:
      break;  // a false head never constrains a choice body
    case RuleKind::Cardinality: {
      // One more satisfied occurrence would fire the rule, so every
      // unassigned occurrence must be falsified.
      if (literal_[r] != 1 || inactive_[r] > 0) break;
      for (const BodyLit& bl : cr.body) {
        if (aPos_[bl.atom] || aNeg_[bl.atom]) continue;
        if (bl.positive) {
          pushNeg(bl.atom);
        } else {
          pushPos(bl.atom);
        }
      }
      break;
    }
    case RuleKind::Weight: {
      if (rmax_[r] < cr.bound) break;
      const int64_t sz = (int64_t)cr.body.size();
      for (int64_t i = lastNeg_[r]; i < sz; ++i) {
        const BodyLit& bl = cr.body[i];
        if (aPos_[bl.atom] || aNeg_[bl.atom]) continue;
        if (rmin_[r] + bl.weight >= cr.bound) {
          if (bl.positive) {
            pushNeg(bl.atom);
          } else {
            pushPos(bl.atom);
          }
        } else {
          set(lastNeg_[r], i);
          return;
        }
      }
      set(lastNeg_[r], sz);
      break;
    }
  }
}

void PropState::backchainTrueOnlyRule(Atom a) {
  for (int r : hlist_[a]) {
    if (ruleActive(r)) {
      backchainTrue(r);
      return;
    }
  }
}

void PropState::processPos(Atom a) {
  if (aNeg_[a]) {
    setConflict();
    return;
  }
  if (aPos_[a]) return;
  if (headof_[a] == 0) {
    // No rule can ever derive a under the current assignment.
    setConflict();
    return;
  }
  set(aPos_[a], 1);
  set(scalars_[kCovered], scalars_[kCovered] + 1);
  for (const auto& [s, w] : minPosOcc_[a]) set(objPartial_[s], objPartial_[s] + w);
  for (const Occ& o : plist_[a]) {
    fire(o);
    if (conflict()) return;
  }
  for (const Occ& o : nlist_[a]) {
    inactivate(o);
    if (conflict()) return;
  }
  if (headof_[a] == 1) backchainTrueOnlyRule(a);
}

void PropState::processNeg(Atom a) {
  if (aPos_[a]) {
    setConflict();
    return;
  }
  if (aNeg_[a]) return;
  set(aNeg_[a], 1);
  set(scalars_[kCovered], scalars_[kCovered] + 1);
  for (const auto& [s, w] : minNegOcc_[a]) set(objPartial_[s], objPartial_[s] + w);
  if (atmostActive_ && aUpper_[a]) removeFromUpper(a);
  for (const Occ& o : plist_[a]) {
    inactivate(o);
    if (conflict()) return;
  }
  for (const Occ& o : nlist_[a]) {
    fire(o);
    if (conflict()) return;
  }
  for (int r : hlist_[a]) {
    if (ruleActive(r)) backchainFalse(r);
    if (conflict()) return;
  }
}

void PropState::pushLiteral(Literal x) {
  if (x.positive) {
    pushPos(x.atom);
  } else {
    pushNeg(x.atom);
  }
}

void PropState::propagateAtleast() {
  while (!conflict()) {
    Atom a;
    bool positive;
    if (!posq_.empty()) {
      a = posq_.front();
      posq_.pop_front();
      onPosq_[a] = 0;
      positive = true;
    } else if (!negq_.empty()) {
      a = negq_.front();
      negq_.pop_front();
      onNegq_[a] = 0;
      positive = false;
    } else {
      return;
    }
    if (positive) {
      processPos(a);
    } else {
      processNeg(a);
    }
  }
  clearQueues();
}

// ---- Upper closure ---------------------------------------------------------

void PropState::removeFromUpper(Atom a) {
  set(aUpper_[a], 0);
  for (const Occ& o : plistUpper_[a]) propagateFalseUpper(o);
}

void PropState::propagateFalseUpper(const Occ& o) {
  const int r = o.rule;
  const CompiledRule& cr = rules_[r];
  if (cr.kind == RuleKind::Weight) {
    const int64_t old = upper_[r];
    set(upper_[r], old - cr.body[o.idx].weight);
    upperLossEvent(r, old >= cr.bound && upper_[r] < cr.bound);
  } else {
    set(upper_[r], upper_[r] + 1);
    upperLossEvent(r, upper_[r] == 1);
  }
}

void PropState::propagateTrueUpper(const Occ& o) {
  const int r = o.rule;
  const CompiledRule& cr = rules_[r];
  if (cr.kind == RuleKind::Weight) {
    const int64_t old = upper_[r];
    set(upper_[r], old + cr.body[o.idx].weight);
    if (old < cr.bound && upper_[r] >= cr.bound) {
      for (Atom h : cr.heads) addUpper(h, r);
    }
  } else {
    set(upper_[r], upper_[r] - 1);
    if (upper_[r] == 0) {
      for (Atom h : cr.heads) addUpper(h, r);
    }
  }
}

void PropState::propagateAtmost() {
  if (!atmostActive_) {
    for (Atom a : uq_) onUq_[a] = 0;
    for (Atom a : addq_) onAddq_[a] = 0;
    uq_.clear();
    addq_.clear();
    return;
  }
  std::vector<Atom> removed;
  // Stage 1: retract atoms whose justification weakened, cascading through
  // the positive occurrence lists.
  while (!uq_.empty()) {
    const Atom a = uq_.front();
    uq_.pop_front();
    onUq_[a] = 0;
    if (!aUpper_[a]) continue;
    removeFromUpper(a);
    removed.push_back(a);
  }
  // Between the stages, requeue every retracted atom that some still-capable
  // rule rederives.
  for (Atom a : removed) {
    if (aNeg_[a]) continue;
    for (int r : hlist_[a]) {
      if (isUpperActive(r)) {
        addUpper(a, r);
        break;
      }
    }
  }
  // Stage 2: grow the upper set back monotonically. A queued addition may be
  // stale (its justifying rule lost a literal since it was enqueued), so each
  // atom is admitted only if some rule can still derive it right now; a rule
  // that becomes capable later re-enqueues its heads.
  while (!addq_.empty()) {
    const Atom a = addq_.front();
    addq_.pop_front();
    onAddq_[a] = 0;
    if (aUpper_[a] || aNeg_[a]) continue;
    int just = -1;
    for (int r : hlist_[a]) {
      if (isUpperActive(r)) {
        just = r;
        break;
      }
    }
    if (just < 0) {
      if (opts_.useSource && source_[a] != 0) set(source_[a], 0);
      continue;
    }
    if (opts_.useSource && source_[a] != just + 1) set(source_[a], just + 1);
    set(aUpper_[a], 1);
    for (const Occ& o : plistUpper_[a]) propagateTrueUpper(o);
  }
  // Whatever stayed out can never become true: feed it to the lower closure.
  for (Atom a : removed) {
    if (!aUpper_[a]) pushNeg(a);
  }
}

void PropState::expand() {
  ++expandCalls_;
  for (;;) {
    propagateAtleast();
    if (conflict()) {
      clearQueues();
      return;
    }
    if (atmostActive_) {
      if (!firstAtmostDone_) {
        firstAtmostDone_ = true;
        propagateAtmost();
        for (Atom a = 0; a < n_; ++a) {
          if (!aUpper_[a] && !aNeg_[a]) pushNeg(a);
        }
      } else if (!uq_.empty() || !addq_.empty()) {
        propagateAtmost();
      }
    }
    if (conflict()) {
      clearQueues();
      return;
    }
    if (posq_.empty() && negq_.empty()) return;
  }
}

// ---- Assignment views ------------------------------------------------------

AtomSet PropState::positiveAtoms() const {
  AtomSet s(n_);
  for (Atom a = 0; a < n_; ++a) {
    if (aPos_[a]) s.add(a);
  }
  return s;
}

LitSet PropState::assignment() const {
  LitSet s(n_);
  for (Atom a = 0; a < n_; ++a) {
    if (aPos_[a]) s.pos.add(a);
    if (aNeg_[a]) s.neg.add(a);
  }
  return s;
}

// ---- Trail frames ----------------------------------------------------------

void PropState::assume(Literal x) {
  frames_.push_back({x, log_.size()});
  pushLiteral(x);
}

Literal PropState::backtrack() {
  clearQueues();
  const Frame f = frames_.back();
  frames_.pop_back();
  while (log_.size() > f.mark) {
    const LogEntry& e = log_.back();
    *e.cell = e.old;
    log_.pop_back();
  }
  return f.lit;
}

// ---- Dependence test -------------------------------------------------------

bool PropState::independent(Literal x1, Literal x2) const {
  if (x1.atom == x2.atom) return false;
  std::vector<uint8_t> seenAtom(n_, 0), seenRule(rules_.size(), 0);
  std::vector<Atom> frontier{x1.atom};
  seenAtom[x1.atom] = 1;
  while (!frontier.empty()) {
    const Atom a = frontier.back();
    frontier.pop_back();
    for (int r : touching_[a]) {
      if (seenRule[r] || !ruleActive(r)) continue;
      seenRule[r] = 1;
      auto visit = [&](Atom b) {
        if (seenAtom[b] || aNeg_[b]) return false;
        if (b == x2.atom) return true;
        seenAtom[b] = 1;
        frontier.push_back(b);
        return false;
      };
      for (Atom h : rules_[r].heads) {
        if (visit(h)) return false;
      }
      for (const BodyLit& bl : rules_[r].body) {
        if (visit(bl.atom)) return false;
      }
    }
  }
  return true;
}

// ---- Instrumentation -------------------------------------------------------

std::vector<int64_t> PropState::snapshot() const {
  std::vector<int64_t> out;
  for (const auto* v : {&aPos_, &aNeg_, &aUpper_, &headof_, &source_, &literal_,
                        &inactive_, &upper_, &rmin_, &rmax_, &lastPos_,
                        &lastNeg_, &objPartial_, &scalars_}) {
    out.insert(out.end(), v->begin(), v->end());
  }
  return out;
}

}  // namespace aspen
