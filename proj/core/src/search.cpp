#include "aspen/search.hpp"

#include <algorithm>
#include <chrono>

namespace aspen {

namespace {

bool lexLess(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

AtomSet choice_point_set(const Program& p) {
  // Mixed graph: one node per atom, one per rule; body atoms point at their
  // rule, rules point at their heads.
  const int n = p.numAtoms();
  const int nr = (int)p.rules.size();
  std::vector<std::vector<int>> adj(n + nr);
  for (int r = 0; r < nr; ++r) {
    const Rule& rule = p.rules[r];
    const int rnode = n + r;
    for (Atom a : rule.posBody) adj[a].push_back(rnode);
    for (Atom a : rule.negBody) adj[a].push_back(rnode);
    for (Atom h : rule.heads) adj[rnode].push_back(h);
  }
  const std::vector<int> comp = tarjan_scc(adj);
  AtomSet b(n);
  for (int r = 0; r < nr; ++r) {
    const Rule& rule = p.rules[r];
    if (rule.kind == RuleKind::Choice) {
      for (Atom h : rule.heads) b.add(h);
    }
    for (Atom a : rule.negBody) {
      // The edge a -> rule lies on a directed cycle iff both ends share a
      // strongly connected component.
      if (comp[a] == comp[n + r]) b.add(a);
    }
  }
  return b;
}

Searcher::Searcher(const Program& p, SearchOptions opts)
    : prog_(&p), opts_(opts), state_(p, opts.prop) {
  restrict_ = opts_.choicePointRestriction;
  b_ = restrict_ ? choice_point_set(p) : AtomSet(p.numAtoms());
  order_.resize(p.numAtoms());
  for (Atom a = 0; a < p.numAtoms(); ++a) order_[a] = a;
  skipPos_.assign(p.numAtoms(), 0);
  skipNeg_.assign(p.numAtoms(), 0);
}

bool Searcher::candidate(Atom a) const {
  if (state_.isAssigned(a)) return false;
  return !restrict_ || b_.contains(a);
}

Literal Searcher::staticChoice() const {
  for (Atom a = 0; a < state_.numAtoms(); ++a) {
    if (candidate(a)) return pos(a);
  }
  for (Atom a = 0; a < state_.numAtoms(); ++a) {
    if (!state_.isAssigned(a)) return pos(a);
  }
  return pos(0);  // unreachable when an uncovered atom exists
}

bool Searcher::lookaheadPass() {
  const int n = state_.numAtoms();
  std::vector<uint8_t> assignedBefore(n);
restart:
  ++passStamp_;
  best_.reset();
  std::pair<int64_t, int64_t> bestScore{-1, -1};
  Atom bestAtom = -1;
  int64_t bestP = 0, bestN = 0;
  const std::vector<Atom> snapshot = order_;
  for (Atom a : snapshot) {
    if (!candidate(a)) continue;
    const bool needPos = skipPos_[a] != passStamp_;
    const bool needNeg = skipNeg_[a] != passStamp_;
    if (!needPos && !needNeg) continue;
    // Least-recently-tested order: move the tested atom to the tail.
    order_.erase(std::find(order_.begin(), order_.end(), a));
    order_.push_back(a);
    for (Atom x = 0; x < n; ++x) assignedBefore[x] = state_.isAssigned(x);
    int64_t score[2] = {0, 0};
    for (int dir = 0; dir < 2; ++dir) {
      if (dir == 0 ? !needPos : !needNeg) continue;
      const Literal probe = dir == 0 ? pos(a) : neg(a);
      state_.assume(probe);
      state_.expand();
      ++stats.lookaheadExpandCalls;
      const bool conflicted = state_.conflict();
      if (!conflicted) {
        for (Atom x = 0; x < n; ++x) {
          if (assignedBefore[x] || !state_.isAssigned(x)) continue;
          // The literal's expansion is a subset of this one, so only its
          // assigned polarity is proven conflict-free.
          if (state_.isTrue(x)) {
            skipPos_[x] = passStamp_;
          } else {
            skipNeg_[x] = passStamp_;
          }
          if (!restrict_ || b_.contains(x)) ++score[dir];
        }
      }
      state_.backtrack();
      if (conflicted) {
        // The probe refutes itself: its complement holds in every stable
        // model agreeing with the current assignment.
        state_.pushLiteral(complement(probe));
        state_.expand();
        ++stats.lookaheadExpandCalls;
        if (state_.conflict()) return false;
        goto restart;
      }
    }
    // Only atoms probed in both directions this pass have comparable scores.
    if (needPos && needNeg) {
      const std::pair<int64_t, int64_t> s{std::min(score[0], score[1]),
                                          std::max(score[0], score[1])};
      if (s > bestScore || (s == bestScore && a < bestAtom)) {
        bestScore = s;
        bestAtom = a;
        bestP = score[0];
        bestN = score[1];
      }
    }
  }
  if (bestAtom >= 0) best_ = bestP >= bestN ? pos(bestAtom) : neg(bestAtom);
  return true;
}

std::vector<Literal> Searcher::lookahead() {
  const int n = state_.numAtoms();
  std::vector<uint8_t> wasTrue(n), wasFalse(n);
  for (Atom a = 0; a < n; ++a) {
    wasTrue[a] = state_.isTrue(a);
    wasFalse[a] = state_.isFalse(a);
  }
  lookaheadPass();
  std::vector<Literal> committed;
  for (Atom a = 0; a < n; ++a) {
    if (state_.isTrue(a) && !wasTrue[a]) committed.push_back(pos(a));
    if (state_.isFalse(a) && !wasFalse[a]) committed.push_back(neg(a));
  }
  return committed;
}

Literal Searcher::heuristic() {
  if (!opts_.lookaheadEnabled) return staticChoice();
  if (!best_) lookaheadPass();
  return best_ ? *best_ : staticChoice();
}

bool Searcher::unacceptable() const {
  if (!incWeights_) return false;
  // The decided weights only grow toward the total, so a partial sum already
  // >= the incumbent (lexicographically) cannot lead to an improvement.
  return !lexLess(state_.objectivePartial(), *incWeights_);
}

bool Searcher::nodeFails() {
  best_.reset();
  state_.expand();
  if (state_.conflict()) return true;
  if (optimizing_ && unacceptable()) return true;
  if (opts_.lookaheadEnabled && !state_.covers()) {
    if (!lookaheadPass()) return true;
    if (state_.conflict()) return true;
    if (optimizing_ && unacceptable()) return true;
  }
  return false;
}

SearchOutcome Searcher::run(const LitSet& a0, const ModelCallback& onModel) {
  optimizing_ = false;
  return runImpl(a0, onModel);
}

SearchOutcome Searcher::runOptimize(const LitSet& a0) {
  optimizing_ = true;
  return runImpl(a0, nullptr);
}

SearchOutcome Searcher::runImpl(const LitSet& a0, const ModelCallback& onModel) {
  const auto t0 = std::chrono::steady_clock::now();
  for (Literal l : prog_->compute.required) state_.pushLiteral(l);
  for (Atom a : a0.pos.members()) state_.pushLiteral(pos(a));
  for (Atom a : a0.neg.members()) state_.pushLiteral(neg(a));

  struct SFrame {
    Literal lit;
    bool second;
  };
  std::vector<SFrame> fs;
  size_t top = 0;
  Literal conflictLit = pos(0);
  bool haveConflictLit = false;
  uint64_t emitted = 0;
  bool stop = false;
  bool unwinding = false;

  while (!stop) {
    if (!unwinding) {
      if (nodeFails()) {
        ++stats.conflicts;
        unwinding = true;
        continue;
      }
      if (state_.covers()) {
        ++emitted;
        top = fs.size();  // backtracking above a model is chronological
        if (optimizing_) {
          incWeights_ = state_.objectivePartial();
          incModel_ = state_.positiveAtoms();
        } else {
          const ModelReport rep = report(*prog_, state_.positiveAtoms());
          if (onModel && !onModel(rep)) stop = true;
          if (opts_.maxModels != 0 && emitted >= opts_.maxModels) stop = true;
        }
        unwinding = true;
        continue;
      }
      const Literal x = heuristic();
      conflictLit = x;
      haveConflictLit = true;
      fs.push_back({x, false});
      state_.assume(x);
      ++stats.choicePoints;
      continue;
    }
    if (fs.empty()) break;
    const SFrame f = fs.back();
    fs.pop_back();
    state_.backtrack();
    if (!f.second) {
      const size_t level = fs.size();
      if (opts_.backjumpEnabled && haveConflictLit && level >= top &&
          state_.independent(conflictLit, f.lit)) {
        ++stats.backjumps;  // the conflict cannot involve f.lit: skip its flip
        continue;
      }
      if (level < top) top = level;
      fs.push_back({complement(f.lit), true});
      state_.assume(complement(f.lit));
      unwinding = false;
    }
  }

  stats.expandCalls = state_.expandCalls();
  stats.elapsedSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  SearchOutcome out;
  out.models = emitted;
  out.stats = stats;
  if (optimizing_) {
    if (incModel_) {
      out.verdict = Verdict::OptimumFound;
      out.incumbent = report(*prog_, *incModel_);
    } else {
      out.verdict = Verdict::Unsatisfiable;
    }
  } else {
    out.verdict = emitted > 0 ? Verdict::Satisfiable : Verdict::Unsatisfiable;
  }
  return out;
}

SearchOutcome solve(const Program& p, const LitSet& a0, const SearchOptions& opts,
                    const ModelCallback& onModel) {
  Searcher s(p, opts);
  return s.run(a0, onModel);
}

SearchOutcome solve(const Program& p, const SearchOptions& opts,
                    const ModelCallback& onModel) {
  return solve(p, LitSet(p.numAtoms()), opts, onModel);
}

SearchOutcome optimize(const Program& p, const SearchOptions& opts) {
  Searcher s(p, opts);
  return s.runOptimize(LitSet(p.numAtoms()));
}

std::optional<ModelReport> find_optimal_oracle(const Program& p,
                                               const SearchOptions& opts) {
  SearchOptions probeOpts = opts;
  probeOpts.maxModels = 1;

  // Is the unconstrained program satisfiable at all?
  Program base = p;
  base.optimize.clear();
  if (solve(base, probeOpts, nullptr).verdict != Verdict::Satisfiable) {
    return std::nullopt;
  }

  // Fix each statement's optimum in significance order; each probe asks for a
  // model whose weight stays within the candidate bound.
  Program constrained = base;
  for (size_t s = 0; s < p.optimize.size(); ++s) {
    const OptimizeStatement& stmt = p.optimize[s];
    int64_t lo = 0, hi = 0;
    for (const WeightedLiteral& wl : stmt.entries) hi += wl.weight;
    auto withBound = [&](int64_t bound) {
      Program q = constrained;
      const Atom guard = q.intern("__opt_bound_" + std::to_string(s));
      Rule r;
      r.kind = RuleKind::Weight;
      r.heads = {guard};
      r.bound = bound + 1;  // the guard fires exactly when the bound is beaten
      for (const WeightedLiteral& wl : stmt.entries) {
        if (wl.lit.positive) {
          r.posBody.push_back(wl.lit.atom);
          r.posWeights.push_back(wl.weight);
        } else {
          r.negBody.push_back(wl.lit.atom);
          r.negWeights.push_back(wl.weight);
        }
      }
      q.rules.push_back(r);
      q.compute.required.push_back(neg(guard));
      std::sort(q.compute.required.begin(), q.compute.required.end());
      return q;
    };
    while (lo < hi) {
      const int64_t mid = lo + (hi - lo) / 2;
      if (solve(withBound(mid), probeOpts, nullptr).verdict == Verdict::Satisfiable) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    constrained = withBound(lo);
  }

  std::optional<ModelReport> result;
  solve(constrained, probeOpts, [&](const ModelReport& rep) {
    // Project the witness back onto the original program's atoms.
    AtomSet m(p.numAtoms());
    for (Atom a = 0; a < p.numAtoms(); ++a) {
      if (rep.model.contains(a)) m.add(a);
    }
    result = report(p, m);
    return false;
  });
  return result;
}

}  // namespace aspen
