// The decision procedure built on the propagation engine: lookahead, the
// search-space-minimizing heuristic, model enumeration, backjumping, and
// weight optimization.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "aspen/program.hpp"
#include "aspen/propagate.hpp"
#include "aspen/semantics.hpp"

namespace aspen {

struct SearchOptions {
  uint64_t maxModels = 1;  // 0 = all
  bool lookaheadEnabled = true;
  bool backjumpEnabled = true;
  bool choicePointRestriction = true;
  uint64_t rngSeed = 0;
  PropOptions prop;
};

struct SearchStats {
  uint64_t choicePoints = 0;
  uint64_t conflicts = 0;
  uint64_t expandCalls = 0;
  uint64_t lookaheadExpandCalls = 0;
  uint64_t backjumps = 0;
  double elapsedSeconds = 0.0;
};

enum class Verdict { Satisfiable, Unsatisfiable, OptimumFound };

struct SearchOutcome {
  Verdict verdict = Verdict::Unsatisfiable;
  uint64_t models = 0;
  SearchStats stats;
  std::optional<ModelReport> incumbent;  // optimize() only
};

// Return false to stop the enumeration early.
using ModelCallback = std::function<bool(const ModelReport&)>;

// Choice points: atoms heading choice rules plus atoms whose not-atom edge
// lies on a directed cycle of the mixed atom/rule dependency graph. Deciding
// all of them makes expand cover the remaining atoms.
AtomSet choice_point_set(const Program& p);

class Searcher {
 public:
  explicit Searcher(const Program& p, SearchOptions opts = {});

  PropState& state() { return state_; }
  const AtomSet& choicePoints() const { return b_; }

  // One integrated lookahead/scoring pass over the uncovered candidates;
  // commits every literal whose complement's test expansion conflicts and
  // returns the literals added to the assignment. Caches branch scores.
  std::vector<Literal> lookahead();

  // The literal maximizing (min(n,p), max(n,p)) over the last pass; runs a
  // pass if none is cached. Falls back to the lowest uncovered candidate when
  // lookahead is disabled.
  Literal heuristic();

  SearchOutcome run(const LitSet& a0, const ModelCallback& onModel);
  SearchOutcome runOptimize(const LitSet& a0);

  SearchStats stats;

 private:
  SearchOutcome runImpl(const LitSet& a0, const ModelCallback& onModel);
  bool lookaheadPass();        // false when a committed complement conflicts
  bool nodeFails();            // expand + unacceptable + lookahead
  bool unacceptable() const;   // optimize-mode incumbent pruning
  bool candidate(Atom a) const;
  Literal staticChoice() const;
  void noteTested(const std::vector<Atom>& tested);

  const Program* prog_;
  SearchOptions opts_;
  PropState state_;
  AtomSet b_;
  bool restrict_ = false;
  bool optimizing_ = false;

  std::vector<Atom> order_;  // least-recently-tested first
  // One stamp per literal: a successful test expansion proves the literals it
  // assigned cannot conflict, so only that polarity's test is skipped.
  std::vector<uint64_t> skipPos_, skipNeg_;
  uint64_t passStamp_ = 0;
  std::optional<Literal> best_;

  std::optional<std::vector<int64_t>> incWeights_;
  std::optional<AtomSet> incModel_;
};

SearchOutcome solve(const Program& p, const LitSet& a0, const SearchOptions& opts,
                    const ModelCallback& onModel);
SearchOutcome solve(const Program& p, const SearchOptions& opts,
                    const ModelCallback& onModel);

SearchOutcome optimize(const Program& p, const SearchOptions& opts = {});

// Cross-check for optimize(): per-statement binary search over the optimum
// weight, each probe answered by solve() on the program extended with a
// weight-bound constraint.
std::optional<ModelReport> find_optimal_oracle(const Program& p,
                                               const SearchOptions& opts = {});

}  // namespace aspen
