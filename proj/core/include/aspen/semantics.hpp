// Executable reference semantics: reducts, rule interpretation functions,
// stable-model test, brute-force enumeration, well-founded model, and the
// naive reference versions of the propagation closures used as oracles in
// differential tests.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "aspen/program.hpp"

namespace aspen {

// A subset of a fixed atom universe.
struct AtomSet {
  std::vector<bool> bits;

  AtomSet() = default;
  explicit AtomSet(int universe) : bits(universe, false) {}

  int universe() const { return (int)bits.size(); }
  bool contains(Atom a) const { return bits[a]; }
  void add(Atom a) { bits[a] = true; }
  void remove(Atom a) { bits[a] = false; }
  int count() const;
  bool subsetOf(const AtomSet& other) const;
  std::vector<Atom> members() const;

  friend bool operator==(const AtomSet&, const AtomSet&) = default;
};

struct ModelReport {
  AtomSet model;
  std::vector<int64_t> weights;  // one per minimize statement, rank order
  bool satisfiesCompute = true;
};

// ---- Stable model semantics ------------------------------------------------

// Deletes rules whose negative body meets S and strips not-atoms from the
// rest. Basic rules only; throws std::invalid_argument otherwise.
Program reduct(const Program& p, const AtomSet& s);

// Least set closed under a negation-free program, by rule counters.
AtomSet deductive_closure(const Program& horn);

// The per-rule interpretation function; fPrime drops the "head in S" filter
// of choice rules and equals f_r for the other kinds.
AtomSet f_r(const Program& p, const Rule& r, const AtomSet& s, const AtomSet& c);
AtomSet f_r_prime(const Program& p, const Rule& r, const AtomSet& s, const AtomSet& c);

// Least fixed point of A -> union of f_r(S, A).
AtomSet gP(const Program& p, const AtomSet& s);

bool is_stable(const Program& p, const AtomSet& s);

ModelReport report(const Program& p, const AtomSet& s);

// All stable models, canonically ordered by the atom-index bitset read as an
// integer, ascending. Throws std::length_error when |Atoms| > limit.
std::vector<ModelReport> enumerate_bruteforce(const Program& p, int limit = 20,
                                              bool applyCompute = false);

// ---- Monotone fixpoints ----------------------------------------------------

using SetTransformer = std::function<AtomSet(const AtomSet&)>;

AtomSet lfp(const SetTransformer& f, int universe);
AtomSet gfp(const SetTransformer& f, int universe);

// ---- Well-founded semantics (normal programs) ------------------------------

struct WellFounded {
  AtomSet wplus;
  AtomSet wminus;
};

WellFounded well_founded(const Program& p);

// ---- Reference propagation closures (oracles for the engine) ---------------

struct LitSet {
  AtomSet pos, neg;

  LitSet() = default;
  explicit LitSet(int universe) : pos(universe), neg(universe) {}
  bool inconsistent() const;
  bool covers() const;

  friend bool operator==(const LitSet&, const LitSet&) = default;
};

// Lower closure: the smallest literal set containing A and closed under the
// four forced-consequence cases; on inconsistency returns the full literal
// set.
LitSet reference_atleast(const Program& p, const LitSet& a);

// Upper closure: least fixed point of B -> union of f'_r(A+, B - A-) - A-.
AtomSet reference_atmost(const Program& p, const LitSet& a);

// Alternates the two closures to a joint fixpoint.
LitSet reference_expand(const Program& p, const LitSet& a);

}  // namespace aspen
