#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "aspen/rng.hpp"
#include "aspen/semantics.hpp"
#include "aspen/textio.hpp"
#include "util.hpp"

using namespace aspen;
using testutil::atomSet;
using testutil::litSet;
using testutil::parseOk;

namespace {

// The two-rule choice/cardinality program whose eight stable models collapse
// to four under compute{true} and to one under minimize{a=1,b=2}.
const char* kChoiceProgram = "{a, b, c}. true :- 2 {a, b, c}.";

// The four-rule normal program with the single stable model {d}.
const char* kNormalProgram = "a :- b. b :- c, not d. d :- not b. c :- a.";

}  // namespace

TEST_SUITE("semantics") {

TEST_CASE("reduct deletes blocked rules and strips not-atoms") {
  const Program p = parseOk(kNormalProgram);
  const Program r = reduct(p, atomSet(p, {"a", "b", "c"}));
  // Survivors: a :- b.  b :- c.  c :- a.   (d :- not b is deleted)
  REQUIRE(r.rules.size() == 3);
  for (const Rule& rule : r.rules) {
    CHECK(rule.kind == RuleKind::Basic);
    CHECK(rule.negBody.empty());
  }
  CHECK(p.name(r.rules[0].heads[0]) == "a");
  CHECK(p.name(r.rules[1].heads[0]) == "b");
  CHECK(p.name(r.rules[1].posBody[0]) == "c");
  CHECK(p.name(r.rules[2].heads[0]) == "c");
  CHECK(p.name(r.rules[2].posBody[0]) == "a");
  // d :- not b survives reduction by the empty set:
  const Program r0 = reduct(p, AtomSet(p.numAtoms()));
  CHECK(r0.rules.size() == 4);
  for (const Rule& rule : r0.rules) CHECK(rule.negBody.empty());
}

TEST_CASE("reduct of a Horn program is the program itself") {
  const Program p = parseOk("a :- b. b :- c. c.");
  for (const auto& s : {AtomSet(p.numAtoms()), atomSet(p, {"a", "c"})}) {
    const Program r = reduct(p, s);
    CHECK(r.rules == p.rules);
  }
}

TEST_CASE("reduct rejects extended rules") {
  const Program p = parseOk("{a}. b :- 1 {a}.");
  CHECK_THROWS_AS(reduct(p, AtomSet(p.numAtoms())), std::invalid_argument);
}

TEST_CASE("deductive closure of a positive loop is empty") {
  const Program p = parseOk("a :- b. b :- c. c :- a.");
  CHECK(deductive_closure(p).count() == 0);
}

TEST_CASE("deductive closure derives facts and chains") {
  const Program p1 = parseOk("a.");
  CHECK(deductive_closure(p1) == atomSet(p1, {"a"}));
  const Program p2 = parseOk("a :- b. b.");
  CHECK(deductive_closure(p2) == atomSet(p2, {"a", "b"}));
}

TEST_CASE("the weight-rule interpretation function counts unfixed not-atoms") {
  const Program p = parseOk("h :- { a = 1, b = 2, not c = 3 } >= 4.");
  const AtomSet s = atomSet(p, {"a"});
  const AtomSet c = atomSet(p, {"a"});
  CHECK(f_r(p, p.rules[0], s, c) == atomSet(p, {"h"}));
  // With c in S the not-atom contributes nothing and the bound fails.
  CHECK(f_r(p, p.rules[0], atomSet(p, {"a", "c"}), c).count() == 0);
}

TEST_CASE("the choice-rule variant drops the head-in-S filter") {
  const Program p = parseOk("{h}.");
  const AtomSet empty(p.numAtoms());
  CHECK(f_r(p, p.rules[0], empty, empty).count() == 0);
  CHECK(f_r_prime(p, p.rules[0], empty, empty) == atomSet(p, {"h"}));
}

TEST_CASE("the cardinality interpretation counts satisfied literals") {
  const Program p = parseOk("h :- 2 {a, b, not c}.");
  const AtomSet sc = atomSet(p, {"a", "b"});
  CHECK(f_r(p, p.rules[0], sc, sc) == atomSet(p, {"h"}));
  CHECK(f_r(p, p.rules[0], sc, AtomSet(p.numAtoms())).count() == 0);
}

TEST_CASE("gP fixes the choice program's singleton") {
  const Program p = parseOk(kChoiceProgram);
  const AtomSet s = atomSet(p, {"a"});
  CHECK(gP(p, s) == s);
}

TEST_CASE("gP of the normal program") {
  const Program p = parseOk(kNormalProgram);
  CHECK(gP(p, atomSet(p, {"d"})) == atomSet(p, {"d"}));
  const Program empty = build_program({});
  CHECK(gP(empty, AtomSet(0)).count() == 0);
}

TEST_CASE("stability of the normal program's candidates") {
  const Program p = parseOk(kNormalProgram);
  CHECK(is_stable(p, atomSet(p, {"d"})));
  CHECK(!is_stable(p, atomSet(p, {"a", "b", "c"})));
  CHECK(is_stable(build_program({}), AtomSet(0)));
}

TEST_CASE("brute force finds the eight models of the choice program") {
  const Program p = parseOk(kChoiceProgram);
  const auto models = enumerate_bruteforce(p);
  REQUIRE(models.size() == 8);
  const auto keys = testutil::modelKeys(models);
  for (const auto& names : std::vector<std::vector<std::string>>{
           {}, {"a"}, {"b"}, {"c"},
           {"a", "b", "true"}, {"a", "c", "true"},
           {"b", "c", "true"}, {"a", "b", "c", "true"}}) {
    CHECK(keys.count(atomSet(p, names).members()) == 1);
  }
}

TEST_CASE("the compute statement keeps the four models containing true") {
  const Program p = parseOk("{a, b, c}. true :- 2 {a, b, c}. compute {true}.");
  const auto models = enumerate_bruteforce(p, 20, /*applyCompute=*/true);
  REQUIRE(models.size() == 4);
  for (const auto& m : models) {
    CHECK(m.model.contains(*p.find("true")));
    CHECK(m.satisfiesCompute);
  }
}

TEST_CASE("the minimize statement selects {a, c, true}") {
  const Program p = parseOk(
      "{a, b, c}. true :- 2 {a, b, c}. compute {true}. minimize {a=1, b=2}.");
  const auto models = enumerate_bruteforce(p, 20, true);
  REQUIRE(!models.empty());
  const ModelReport* best = nullptr;
  for (const auto& m : models) {
    if (!best || m.weights < best->weights) best = &m;
  }
  CHECK(best->model == atomSet(p, {"a", "c", "true"}));
  CHECK(best->weights == std::vector<int64_t>{1});
}

TEST_CASE("the brute-force guard trips on large universes") {
  std::vector<RawStatement> stmts;
  RawStatement ch;
  ch.type = RawStatement::RuleStmt;
  ch.kind = RuleKind::Choice;
  for (int i = 0; i < 21; ++i) ch.heads.push_back("x" + std::to_string(i));
  stmts.push_back(ch);
  CHECK_THROWS_AS(enumerate_bruteforce(build_program(stmts)), std::length_error);
}

TEST_CASE("least and greatest fixpoints of simple transformers") {
  const auto constEmpty = [](const AtomSet&) { return AtomSet(3); };
  CHECK(lfp(constEmpty, 3).count() == 0);
  CHECK(gfp(constEmpty, 3).count() == 0);

  const auto addX = [](const AtomSet& a) {
    AtomSet r = a;
    r.add(1);
    return r;
  };
  CHECK(lfp(addX, 3) == [] { AtomSet s(3); s.add(1); return s; }());

  const auto identity = [](const AtomSet& a) { return a; };
  AtomSet full(3);
  for (Atom a = 0; a < 3; ++a) full.add(a);
  CHECK(gfp(identity, 3) == full);
}

TEST_CASE("fixpoints of random monotone transformers respect closed sets") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + (int)rng.below(7);
    // f(A) = base, plus head for each implication body subset of A.
    std::vector<std::pair<int, int>> implications;
    const int numImp = (int)rng.below(12);
    for (int i = 0; i < numImp; ++i) {
      implications.push_back({(int)rng.below((uint64_t)n), (int)rng.below((uint64_t)n)});
    }
    const auto f = [&](const AtomSet& a) {
      AtomSet r = a;
      for (auto [body, head] : implications)
        if (a.contains(body)) r.add(head);
      return r;
    };
    const AtomSet least = lfp(f, n);
    const AtomSet greatest = gfp(f, n);
    // Sample closed and expanded sets.
    for (int s = 0; s < 100; ++s) {
      AtomSet a(n);
      for (int i = 0; i < n; ++i)
        if (rng.below(2) == 0) a.add(i);
      const AtomSet fa = f(a);
      if (fa.subsetOf(a)) CHECK(least.subsetOf(a));
      if (a.subsetOf(fa)) CHECK(a.subsetOf(greatest));
    }
  }
}

TEST_CASE("the well-founded model of the normal program is total") {
  const Program p = parseOk(kNormalProgram);
  const WellFounded w = well_founded(p);
  CHECK(w.wplus == atomSet(p, {"d"}));
  CHECK(w.wminus == atomSet(p, {"a", "b", "c"}));
}

TEST_CASE("p :- not p leaves p undefined") {
  const Program p = parseOk("p :- not p.");
  const WellFounded w = well_founded(p);
  CHECK(w.wplus.count() == 0);
  CHECK(w.wminus.count() == 0);
}

TEST_CASE("the well-founded model of a Horn program is its closure") {
  const Program p = parseOk("a :- b. b. c :- d.");
  const WellFounded w = well_founded(p);
  CHECK(w.wplus == deductive_closure(p));
  CHECK(w.wminus == atomSet(p, {"c", "d"}));
}

TEST_CASE("well_founded rejects extended rules") {
  const Program p = parseOk("{a}.");
  CHECK_THROWS_AS(well_founded(p), std::invalid_argument);
}

TEST_CASE("the lower closure of the three-rule program") {
  const Program p = parseOk("a :- b, not c. d :- not a. e :- not b.");
  const LitSet a = litSet(p, {"d"}, {});
  const LitSet r = reference_atleast(p, a);
  CHECK(r == litSet(p, {"d", "e"}, {"a", "b", "c"}));
}

TEST_CASE("the lower closure backchains a false head through its only rule") {
  const Program p = parseOk("a :- b.");
  const LitSet r = reference_atleast(p, litSet(p, {}, {"a"}));
  CHECK(r.neg.contains(*p.find("b")));
}

TEST_CASE("the lower closure adds nothing without forcing rules") {
  const Program p = parseOk("{a}. {b}.");
  const LitSet a = litSet(p, {"a"}, {});
  CHECK(reference_atleast(p, a) == a);
}

TEST_CASE("an atom with no rules at all is forced false") {
  const Program p = parseOk("compute {a}.");
  const LitSet r = reference_atleast(p, LitSet(p.numAtoms()));
  CHECK(r.neg.contains(*p.find("a")));
}

TEST_CASE("the upper closure of the two-rule program") {
  const Program p = parseOk("a :- not b. c :- a.");
  CHECK(reference_atmost(p, LitSet(p.numAtoms())) == atomSet(p, {"a", "c"}));
  CHECK(reference_atmost(p, litSet(p, {}, {"a"})).count() == 0);
}

TEST_CASE("the upper closure re-adds the loop atoms that still have support") {
  const Program p = parseOk(
      "b :- a. b :- c. c :- a, not f. c :- d. d :- b. e :- d. a.");
  CHECK(reference_atmost(p, litSet(p, {"f"}, {})) ==
        atomSet(p, {"a", "b", "c", "d", "e"}));
}

TEST_CASE("the upper closure avoids the stale-closure trap") {
  const Program p = parseOk("a :- 1 {a, not b}.");
  CHECK(reference_atmost(p, litSet(p, {"b"}, {})).count() == 0);
}

TEST_CASE("expand of the three-rule program") {
  const Program p = parseOk("a :- not b. b :- not a, c. c :- c.");
  const LitSet r = reference_expand(p, LitSet(p.numAtoms()));
  CHECK(r == litSet(p, {"a"}, {"b", "c"}));
}

TEST_CASE("expand reports the conflicting program by covering both signs") {
  const Program p = parseOk("a :- b. b :- not c. c :- not d. d :- not b.");
  const LitSet r = reference_expand(p, litSet(p, {"a"}, {}));
  const Atom a = *p.find("a");
  CHECK(r.pos.contains(a));
  CHECK(r.neg.contains(a));
  CHECK(r.inconsistent());
}

TEST_CASE("stability via reduct agrees with is_stable on random basic programs") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + (int)rng.below(6);
    std::vector<RawStatement> stmts;
    const int numRules = (int)rng.below(10);
    for (int i = 0; i < numRules; ++i) {
      RawStatement r;
      r.type = RawStatement::RuleStmt;
      r.kind = RuleKind::Basic;
      r.heads.push_back("a" + std::to_string(rng.below((uint64_t)n)));
      const int bodySize = (int)rng.below(3);
      for (int b = 0; b < bodySize; ++b) {
        r.body.push_back({"a" + std::to_string(rng.below((uint64_t)n)),
                          rng.below(2) == 0, 1});
      }
      stmts.push_back(r);
    }
    const Program p = build_program(stmts);
    const int u = p.numAtoms();
    for (uint64_t mask = 0; mask < (1ull << u); ++mask) {
      AtomSet s(u);
      for (int a = 0; a < u; ++a)
        if (mask & (1ull << a)) s.add(a);
      const bool viaReduct = deductive_closure(reduct(p, s)) == s;
      CHECK(viaReduct == is_stable(p, s));
    }
  }
}

TEST_CASE("models of choice-free programs are never subsets of each other") {
  SplitMix64 rng(31337);
  int programs = 0;
  for (int trial = 0; trial < 3000 && programs < 80; ++trial) {
    // Negation-heavy basic/cardinality rules; no choice rules.
    std::vector<RawStatement> stmts;
    const int n = 2 + (int)rng.below(5);
    const int numRules = 2 + (int)rng.below(10);
    for (int i = 0; i < numRules; ++i) {
      RawStatement r;
      r.type = RawStatement::RuleStmt;
      r.kind = rng.below(4) == 0 ? RuleKind::Cardinality : RuleKind::Basic;
      r.heads.push_back("a" + std::to_string(rng.below((uint64_t)n)));
      const int bodySize = 1 + (int)rng.below(3);
      for (int b = 0; b < bodySize; ++b) {
        r.body.push_back({"a" + std::to_string(rng.below((uint64_t)n)),
                          rng.below(3) == 0, 1});
      }
      if (r.kind == RuleKind::Cardinality) r.bound = 1 + (int64_t)rng.below(2);
      stmts.push_back(r);
    }
    const Program p = build_program(stmts);
    const auto models = enumerate_bruteforce(p);
    if (models.size() < 2) continue;
    ++programs;
    for (size_t i = 0; i < models.size(); ++i) {
      for (size_t j = 0; j < models.size(); ++j) {
        if (i == j) continue;
        CHECK(!models[i].model.subsetOf(models[j].model));
      }
    }
  }
  CHECK(programs >= 10);
}

TEST_CASE("choice rules escape subset minimality") {
  const Program p = parseOk("{h}.");
  const auto models = enumerate_bruteforce(p);
  REQUIRE(models.size() == 2);
  CHECK(models[0].model.subsetOf(models[1].model));
}

TEST_CASE("f_r is monotone in C and anti-monotone in S for non-choice rules") {
  SplitMix64 rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    const Program p = testutil::randomProgram(rng, 6, 8, false, false);
    for (const Rule& r : p.rules) {
      if (r.kind == RuleKind::Choice) continue;
      const int n = p.numAtoms();
      AtomSet s1(n), s2(n), c1(n), c2(n);
      for (int a = 0; a < n; ++a) {
        if (rng.below(2) == 0) s1.add(a);
        if (s1.contains(a) || rng.below(2) == 0) s2.add(a);
        if (rng.below(2) == 0) c1.add(a);
        if (c1.contains(a) || rng.below(2) == 0) c2.add(a);
      }
      // Monotone in C (fixed S), anti-monotone in S (fixed C).
      CHECK(f_r(p, r, s1, c1).subsetOf(f_r(p, r, s1, c2)));
      CHECK(f_r(p, r, s2, c1).subsetOf(f_r(p, r, s1, c1)));
    }
  }
}

}  // TEST_SUITE
