// Shared test helpers: program construction shorthands, a seeded random
// program generator covering all rule forms, and model-set comparisons.
#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "aspen/program.hpp"
#include "aspen/rng.hpp"
#include "aspen/search.hpp"
#include "aspen/semantics.hpp"
#include "aspen/textio.hpp"

namespace testutil {

inline aspen::Program parseOk(const std::string& text) {
  aspen::ParseResult r = aspen::parse(text);
  if (auto* e = std::get_if<aspen::ParseError>(&r)) {
    throw std::runtime_error("unexpected parse error at " +
                             std::to_string(e->line) + ":" +
                             std::to_string(e->column) + ": " + e->message);
  }
  return std::get<aspen::Program>(std::move(r));
}

inline aspen::AtomSet atomSet(const aspen::Program& p,
                              const std::vector<std::string>& names) {
  aspen::AtomSet s(p.numAtoms());
  for (const std::string& n : names) {
    auto a = p.find(n);
    if (!a) throw std::runtime_error("unknown atom " + n);
    s.add(*a);
  }
  return s;
}

inline aspen::LitSet litSet(const aspen::Program& p,
                            const std::vector<std::string>& posNames,
                            const std::vector<std::string>& negNames) {
  aspen::LitSet a(p.numAtoms());
  a.pos = atomSet(p, posNames);
  a.neg = atomSet(p, negNames);
  return a;
}

// Canonical representation of a model list for set comparison.
inline std::set<std::vector<aspen::Atom>> modelKeys(
    const std::vector<aspen::ModelReport>& models) {
  std::set<std::vector<aspen::Atom>> keys;
  for (const aspen::ModelReport& m : models) keys.insert(m.model.members());
  return keys;
}

inline std::set<std::vector<aspen::Atom>> modelKeys(
    const std::vector<aspen::AtomSet>& models) {
  std::set<std::vector<aspen::Atom>> keys;
  for (const aspen::AtomSet& m : models) keys.insert(m.members());
  return keys;
}

// Runs the solver in enumerate-everything mode and collects the models.
inline std::vector<aspen::AtomSet> enumerateAll(const aspen::Program& p,
                                                aspen::SearchOptions opts = {}) {
  opts.maxModels = 0;
  std::vector<aspen::AtomSet> models;
  aspen::solve(p, opts, [&](const aspen::ModelReport& m) {
    models.push_back(m.model);
    return true;
  });
  return models;
}

// A random ground program over at most `maxAtoms` atoms named a0..a9, mixing
// all four rule forms and optionally compute/minimize statements.
inline aspen::Program randomProgram(aspen::SplitMix64& rng, int maxAtoms = 10,
                                    int maxRules = 25, bool allowCompute = true,
                                    bool allowOptimize = true) {
  using namespace aspen;
  const int n = 1 + (int)rng.below((uint64_t)maxAtoms);
  auto atomName = [](int i) { return "a" + std::to_string(i); };

  std::vector<RawStatement> stmts;

  // Mention every atom at least once so the universe is exactly n atoms.
  for (int i = 0; i < n; ++i) {
    if (rng.below(2) == 0) continue;
    RawStatement ch;
    ch.type = RawStatement::RuleStmt;
    ch.kind = RuleKind::Choice;
    ch.heads.push_back(atomName(i));
    stmts.push_back(ch);
  }
  // Guarantee all atoms are interned regardless of the dice above.
  {
    RawStatement ch;
    ch.type = RawStatement::RuleStmt;
    ch.kind = RuleKind::Choice;
    for (int i = 0; i < n; ++i) ch.heads.push_back(atomName(i));
    // A choice rule with an unsatisfiable cardinality body would change
    // semantics; an unconditioned choice over everything keeps the program
    // rich in models. Add it only half of the time.
    if (rng.below(2) == 0) {
      stmts.push_back(ch);
    } else {
      // Otherwise mention leftover atoms in a never-firing basic rule.
      RawStatement r;
      r.type = RawStatement::RuleStmt;
      r.kind = RuleKind::Cardinality;
      r.heads.push_back(atomName(0));
      for (int i = 0; i < n; ++i) r.body.push_back({atomName(i), true, 1});
      r.bound = n + 1;  // never applicable
      stmts.push_back(r);
    }
  }

  const int numRules = (int)rng.below((uint64_t)maxRules + 1);
  for (int k = 0; k < numRules; ++k) {
    RawStatement r;
    r.type = RawStatement::RuleStmt;
    const uint64_t kindDie = rng.below(4);
    r.kind = kindDie == 0   ? RuleKind::Basic
             : kindDie == 1 ? RuleKind::Choice
             : kindDie == 2 ? RuleKind::Cardinality
                            : RuleKind::Weight;
    const int numHeads = r.kind == RuleKind::Choice ? 1 + (int)rng.below(3) : 1;
    for (int h = 0; h < numHeads; ++h) {
      r.heads.push_back(atomName((int)rng.below((uint64_t)n)));
    }
    const int bodySize = (int)rng.below(4);
    for (int b = 0; b < bodySize; ++b) {
      RawLiteral lit;
      lit.name = atomName((int)rng.below((uint64_t)n));
      lit.positive = rng.below(2) == 0;
      lit.weight = (int64_t)rng.below(4);  // 0..3; negatives covered separately
      r.body.push_back(lit);
    }
    if (r.kind == RuleKind::Cardinality) {
      r.bound = (int64_t)rng.below((uint64_t)bodySize + 2);
    } else if (r.kind == RuleKind::Weight) {
      r.bound = (int64_t)rng.below(7);
      r.lessEqual = false;
    }
    stmts.push_back(r);
  }

  if (allowCompute && rng.below(2) == 0) {
    RawStatement c;
    c.type = RawStatement::Compute;
    const int size = (int)rng.below(3);
    for (int i = 0; i < size; ++i) {
      c.body.push_back({atomName((int)rng.below((uint64_t)n)),
                        rng.below(2) == 0, 1});
    }
    stmts.push_back(c);
  }
  if (allowOptimize && rng.below(2) == 0) {
    const int numStmts = 1 + (int)rng.below(2);
    for (int s = 0; s < numStmts; ++s) {
      RawStatement m;
      m.type = RawStatement::Minimize;
      const int size = (int)rng.below(4);
      for (int i = 0; i < size; ++i) {
        m.body.push_back({atomName((int)rng.below((uint64_t)n)),
                          rng.below(2) == 0, (int64_t)rng.below(4)});
      }
      stmts.push_back(m);
    }
  }
  return build_program(stmts);
}

// A random consistent partial assignment over the program's atoms.
inline aspen::LitSet randomAssignment(aspen::SplitMix64& rng,
                                      const aspen::Program& p) {
  aspen::LitSet a(p.numAtoms());
  for (aspen::Atom at = 0; at < p.numAtoms(); ++at) {
    const uint64_t die = rng.below(4);
    if (die == 0) a.pos.add(at);
    if (die == 1) a.neg.add(at);
  }
  return a;
}

}  // namespace testutil
