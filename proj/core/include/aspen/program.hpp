// Ground logic programs: atoms, literals, the four rule forms, and the
// compute/optimize statements, together with the normalizations applied
// when a program is built (weight-rule sign elimination, maximize->minimize
// conversion, duplicate merging).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace aspen {

using Atom = int32_t;

struct Literal {
  Atom atom = 0;
  bool positive = true;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.atom == b.atom && a.positive == b.positive;
  }
  friend auto operator<=>(const Literal& a, const Literal& b) {
    if (a.atom != b.atom) return a.atom <=> b.atom;
    return (int)a.positive <=> (int)b.positive;
  }
};

inline Literal pos(Atom a) { return {a, true}; }
inline Literal neg(Atom a) { return {a, false}; }
inline Literal complement(Literal x) { return {x.atom, !x.positive}; }

enum class RuleKind { Basic, Choice, Cardinality, Weight };

// Bodies are stored as sorted, deduplicated atom vectors. Weight rules carry
// parallel weight vectors; after normalization all weights are nonnegative
// and the bound is a >= bound.
struct Rule {
  RuleKind kind = RuleKind::Basic;
  std::vector<Atom> heads;            // length 1 unless Choice
  std::vector<Atom> posBody;
  std::vector<Atom> negBody;
  std::vector<int64_t> posWeights;    // Weight only, parallel to posBody
  std::vector<int64_t> negWeights;    // Weight only, parallel to negBody
  int64_t bound = 0;                  // Cardinality k / Weight w

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct ComputeStatement {
  std::vector<Literal> required;      // sorted, deduplicated

  friend bool operator==(const ComputeStatement&, const ComputeStatement&) = default;
};

enum class OptimizeKind { Minimize, Maximize };

struct WeightedLiteral {
  Literal lit;
  int64_t weight = 0;

  friend bool operator==(const WeightedLiteral&, const WeightedLiteral&) = default;
};

struct OptimizeStatement {
  OptimizeKind kind = OptimizeKind::Minimize;
  std::vector<WeightedLiteral> entries;  // sorted by literal, merged

  friend bool operator==(const OptimizeStatement&, const OptimizeStatement&) = default;
};

struct Program {
  std::vector<std::string> atomNames;                  // dense ids 0..n-1
  std::unordered_map<std::string, Atom> atomIds;
  std::vector<Rule> rules;
  ComputeStatement compute;
  std::vector<OptimizeStatement> optimize;             // all Minimize, rank = index

  int numAtoms() const { return (int)atomNames.size(); }
  const std::string& name(Atom a) const { return atomNames[a]; }
  std::optional<Atom> find(const std::string& name) const {
    auto it = atomIds.find(name);
    if (it == atomIds.end()) return std::nullopt;
    return it->second;
  }
  Atom intern(const std::string& name);
};

// ---- Raw statements (parser output / generator input) ----------------------

struct RawLiteral {
  std::string name;
  bool positive = true;
  int64_t weight = 1;  // meaningful for weight rules / optimize statements
};

struct RawStatement {
  enum Type { RuleStmt, Compute, Minimize, Maximize } type = RuleStmt;
  RuleKind kind = RuleKind::Basic;    // for RuleStmt
  std::vector<std::string> heads;
  std::vector<RawLiteral> body;       // also holds compute/optimize entries
  int64_t bound = 0;
  bool lessEqual = false;             // weight rule parsed with <=
};

// Interns atoms, normalizes weight rules and optimize statements, merges
// duplicates, and unions compute statements.
Program build_program(const std::vector<RawStatement>& statements);

// Eliminates negative weights (literal x = -w becomes complement(x) = w with
// the bound raised by w) and converts a <=-bound rule into >=-form by negating
// all weights and the bound first.
Rule normalize_weight_rule(Rule r, bool lessEqual = false);

// Negates every weight, then flips negative-weight literals to their
// complements so stored weights are nonnegative; each flip changes all model
// weights by the same constant, preserving the model ordering.
OptimizeStatement maximize_to_minimize(const OptimizeStatement& s);

// Same sign-elimination applied to a user-written minimize statement.
OptimizeStatement normalize_minimize(const OptimizeStatement& s);

// Scales s1's weights by 2^k with 2^k > sum of s2's weights and adds s2, so
// the combined order equals the lexicographic order under (s1, s2).
// Throws std::overflow_error if the scaled weights are unrepresentable.
OptimizeStatement combine_minimize(const OptimizeStatement& s1,
                                   const OptimizeStatement& s2);

// All atoms appearing in rules or statements (== every interned atom).
std::vector<Atom> atoms_of(const Program& p);

}  // namespace aspen
