#include "aspen/program.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace aspen {

Atom Program::intern(const std::string& name) {
  auto it = atomIds.find(name);
  if (it != atomIds.end()) return it->second;
  Atom id = (Atom)atomNames.size();
  atomNames.push_back(name);
  atomIds.emplace(name, id);
  return id;
}

namespace {

void sortUnique(std::vector<Atom>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

int64_t checkedAdd(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("weight sum unrepresentable");
  return r;
}

int64_t checkedMul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("scaled weight unrepresentable");
  return r;
}

// Merges duplicate literals by summing their weights.
std::map<Literal, int64_t> mergeWeighted(const std::vector<WeightedLiteral>& entries) {
  std::map<Literal, int64_t> m;
  for (const auto& e : entries) m[e.lit] = checkedAdd(m.count(e.lit) ? m[e.lit] : 0, e.weight);
  return m;
}

std::vector<WeightedLiteral> toVector(const std::map<Literal, int64_t>& m) {
  std::vector<WeightedLiteral> out;
  out.reserve(m.size());
  for (const auto& [lit, w] : m) out.push_back({lit, w});
  return out;
}

// Flips negative-weight entries to their complements. `boundDelta`, when
// given, accumulates the bound increase for weight rules.
std::map<Literal, int64_t> eliminateNegative(const std::map<Literal, int64_t>& in,
                                             int64_t* boundDelta) {
  std::map<Literal, int64_t> out;
  for (const auto& [lit, w] : in) {
    if (w < 0) {
      int64_t pw = -w;  // safe: weights parsed as int64, -INT64_MIN rejected upstream
      if (boundDelta) *boundDelta = checkedAdd(*boundDelta, pw);
      out[complement(lit)] = checkedAdd(out.count(complement(lit)) ? out[complement(lit)] : 0, pw);
    } else {
      out[lit] = checkedAdd(out.count(lit) ? out[lit] : 0, w);
    }
  }
  return out;
}

}  // namespace

Rule normalize_weight_rule(Rule r, bool lessEqual) {
  std::map<Literal, int64_t> body;
  for (size_t i = 0; i < r.posBody.size(); ++i)
    body[pos(r.posBody[i])] = checkedAdd(body.count(pos(r.posBody[i])) ? body[pos(r.posBody[i])] : 0,
                                         r.posWeights[i]);
  for (size_t i = 0; i < r.negBody.size(); ++i)
    body[neg(r.negBody[i])] = checkedAdd(body.count(neg(r.negBody[i])) ? body[neg(r.negBody[i])] : 0,
                                         r.negWeights[i]);
  int64_t bound = r.bound;
  if (lessEqual) {
    // sum <= b  <=>  -sum >= -b
    for (auto& [lit, w] : body) {
      if (w == std::numeric_limits<int64_t>::min())
        throw std::overflow_error("weight unrepresentable after negation");
      w = -w;
    }
    if (bound == std::numeric_limits<int64_t>::min())
      throw std::overflow_error("bound unrepresentable after negation");
    bound = -bound;
  }
  int64_t delta = 0;
  body = eliminateNegative(body, &delta);
  bound = checkedAdd(bound, delta);

  Rule out;
  out.kind = RuleKind::Weight;
  out.heads = r.heads;
  out.bound = bound;
  for (const auto& [lit, w] : body) {
    if (lit.positive) {
      out.posBody.push_back(lit.atom);
      out.posWeights.push_back(w);
    } else {
      out.negBody.push_back(lit.atom);
      out.negWeights.push_back(w);
    }
  }
  return out;
}

OptimizeStatement normalize_minimize(const OptimizeStatement& s) {
  OptimizeStatement out;
  out.kind = OptimizeKind::Minimize;
  out.entries = toVector(eliminateNegative(mergeWeighted(s.entries), nullptr));
  return out;
}

OptimizeStatement maximize_to_minimize(const OptimizeStatement& s) {
  OptimizeStatement negated;
  negated.kind = OptimizeKind::Minimize;
  for (const auto& e : s.entries) {
    if (e.weight == std::numeric_limits<int64_t>::min())
      throw std::overflow_error("weight unrepresentable after negation");
    negated.entries.push_back({e.lit, -e.weight});
  }
  return normalize_minimize(negated);
}

OptimizeStatement combine_minimize(const OptimizeStatement& s1,
                                   const OptimizeStatement& s2) {
  int64_t total = 0;
  for (const auto& e : s2.entries) total = checkedAdd(total, e.weight);
  // smallest power of two strictly greater than the sum of s2's weights
  int64_t scale = 1;
  while (scale <= total) scale = checkedMul(scale, 2);

  std::map<Literal, int64_t> m;
  for (const auto& e : s1.entries) {
    int64_t w = checkedMul(e.weight, scale);
    m[e.lit] = checkedAdd(m.count(e.lit) ? m[e.lit] : 0, w);
  }
  for (const auto& e : s2.entries)
    m[e.lit] = checkedAdd(m.count(e.lit) ? m[e.lit] : 0, e.weight);

  OptimizeStatement out;
  out.kind = OptimizeKind::Minimize;
  out.entries = toVector(m);
  return out;
}

Program build_program(const std::vector<RawStatement>& statements) {
  Program p;
  std::map<Literal, bool> computeSeen;
  std::vector<Literal> computeOrder;

  for (const auto& st : statements) {
    switch (st.type) {
      case RawStatement::RuleStmt: {
        Rule r;
        r.kind = st.kind;
        for (const auto& h : st.heads) r.heads.push_back(p.intern(h));
        if (st.kind == RuleKind::Weight) {
          for (const auto& l : st.body) {
            Atom a = p.intern(l.name);
            if (l.positive) {
              r.posBody.push_back(a);
              r.posWeights.push_back(l.weight);
            } else {
              r.negBody.push_back(a);
              r.negWeights.push_back(l.weight);
            }
          }
          r.bound = st.bound;
          r = normalize_weight_rule(r, st.lessEqual);
        } else {
          for (const auto& l : st.body)
            (l.positive ? r.posBody : r.negBody).push_back(p.intern(l.name));
          sortUnique(r.posBody);
          sortUnique(r.negBody);
          r.bound = st.bound;
        }
        if (st.kind == RuleKind::Choice) sortUnique(r.heads);
        p.rules.push_back(std::move(r));
        break;
      }
      case RawStatement::Compute: {
        for (const auto& l : st.body) {
          Literal lit{p.intern(l.name), l.positive};
          if (!computeSeen.count(lit)) {
            computeSeen[lit] = true;
            computeOrder.push_back(lit);
          }
        }
        break;
      }
      case RawStatement::Minimize:
      case RawStatement::Maximize: {
        OptimizeStatement s;
        s.kind = st.type == RawStatement::Minimize ? OptimizeKind::Minimize
                                                   : OptimizeKind::Maximize;
        for (const auto& l : st.body) s.entries.push_back({{p.intern(l.name), l.positive}, l.weight});
        p.optimize.push_back(s.kind == OptimizeKind::Maximize ? maximize_to_minimize(s)
                                                              : normalize_minimize(s));
        break;
      }
    }
  }
  p.compute.required.assign(computeOrder.begin(), computeOrder.end());
  std::sort(p.compute.required.begin(), p.compute.required.end());
  p.compute.required.erase(
      std::unique(p.compute.required.begin(), p.compute.required.end()),
      p.compute.required.end());
  return p;
}

std::vector<Atom> atoms_of(const Program& p) {
  std::vector<bool> seen(p.numAtoms(), false);
  for (const auto& r : p.rules) {
    for (Atom a : r.heads) seen[a] = true;
    for (Atom a : r.posBody) seen[a] = true;
    for (Atom a : r.negBody) seen[a] = true;
  }
  for (const auto& l : p.compute.required) seen[l.atom] = true;
  for (const auto& s : p.optimize)
    for (const auto& e : s.entries) seen[e.lit.atom] = true;
  std::vector<Atom> out;
  for (Atom a = 0; a < p.numAtoms(); ++a)
    if (seen[a]) out.push_back(a);
  return out;
}

}  // namespace aspen
