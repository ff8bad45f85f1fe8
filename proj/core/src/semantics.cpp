#include "aspen/semantics.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace aspen {

int AtomSet::count() const {
  int c = 0;
  for (bool b : bits) c += b;
  return c;
}

bool AtomSet::subsetOf(const AtomSet& other) const {
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i] && !other.bits[i]) return false;
  return true;
}

std::vector<Atom> AtomSet::members() const {
  std::vector<Atom> out;
  for (Atom a = 0; a < (Atom)bits.size(); ++a)
    if (bits[a]) out.push_back(a);
  return out;
}

bool LitSet::inconsistent() const {
  for (size_t i = 0; i < pos.bits.size(); ++i)
    if (pos.bits[i] && neg.bits[i]) return true;
  return false;
}

bool LitSet::covers() const {
  for (size_t i = 0; i < pos.bits.size(); ++i)
    if (!pos.bits[i] && !neg.bits[i]) return false;
  return true;
}

// ---- Reduct and closure ----------------------------------------------------

Program reduct(const Program& p, const AtomSet& s) {
  Program out;
  out.atomNames = p.atomNames;
  out.atomIds = p.atomIds;
  for (const auto& r : p.rules) {
    if (r.kind != RuleKind::Basic)
      throw std::invalid_argument("reduct is defined for basic rules only");
    bool blocked = false;
    for (Atom a : r.negBody)
      if (s.contains(a)) blocked = true;
    if (blocked) continue;
    Rule h;
    h.kind = RuleKind::Basic;
    h.heads = r.heads;
    h.posBody = r.posBody;
    out.rules.push_back(std::move(h));
  }
  return out;
}

AtomSet deductive_closure(const Program& horn) {
  for (const auto& r : horn.rules)
    if (r.kind != RuleKind::Basic || !r.negBody.empty())
      throw std::invalid_argument("deductive_closure needs a negation-free program");
  int n = horn.numAtoms();
  AtomSet closure(n);
  std::vector<int> counter(horn.rules.size());
  std::vector<std::vector<int>> bodyOf(n);  // atom -> rules with it in the body
  std::deque<Atom> queue;
  std::vector<bool> queued(n, false);
  for (size_t i = 0; i < horn.rules.size(); ++i) {
    counter[i] = (int)horn.rules[i].posBody.size();
    for (Atom a : horn.rules[i].posBody) bodyOf[a].push_back((int)i);
    if (counter[i] == 0 && !queued[horn.rules[i].heads[0]]) {
      queued[horn.rules[i].heads[0]] = true;
      queue.push_back(horn.rules[i].heads[0]);
    }
  }
  while (!queue.empty()) {
    Atom a = queue.front();
    queue.pop_front();
    if (closure.contains(a)) continue;
    closure.add(a);
    for (int ri : bodyOf[a])
      if (--counter[ri] == 0) {
        Atom h = horn.rules[ri].heads[0];
        if (!closure.contains(h) && !queued[h]) {
          queued[h] = true;
          queue.push_back(h);
        }
      }
  }
  return closure;
}

// ---- Rule interpretation ---------------------------------------------------

namespace {

bool bodySat(const Rule& r, const AtomSet& s, const AtomSet& c) {
  for (Atom a : r.posBody)
    if (!c.contains(a)) return false;
  for (Atom b : r.negBody)
    if (s.contains(b)) return false;
  return true;
}

int64_t satCount(const Rule& r, const AtomSet& s, const AtomSet& c) {
  int64_t n = 0;
  for (Atom a : r.posBody) n += c.contains(a);
  for (Atom b : r.negBody) n += !s.contains(b);
  return n;
}

int64_t satWeight(const Rule& r, const AtomSet& s, const AtomSet& c) {
  int64_t n = 0;
  for (size_t i = 0; i < r.posBody.size(); ++i)
    if (c.contains(r.posBody[i])) n += r.posWeights[i];
  for (size_t i = 0; i < r.negBody.size(); ++i)
    if (!s.contains(r.negBody[i])) n += r.negWeights[i];
  return n;
}

AtomSet fRule(const Program& p, const Rule& r, const AtomSet& s, const AtomSet& c,
              bool prime) {
  AtomSet out(p.numAtoms());
  switch (r.kind) {
    case RuleKind::Basic:
      if (bodySat(r, s, c)) out.add(r.heads[0]);
      break;
    case RuleKind::Choice:
      if (bodySat(r, s, c))
        for (Atom h : r.heads)
          if (prime || s.contains(h)) out.add(h);
      break;
    case RuleKind::Cardinality:
      if (satCount(r, s, c) >= r.bound) out.add(r.heads[0]);
      break;
    case RuleKind::Weight:
      if (satWeight(r, s, c) >= r.bound) out.add(r.heads[0]);
      break;
  }
  return out;
}

}  // namespace

AtomSet f_r(const Program& p, const Rule& r, const AtomSet& s, const AtomSet& c) {
  return fRule(p, r, s, c, false);
}

AtomSet f_r_prime(const Program& p, const Rule& r, const AtomSet& s, const AtomSet& c) {
  return fRule(p, r, s, c, true);
}

AtomSet gP(const Program& p, const AtomSet& s) {
  return lfp(
      [&](const AtomSet& a) {
        AtomSet next = a;
        for (const auto& r : p.rules) {
          AtomSet f = fRule(p, r, s, a, false);
          for (size_t i = 0; i < f.bits.size(); ++i)
            if (f.bits[i]) next.bits[i] = true;
        }
        return next;
      },
      p.numAtoms());
}

bool is_stable(const Program& p, const AtomSet& s) { return s == gP(p, s); }

ModelReport report(const Program& p, const AtomSet& s) {
  ModelReport r;
  r.model = s;
  for (const auto& st : p.optimize) {
    int64_t w = 0;
    for (const auto& e : st.entries)
      if (e.lit.positive ? s.contains(e.lit.atom) : !s.contains(e.lit.atom)) w += e.weight;
    r.weights.push_back(w);
  }
  r.satisfiesCompute = true;
  for (const auto& l : p.compute.required)
    if (l.positive ? !s.contains(l.atom) : s.contains(l.atom)) r.satisfiesCompute = false;
  return r;
}

std::vector<ModelReport> enumerate_bruteforce(const Program& p, int limit,
                                              bool applyCompute) {
  int n = p.numAtoms();
  if (n > limit) throw std::length_error("atom universe exceeds the enumeration guard");
  std::vector<ModelReport> out;
  for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
    AtomSet s(n);
    for (int a = 0; a < n; ++a)
      if (mask & (1ull << a)) s.add(a);
    if (!is_stable(p, s)) continue;
    ModelReport rep = report(p, s);
    if (applyCompute && !rep.satisfiesCompute) continue;
    out.push_back(std::move(rep));
  }
  return out;  // ascending mask order is the canonical order
}

// ---- Monotone fixpoints ----------------------------------------------------

AtomSet lfp(const SetTransformer& f, int universe) {
  AtomSet a(universe);
  for (;;) {
    AtomSet next = f(a);
    if (next == a) return a;
    a = std::move(next);
  }
}

AtomSet gfp(const SetTransformer& f, int universe) {
  AtomSet a(universe);
  for (Atom x = 0; x < universe; ++x) a.add(x);
  for (;;) {
    AtomSet next = f(a);
    if (next == a) return a;
    a = std::move(next);
  }
}

// ---- Well-founded semantics ------------------------------------------------

WellFounded well_founded(const Program& p) {
  for (const auto& r : p.rules)
    if (r.kind != RuleKind::Basic)
      throw std::invalid_argument("well_founded is defined for normal programs only");
  int n = p.numAtoms();
  auto gamma = [&](const AtomSet& a) { return deductive_closure(reduct(p, a)); };
  auto gamma2 = [&](const AtomSet& a) { return gamma(gamma(a)); };
  WellFounded w;
  w.wplus = lfp(gamma2, n);
  AtomSet g = gfp(gamma2, n);
  w.wminus = AtomSet(n);
  for (Atom a = 0; a < n; ++a)
    if (!g.contains(a)) w.wminus.add(a);
  return w;
}

// ---- Reference propagation closures ----------------------------------------

namespace {

// Bounds on the number/weight of satisfied body literals over assignments
// consistent with the partial assignment B. The two occurrences of an atom
// that appears in both body parts are counted independently — the same
// abstraction the engine's counters use (an unassigned pair contributes 0 to
// the lower and both weights to the upper bound).
void bodyBounds(const Rule& r, const LitSet& b, int64_t& lo, int64_t& hi) {
  lo = hi = 0;
  auto posW = [&](size_t i) { return r.kind == RuleKind::Weight ? r.posWeights[i] : 1; };
  auto negW = [&](size_t i) { return r.kind == RuleKind::Weight ? r.negWeights[i] : 1; };
  for (size_t i = 0; i < r.posBody.size(); ++i) {
    Atom a = r.posBody[i];
    if (b.pos.contains(a)) lo += posW(i);
    if (!b.neg.contains(a)) hi += posW(i);
  }
  for (size_t i = 0; i < r.negBody.size(); ++i) {
    Atom a = r.negBody[i];
    if (b.neg.contains(a)) lo += negW(i);
    if (!b.pos.contains(a)) hi += negW(i);
  }
}

// min_r: heads derived under every completion consistent with B.
// max_r: heads derived under some such completion. An inconsistent B makes
// min_r contain everything and max_r nothing.
bool inMin(const Rule& r, Atom head, const LitSet& b) {
  if (b.inconsistent()) return true;
  switch (r.kind) {
    case RuleKind::Basic: {
      for (Atom a : r.posBody)
        if (!b.pos.contains(a)) return false;
      for (Atom a : r.negBody)
        if (!b.neg.contains(a)) return false;
      return true;
    }
    case RuleKind::Choice: {
      if (!b.pos.contains(head)) return false;
      for (Atom a : r.posBody)
        if (!b.pos.contains(a)) return false;
      for (Atom a : r.negBody)
        if (!b.neg.contains(a)) return false;
      return true;
    }
    case RuleKind::Cardinality:
    case RuleKind::Weight: {
      int64_t lo, hi;
      bodyBounds(r, b, lo, hi);
      return lo >= r.bound;
    }
  }
  return false;
}

bool inMax(const Rule& r, Atom head, const LitSet& b) {
  if (b.inconsistent()) return false;
  switch (r.kind) {
    case RuleKind::Basic: {
      for (Atom a : r.posBody)
        if (b.neg.contains(a)) return false;
      for (Atom a : r.negBody)
        if (b.pos.contains(a)) return false;
      return true;
    }
    case RuleKind::Choice: {
      if (b.neg.contains(head)) return false;
      for (Atom a : r.posBody)
        if (b.neg.contains(a)) return false;
      for (Atom a : r.negBody)
        if (b.pos.contains(a)) return false;
      return true;
    }
    case RuleKind::Cardinality:
    case RuleKind::Weight: {
      int64_t lo, hi;
      bodyBounds(r, b, lo, hi);
      return hi >= r.bound;
    }
  }
  return false;
}

LitSet fullLitSet(int n) {
  LitSet full(n);
  for (Atom a = 0; a < n; ++a) {
    full.pos.add(a);
    full.neg.add(a);
  }
  return full;
}

// Literals whose truth can influence rule r (its own atoms).
std::vector<Literal> ruleLiterals(const Rule& r) {
  std::vector<Literal> out;
  auto both = [&](Atom a) {
    out.push_back(pos(a));
    out.push_back(neg(a));
  };
  for (Atom a : r.heads) both(a);
  for (Atom a : r.posBody) both(a);
  for (Atom a : r.negBody) both(a);
  return out;
}

}  // namespace

LitSet reference_atleast(const Program& p, const LitSet& a) {
  int n = p.numAtoms();
  LitSet b = a;
  bool changed = true;
  while (changed) {
    if (b.inconsistent()) return fullLitSet(n);
    changed = false;
    auto addPos = [&](Atom x) {
      if (!b.pos.contains(x)) { b.pos.add(x); changed = true; }
    };
    auto addNeg = [&](Atom x) {
      if (!b.neg.contains(x)) { b.neg.add(x); changed = true; }
    };
    auto addLit = [&](Literal l) { l.positive ? addPos(l.atom) : addNeg(l.atom); };

    // Case 1: heads forced by every consistent completion.
    for (const auto& r : p.rules)
      for (Atom h : r.heads)
        if (inMin(r, h, b)) addPos(h);
    // Case 2: atoms no rule can derive.
    std::vector<bool> possible(n, false);
    for (const auto& r : p.rules)
      for (Atom h : r.heads)
        if (inMax(r, h, b)) possible[h] = true;
    for (Atom x = 0; x < n; ++x)
      if (!possible[x]) addNeg(x);
    // Case 3: a true atom with a single candidate rule forces whatever keeps
    // that rule applicable.
    for (Atom x = 0; x < n && !b.inconsistent(); ++x) {
      if (!b.pos.contains(x)) continue;
      const Rule* only = nullptr;
      int cnt = 0;
      for (const auto& r : p.rules)
        if (std::find(r.heads.begin(), r.heads.end(), x) != r.heads.end() &&
            inMax(r, x, b)) {
          ++cnt;
          only = &r;
        }
      if (cnt != 1) continue;
      for (Literal l : ruleLiterals(*only)) {
        LitSet trial = b;
        (l.positive ? trial.pos : trial.neg).add(l.atom);
        if (!inMax(*only, x, trial)) addLit(complement(l));
      }
    }
    // Case 4: a false atom blocks any assignment that would fire one of its
    // rules.
    for (Atom x = 0; x < n && !b.inconsistent(); ++x) {
      if (!b.neg.contains(x)) continue;
      for (const auto& r : p.rules) {
        if (std::find(r.heads.begin(), r.heads.end(), x) == r.heads.end()) continue;
        for (Literal l : ruleLiterals(r)) {
          LitSet trial = b;
          (l.positive ? trial.pos : trial.neg).add(l.atom);
          if (inMin(r, x, trial)) addLit(complement(l));
        }
      }
    }
  }
  return b;
}

AtomSet reference_atmost(const Program& p, const LitSet& a) {
  int n = p.numAtoms();
  return lfp(
      [&](const AtomSet& c) {
        AtomSet masked = c;
        for (Atom x = 0; x < n; ++x)
          if (a.neg.contains(x)) masked.bits[x] = false;
        AtomSet next = c;
        for (const auto& r : p.rules) {
          AtomSet f = fRule(p, r, a.pos, masked, true);
          for (Atom x = 0; x < n; ++x)
            if (f.bits[x] && !a.neg.contains(x)) next.bits[x] = true;
        }
        return next;
      },
      n);
}

LitSet reference_expand(const Program& p, const LitSet& a) {
  int n = p.numAtoms();
  LitSet b = a;
  for (;;) {
    LitSet prev = b;
    b = reference_atleast(p, b);
    if (b.inconsistent()) return fullLitSet(n);
    AtomSet upper = reference_atmost(p, b);
    for (Atom x = 0; x < n; ++x)
      if (!upper.contains(x)) b.neg.add(x);
    if (b.inconsistent()) return fullLitSet(n);
    if (b == prev) return b;
  }
}

}  // namespace aspen
