#include "aspen/encodings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "aspen/rng.hpp"

namespace aspen {

namespace {

RawLiteral lit(std::string name, bool positive = true, int64_t weight = 1) {
  return {std::move(name), positive, weight};
}

std::string varName(int v) { return "x" + std::to_string(v); }

std::string pigeonName(int i, int j) {
  return "p(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::string vertexName(int v) { return "v(" + std::to_string(v) + ")"; }

std::string edgeName(int u, int v) {
  if (u > v) std::swap(u, v);
  return "e(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

std::string wordName(int i) { return "w" + std::to_string(i); }

std::string itemName(int i, int j) {
  return "b(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

RawStatement choiceOver(std::vector<std::string> heads) {
  RawStatement s;
  s.type = RawStatement::RuleStmt;
  s.kind = RuleKind::Choice;
  s.heads = std::move(heads);
  return s;
}

RawStatement falseCard(int64_t bound, std::vector<RawLiteral> body) {
  RawStatement s;
  s.type = RawStatement::RuleStmt;
  s.kind = RuleKind::Cardinality;
  s.heads = {"false"};
  s.bound = bound;
  s.body = std::move(body);
  return s;
}

RawStatement basicRule(std::string head, std::vector<RawLiteral> body = {}) {
  RawStatement s;
  s.type = RawStatement::RuleStmt;
  s.kind = RuleKind::Basic;
  s.heads = {std::move(head)};
  s.body = std::move(body);
  return s;
}

RawStatement computeNotFalse() {
  RawStatement s;
  s.type = RawStatement::Compute;
  s.body = {lit("false", false)};
  return s;
}

}  // namespace

Program encode_3sat(const CnfFormula& f) {
  std::vector<RawStatement> stmts;
  std::vector<std::string> vars;
  for (int v = 1; v <= f.numAtoms; ++v) vars.push_back(varName(v));
  if (!vars.empty()) stmts.push_back(choiceOver(vars));
  for (const auto& clause : f.clauses) {
    RawStatement r = basicRule("false");
    for (int l : clause) {
      // The rule fires exactly when every clause literal is false.
      r.body.push_back(lit(varName(std::abs(l)), l < 0));
    }
    stmts.push_back(std::move(r));
  }
  stmts.push_back(computeNotFalse());
  return build_program(stmts);
}

Program encode_pigeonhole(int pigeons, int holes) {
  std::vector<RawStatement> stmts;
  for (int i = 1; i <= pigeons; ++i) {
    std::vector<std::string> heads;
    std::vector<RawLiteral> posBody, negBody;
    for (int j = 1; j <= holes; ++j) {
      heads.push_back(pigeonName(i, j));
      posBody.push_back(lit(pigeonName(i, j)));
      negBody.push_back(lit(pigeonName(i, j), false));
    }
    stmts.push_back(choiceOver(heads));
    stmts.push_back(falseCard(2, posBody));
    stmts.push_back(basicRule("false", negBody));
  }
  for (int j = 1; j <= holes; ++j) {
    std::vector<RawLiteral> body;
    for (int i = 1; i <= pigeons; ++i) body.push_back(lit(pigeonName(i, j)));
    stmts.push_back(falseCard(2, body));
  }
  stmts.push_back(computeNotFalse());
  return build_program(stmts);
}

Program encode_hamiltonian(const UndirectedGraph& g) {
  std::vector<std::vector<int>> incident(g.vertices + 1);
  for (auto [u, v] : g.edges) {
    incident[u].push_back(v);
    incident[v].push_back(u);
  }
  std::vector<RawStatement> stmts;
  for (int v = 1; v <= g.vertices; ++v) {
    std::vector<std::string> heads;
    std::vector<RawLiteral> posBody, negBody;
    for (int w : incident[v]) {
      heads.push_back(edgeName(v, w));
      posBody.push_back(lit(edgeName(v, w)));
      negBody.push_back(lit(edgeName(v, w), false));
    }
    stmts.push_back(choiceOver(heads));
    stmts.push_back(falseCard(3, posBody));
    // At least two incident edges: forbid all-but-one of them being out.
    stmts.push_back(
        falseCard(std::max<int64_t>((int64_t)incident[v].size() - 1, 0), negBody));
  }
  const int anchor = 1;
  stmts.push_back(basicRule(vertexName(anchor)));
  for (auto [u, v] : g.edges) {
    if (v != anchor) {
      stmts.push_back(basicRule(vertexName(v),
                                {lit(vertexName(u)), lit(edgeName(u, v))}));
    }
    if (u != anchor) {
      stmts.push_back(basicRule(vertexName(u),
                                {lit(vertexName(v)), lit(edgeName(u, v))}));
    }
  }
  RawStatement computeVertices;
  computeVertices.type = RawStatement::Compute;
  for (int v = 1; v <= g.vertices; ++v) computeVertices.body.push_back(lit(vertexName(v)));
  stmts.push_back(std::move(computeVertices));
  stmts.push_back(computeNotFalse());
  return build_program(stmts);
}

Program encode_code(int n, int d, bool allowLarge) {
  if (d < 1 || d > n || (!allowLarge && n > 12)) {
    throw std::invalid_argument("encode_code: need 1 <= d <= n <= 12");
  }
  const int words = 1 << n;
  std::vector<RawStatement> stmts;
  for (int i = 0; i < words; ++i) {
    RawStatement r = basicRule(wordName(i));
    for (int j = 0; j < words; ++j) {
      const int dist = std::popcount((unsigned)(i ^ j));
      if (dist > 0 && dist < d) r.body.push_back(lit(wordName(j), false));
    }
    stmts.push_back(std::move(r));
  }
  stmts.push_back(basicRule(wordName(0)));
  {
    // Some word with its d lowest bits all set must be in the code.
    RawStatement r = basicRule("false");
    for (int j = (1 << d) - 1; j < words; j += 1 << d) {
      r.body.push_back(lit(wordName(j), false));
    }
    stmts.push_back(std::move(r));
  }
  stmts.push_back(computeNotFalse());
  RawStatement maxStmt;
  maxStmt.type = RawStatement::Maximize;
  for (int i = 0; i < words; ++i) maxStmt.body.push_back(lit(wordName(i)));
  stmts.push_back(std::move(maxStmt));
  return build_program(stmts);
}

Program encode_binpacking(const std::vector<int64_t>& sizes, int bins,
                          int64_t capacity) {
  const int n = (int)sizes.size();
  std::vector<RawStatement> stmts;
  for (int i = 1; i <= n; ++i) {
    std::vector<std::string> heads;
    std::vector<RawLiteral> posBody, negBody;
    for (int j = 1; j <= bins; ++j) {
      heads.push_back(itemName(i, j));
      posBody.push_back(lit(itemName(i, j)));
      negBody.push_back(lit(itemName(i, j), false));
    }
    stmts.push_back(choiceOver(heads));
    stmts.push_back(falseCard(2, posBody));
    stmts.push_back(basicRule("false", negBody));
  }
  for (int j = 1; j <= bins; ++j) {
    RawStatement r;
    r.type = RawStatement::RuleStmt;
    r.kind = RuleKind::Weight;
    r.heads = {"false"};
    r.bound = capacity + 1;
    for (int i = 1; i <= n; ++i) r.body.push_back(lit(itemName(i, j), true, sizes[i - 1]));
    stmts.push_back(std::move(r));
  }
  stmts.push_back(computeNotFalse());
  return build_program(stmts);
}

// ---- Readers ---------------------------------------------------------------

namespace {

struct LineScanner {
  std::istringstream in;
  int line = 0;

  explicit LineScanner(const std::string& text) : in(text) {}

  bool nextLine(std::string& out) {
    while (std::getline(in, out)) {
      ++line;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      return true;
    }
    return false;
  }
};

ParseError err(int line, std::string message) {
  ParseError e;
  e.line = line;
  e.column = 1;
  e.message = std::move(message);
  return e;
}

}  // namespace

std::variant<CnfFormula, ParseError> read_dimacs(const std::string& text) {
  LineScanner sc(text);
  std::string s;
  CnfFormula f;
  int declaredClauses = -1;
  std::vector<int> clause;
  bool sawHeader = false;
  while (sc.nextLine(s)) {
    if (s.empty() || s[0] == 'c') continue;
    std::istringstream ls(s);
    if (!sawHeader) {
      std::string p, fmt;
      if (!(ls >> p >> fmt >> f.numAtoms >> declaredClauses) || p != "p" ||
          fmt != "cnf" || f.numAtoms < 0 || declaredClauses < 0) {
        return err(sc.line, "expected header 'p cnf <vars> <clauses>'");
      }
      sawHeader = true;
      continue;
    }
    int l;
    while (ls >> l) {
      if (l == 0) {
        if (clause.empty()) return err(sc.line, "empty clause");
        f.clauses.push_back(clause);
        clause.clear();
      } else {
        if (std::abs(l) > f.numAtoms) {
          return err(sc.line, "variable out of range: " + std::to_string(l));
        }
        clause.push_back(l);
      }
    }
    if (!ls.eof()) return err(sc.line, "expected integer literal");
  }
  if (!sawHeader) return err(sc.line, "missing 'p cnf' header");
  if (!clause.empty()) return err(sc.line, "clause missing terminating 0");
  if (declaredClauses >= 0 && (int)f.clauses.size() != declaredClauses) {
    return err(sc.line, "clause count does not match header");
  }
  return f;
}

std::variant<UndirectedGraph, ParseError> read_graph(const std::string& text) {
  LineScanner sc(text);
  std::string s;
  UndirectedGraph g;
  int declaredEdges = -1;
  bool sawHeader = false;
  std::set<std::pair<int, int>> seen;
  while (sc.nextLine(s)) {
    if (s.empty() || s[0] == 'c') continue;
    std::istringstream ls(s);
    if (!sawHeader) {
      std::string p, fmt;
      if (!(ls >> p >> fmt >> g.vertices >> declaredEdges) || p != "p" ||
          fmt != "edge" || g.vertices < 0 || declaredEdges < 0) {
        return err(sc.line, "expected header 'p edge <vertices> <edges>'");
      }
      sawHeader = true;
      continue;
    }
    std::string e;
    int u, v;
    if (!(ls >> e >> u >> v) || e != "e") {
      return err(sc.line, "expected edge line 'e <u> <v>'");
    }
    if (u < 1 || u > g.vertices || v < 1 || v > g.vertices) {
      return err(sc.line, "vertex out of range");
    }
    if (u == v) return err(sc.line, "self-loop not allowed");
    if (u > v) std::swap(u, v);
    if (seen.insert({u, v}).second) g.edges.push_back({u, v});
  }
  if (!sawHeader) return err(sc.line, "missing 'p edge' header");
  if (declaredEdges >= 0 && (int)seen.size() != declaredEdges) {
    return err(sc.line, "edge count does not match header");
  }
  return g;
}

CnfFormula random_3sat(int numAtoms, uint64_t seed) {
  CnfFormula f;
  f.numAtoms = numAtoms;
  if (numAtoms < 3) return f;
  const double ratio = 4.258 + 58.26 * std::pow((double)numAtoms, -5.0 / 3.0);
  const int clauses = (int)std::lround(ratio * numAtoms);
  SplitMix64 rng(seed);
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> vars;
    while ((int)vars.size() < 3) {
      const int v = (int)rng.below((uint64_t)numAtoms) + 1;
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    std::vector<int> clause;
    for (int v : vars) clause.push_back(rng.below(2) ? v : -v);
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

// ---- Decoders --------------------------------------------------------------

std::vector<std::pair<int, int>> decode_hamiltonian(const Program& p,
                                                    const AtomSet& model) {
  std::vector<std::pair<int, int>> edges;
  for (Atom a = 0; a < p.numAtoms(); ++a) {
    if (!model.contains(a)) continue;
    const std::string& name = p.name(a);
    int u, v;
    if (std::sscanf(name.c_str(), "e(%d,%d)", &u, &v) == 2) edges.push_back({u, v});
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

bool is_hamiltonian_cycle(const UndirectedGraph& g,
                          const std::vector<std::pair<int, int>>& edges) {
  if (g.vertices < 3 || (int)edges.size() != g.vertices) return false;
  std::set<std::pair<int, int>> valid(g.edges.begin(), g.edges.end());
  std::vector<std::vector<int>> adj(g.vertices + 1);
  for (auto [u, v] : edges) {
    if (!valid.count({std::min(u, v), std::max(u, v)})) return false;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (int v = 1; v <= g.vertices; ++v) {
    if (adj[v].size() != 2) return false;
  }
  // Walk the cycle; it must return to the start after exactly |V| steps.
  int prev = 1, cur = adj[1][0], steps = 1;
  while (cur != 1) {
    const int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
    if (++steps > g.vertices) return false;
  }
  return steps == g.vertices;
}

std::vector<int> decode_code(const Program& p, const AtomSet& model) {
  std::vector<int> words;
  for (Atom a = 0; a < p.numAtoms(); ++a) {
    if (!model.contains(a)) continue;
    const std::string& name = p.name(a);
    int w;
    if (std::sscanf(name.c_str(), "w%d", &w) == 1) words.push_back(w);
  }
  std::sort(words.begin(), words.end());
  return words;
}

bool is_code(int n, int d, const std::vector<int>& words) {
  for (int w : words) {
    if (w < 0 || w >= (1 << n)) return false;
  }
  for (size_t i = 0; i < words.size(); ++i) {
    for (size_t j = i + 1; j < words.size(); ++j) {
      if (std::popcount((unsigned)(words[i] ^ words[j])) < d) return false;
    }
  }
  return true;
}

}  // namespace aspen
