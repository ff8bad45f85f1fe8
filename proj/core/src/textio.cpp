#include "aspen/textio.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <sstream>

namespace aspen {

namespace {

enum class Tok {
  Name, Int, Not, Compute, Minimize, Maximize,
  LBrace, RBrace, Comma, Eq, Ge, Le, If, Dot, End
};

struct Token {
  Tok kind;
  std::string text;
  int64_t value = 0;
  bool valueOverflow = false;
  int line = 1, column = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, column = 1;
  ParseError* error;

  explicit Lexer(const std::string& s, ParseError* e) : src(s), error(e) {}

  void advance() {
    if (pos < src.size() && src[pos] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++pos;
  }

  bool fail(int l, int c, const std::string& msg) {
    *error = {l, c, msg, ParseError::Syntax};
    return false;
  }

  bool next(Token& t) {
    for (;;) {
      while (pos < src.size() && std::isspace((unsigned char)src[pos])) advance();
      if (pos < src.size() && src[pos] == '%') {
        while (pos < src.size() && src[pos] != '\n') advance();
        continue;
      }
      break;
    }
    t.line = line;
    t.column = column;
    if (pos >= src.size()) {
      t.kind = Tok::End;
      return true;
    }
    char c = src[pos];
    if (c == '{') { t.kind = Tok::LBrace; advance(); return true; }
    if (c == '}') { t.kind = Tok::RBrace; advance(); return true; }
    if (c == ',') { t.kind = Tok::Comma; advance(); return true; }
    if (c == '=') { t.kind = Tok::Eq; advance(); return true; }
    if (c == '.') { t.kind = Tok::Dot; advance(); return true; }
    if (c == '>' || c == '<') {
      char first = c;
      advance();
      if (pos >= src.size() || src[pos] != '=')
        return fail(t.line, t.column, "expected '=' after inequality sign");
      advance();
      t.kind = first == '>' ? Tok::Ge : Tok::Le;
      return true;
    }
    if (c == ':') {
      advance();
      if (pos >= src.size() || src[pos] != '-')
        return fail(t.line, t.column, "expected '-' after ':'");
      advance();
      t.kind = Tok::If;
      return true;
    }
    if (c == '-' || std::isdigit((unsigned char)c)) {
      std::string num;
      if (c == '-') { num += c; advance(); }
      if (pos >= src.size() || !std::isdigit((unsigned char)src[pos]))
        return fail(t.line, t.column, "expected digits");
      while (pos < src.size() && std::isdigit((unsigned char)src[pos])) {
        num += src[pos];
        advance();
      }
      errno = 0;
      char* end = nullptr;
      t.value = std::strtoll(num.c_str(), &end, 10);
      t.valueOverflow = errno == ERANGE;
      t.kind = Tok::Int;
      t.text = num;
      return true;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      std::string name;
      while (pos < src.size() &&
             (std::isalnum((unsigned char)src[pos]) || src[pos] == '_' || src[pos] == '\'')) {
        name += src[pos];
        advance();
      }
      // Bracketed compound names like p(1,2) are opaque strings.
      if (pos < src.size() && src[pos] == '(') {
        int depth = 0;
        do {
          if (src[pos] == '(') ++depth;
          if (src[pos] == ')') --depth;
          name += src[pos];
          advance();
          if (pos >= src.size() && depth > 0)
            return fail(t.line, t.column, "unterminated '(' in atom name");
        } while (depth > 0);
      }
      if (name == "not") t.kind = Tok::Not;
      else if (name == "compute") t.kind = Tok::Compute;
      else if (name == "minimize") t.kind = Tok::Minimize;
      else if (name == "maximize") t.kind = Tok::Maximize;
      else { t.kind = Tok::Name; t.text = name; }
      return true;
    }
    return fail(t.line, t.column, std::string("unexpected character '") + c + "'");
  }
};

struct Parser {
  Lexer lex;
  Token tok;
  ParseError error;
  bool ok = true;

  explicit Parser(const std::string& s) : lex(s, &error) { shift(); }

  void shift() {
    if (ok && !lex.next(tok)) ok = false;
  }

  void fail(const std::string& msg, ParseError::Kind kind = ParseError::Syntax) {
    if (ok) {
      error = {tok.line, tok.column, msg, kind};
      ok = false;
    }
  }

  bool expect(Tok k, const std::string& what) {
    if (!ok) return false;
    if (tok.kind != k) {
      fail("expected " + what);
      return false;
    }
    shift();
    return true;
  }

  bool intValue(int64_t& out, ParseError::Kind overflowKind) {
    if (!ok) return false;
    if (tok.kind != Tok::Int) {
      fail("expected integer");
      return false;
    }
    if (tok.valueOverflow) {
      fail("integer out of 64-bit range", overflowKind);
      return false;
    }
    out = tok.value;
    shift();
    return true;
  }

  bool literal(RawLiteral& l) {
    l.positive = true;
    if (tok.kind == Tok::Not) {
      l.positive = false;
      shift();
    }
    if (tok.kind != Tok::Name) {
      fail("expected atom name");
      return false;
    }
    l.name = tok.text;
    shift();
    return true;
  }

  // litlist (possibly empty, terminated by `end`)
  bool litList(std::vector<RawLiteral>& out, Tok end) {
    if (tok.kind == end) return true;
    for (;;) {
      RawLiteral l;
      if (!literal(l)) return false;
      out.push_back(l);
      if (tok.kind != Tok::Comma) return true;
      shift();
    }
  }

  bool wlitList(std::vector<RawLiteral>& out, Tok end) {
    if (tok.kind == end) return true;
    for (;;) {
      RawLiteral l;
      if (!literal(l)) return false;
      if (!expect(Tok::Eq, "'='")) return false;
      if (!intValue(l.weight, ParseError::BadWeight)) return false;
      out.push_back(l);
      if (tok.kind != Tok::Comma) return true;
      shift();
    }
  }

  bool statement(RawStatement& st) {
    switch (tok.kind) {
      case Tok::Compute: {
        shift();
        st.type = RawStatement::Compute;
        if (!expect(Tok::LBrace, "'{'")) return false;
        if (!litList(st.body, Tok::RBrace)) return false;
        return expect(Tok::RBrace, "'}'");
      }
      case Tok::Minimize:
      case Tok::Maximize: {
        st.type = tok.kind == Tok::Minimize ? RawStatement::Minimize : RawStatement::Maximize;
        shift();
        if (!expect(Tok::LBrace, "'{'")) return false;
        if (!wlitList(st.body, Tok::RBrace)) return false;
        return expect(Tok::RBrace, "'}'");
      }
      case Tok::LBrace: {  // choice rule
        shift();
        st.type = RawStatement::RuleStmt;
        st.kind = RuleKind::Choice;
        std::vector<RawLiteral> heads;
        if (!litList(heads, Tok::RBrace)) return false;
        for (const auto& h : heads) {
          if (!h.positive) {
            fail("choice rule heads must be atoms, not not-atoms");
            return false;
          }
          st.heads.push_back(h.name);
        }
        if (st.heads.empty()) {
          fail("choice rule needs at least one head atom");
          return false;
        }
        if (!expect(Tok::RBrace, "'}'")) return false;
        if (tok.kind == Tok::If) {
          shift();
          if (!litList(st.body, Tok::Dot)) return false;
        }
        return true;
      }
      case Tok::Name: {
        st.type = RawStatement::RuleStmt;
        st.heads.push_back(tok.text);
        shift();
        if (tok.kind != Tok::If) {
          st.kind = RuleKind::Basic;
          return true;  // fact
        }
        shift();
        if (tok.kind == Tok::Int) {  // cardinality rule
          st.kind = RuleKind::Cardinality;
          if (!intValue(st.bound, ParseError::BadBound)) return false;
          if (!expect(Tok::LBrace, "'{'")) return false;
          if (!litList(st.body, Tok::RBrace)) return false;
          return expect(Tok::RBrace, "'}'");
        }
        if (tok.kind == Tok::LBrace) {  // weight rule
          st.kind = RuleKind::Weight;
          shift();
          if (!wlitList(st.body, Tok::RBrace)) return false;
          if (!expect(Tok::RBrace, "'}'")) return false;
          if (tok.kind == Tok::Ge) st.lessEqual = false;
          else if (tok.kind == Tok::Le) st.lessEqual = true;
          else {
            fail("expected '>=' or '<='");
            return false;
          }
          shift();
          return intValue(st.bound, ParseError::BadBound);
        }
        st.kind = RuleKind::Basic;
        return litList(st.body, Tok::Dot);
      }
      default:
        fail("expected a statement");
        return false;
    }
  }
};

std::string quoteName(const std::string& n) { return n; }

}  // namespace

ParseResult parse(const std::string& text) {
  Parser p(text);
  std::vector<RawStatement> stmts;
  while (p.ok && p.tok.kind != Tok::End) {
    RawStatement st;
    if (!p.statement(st)) break;
    if (!p.expect(Tok::Dot, "'.'")) break;
    stmts.push_back(std::move(st));
  }
  if (!p.ok) return p.error;
  return build_program(stmts);
}

namespace {

void renderLits(std::ostream& os, const Program& p, const Rule& r, bool weights) {
  struct Entry {
    std::string name;
    bool positive;
    int64_t weight;
  };
  std::vector<Entry> es;
  for (size_t i = 0; i < r.posBody.size(); ++i)
    es.push_back({p.name(r.posBody[i]), true, weights ? r.posWeights[i] : 0});
  for (size_t i = 0; i < r.negBody.size(); ++i)
    es.push_back({p.name(r.negBody[i]), false, weights ? r.negWeights[i] : 0});
  std::sort(es.begin(), es.end(), [](const Entry& a, const Entry& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.positive > b.positive;
  });
  for (size_t i = 0; i < es.size(); ++i) {
    if (i) os << ", ";
    if (!es[i].positive) os << "not ";
    os << quoteName(es[i].name);
    if (weights) os << " = " << es[i].weight;
  }
}

}  // namespace

std::string render(const Program& p) {
  std::ostringstream os;
  for (const auto& r : p.rules) {
    switch (r.kind) {
      case RuleKind::Basic:
        os << quoteName(p.name(r.heads[0]));
        if (!r.posBody.empty() || !r.negBody.empty()) {
          os << " :- ";
          renderLits(os, p, r, false);
        }
        break;
      case RuleKind::Choice: {
        std::vector<std::string> hs;
        for (Atom h : r.heads) hs.push_back(p.name(h));
        std::sort(hs.begin(), hs.end());
        os << "{";
        for (size_t i = 0; i < hs.size(); ++i) os << (i ? ", " : "") << quoteName(hs[i]);
        os << "}";
        if (!r.posBody.empty() || !r.negBody.empty()) {
          os << " :- ";
          renderLits(os, p, r, false);
        }
        break;
      }
      case RuleKind::Cardinality:
        os << quoteName(p.name(r.heads[0])) << " :- " << r.bound << " {";
        renderLits(os, p, r, false);
        os << "}";
        break;
      case RuleKind::Weight:
        os << quoteName(p.name(r.heads[0])) << " :- {";
        renderLits(os, p, r, true);
        os << "} >= " << r.bound;
        break;
    }
    os << ".\n";
  }
  if (!p.compute.required.empty()) {
    struct E { std::string name; bool positive; };
    std::vector<E> es;
    for (const auto& l : p.compute.required) es.push_back({p.name(l.atom), l.positive});
    std::sort(es.begin(), es.end(), [](const E& a, const E& b) {
      if (a.name != b.name) return a.name < b.name;
      return a.positive > b.positive;
    });
    os << "compute {";
    for (size_t i = 0; i < es.size(); ++i) {
      if (i) os << ", ";
      if (!es[i].positive) os << "not ";
      os << quoteName(es[i].name);
    }
    os << "}.\n";
  }
  for (const auto& s : p.optimize) {
    struct E { std::string name; bool positive; int64_t w; };
    std::vector<E> es;
    for (const auto& e : s.entries) es.push_back({p.name(e.lit.atom), e.lit.positive, e.weight});
    std::sort(es.begin(), es.end(), [](const E& a, const E& b) {
      if (a.name != b.name) return a.name < b.name;
      return a.positive > b.positive;
    });
    os << "minimize {";
    for (size_t i = 0; i < es.size(); ++i) {
      if (i) os << ", ";
      if (!es[i].positive) os << "not ";
      os << quoteName(es[i].name) << " = " << es[i].w;
    }
    os << "}.\n";
  }
  return os.str();
}

}  // namespace aspen
