#include "aspen/cli.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "aspen/encodings.hpp"
#include "aspen/rng.hpp"
#include "aspen/semantics.hpp"
#include "aspen/textio.hpp"

namespace aspen::cli {

namespace {

std::string modelLine(const Program& p, const AtomSet& m) {
  std::vector<std::string> names;
  for (Atom a : m.members()) names.push_back(p.name(a));
  std::sort(names.begin(), names.end());
  std::string out = "Stable Model:";
  for (const std::string& n : names) {
    out += ' ';
    out += n;
  }
  return out;
}

std::string nameList(const Program& p, const AtomSet& m) {
  std::vector<std::string> names;
  for (Atom a : m.members()) names.push_back(p.name(a));
  std::sort(names.begin(), names.end());
  std::string out;
  for (const std::string& n : names) {
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out;
}

bool readInput(const std::string& path, std::istream& in, std::string& text,
               std::ostream& err) {
  if (path == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    return true;
  }
  std::ifstream f(path);
  if (!f) {
    err << "cannot open file: " << path << "\n";
    return false;
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  text = ss.str();
  return true;
}

bool parseCount(const std::string& s, uint64_t& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  out = v;
  return true;
}

}  // namespace

Program shuffle(const Program& p, uint64_t seed) {
  SplitMix64 rng(seed);
  const int n = p.numAtoms();

  // newId[a] is a uniform permutation of the atom indices.
  std::vector<Atom> newId(n);
  std::iota(newId.begin(), newId.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::swap(newId[i], newId[rng.below((uint64_t)i + 1)]);
  }

  Program q;
  q.atomNames.resize(n);
  for (Atom a = 0; a < n; ++a) {
    q.atomNames[newId[a]] = p.atomNames[a];
    q.atomIds[p.atomNames[a]] = newId[a];
  }

  auto mapSortedBody = [&](const std::vector<Atom>& body,
                           const std::vector<int64_t>& weights,
                           std::vector<Atom>& outBody,
                           std::vector<int64_t>& outWeights) {
    std::vector<std::pair<Atom, int64_t>> zipped;
    for (size_t i = 0; i < body.size(); ++i) {
      zipped.push_back({newId[body[i]], weights.empty() ? 0 : weights[i]});
    }
    std::sort(zipped.begin(), zipped.end());
    outBody.clear();
    outWeights.clear();
    for (auto [a, w] : zipped) {
      outBody.push_back(a);
      if (!weights.empty()) outWeights.push_back(w);
    }
  };

  for (const Rule& r : p.rules) {
    Rule m;
    m.kind = r.kind;
    m.bound = r.bound;
    for (Atom h : r.heads) m.heads.push_back(newId[h]);
    if (m.kind == RuleKind::Choice) std::sort(m.heads.begin(), m.heads.end());
    mapSortedBody(r.posBody, r.posWeights, m.posBody, m.posWeights);
    mapSortedBody(r.negBody, r.negWeights, m.negBody, m.negWeights);
    q.rules.push_back(std::move(m));
  }
  for (size_t i = q.rules.size(); i > 1; --i) {
    std::swap(q.rules[i - 1], q.rules[rng.below(i)]);
  }

  for (Literal l : p.compute.required) {
    q.compute.required.push_back({newId[l.atom], l.positive});
  }
  std::sort(q.compute.required.begin(), q.compute.required.end());

  for (const OptimizeStatement& s : p.optimize) {
    OptimizeStatement m;
    m.kind = s.kind;
    for (const WeightedLiteral& wl : s.entries) {
      m.entries.push_back({{newId[wl.lit.atom], wl.lit.positive}, wl.weight});
    }
    std::sort(m.entries.begin(), m.entries.end(),
              [](const WeightedLiteral& a, const WeightedLiteral& b) {
                return a.lit < b.lit;
              });
    q.optimize.push_back(std::move(m));
  }
  return q;
}

std::string emit_stats(const SearchStats& stats) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "choice_points=%" PRIu64 "\nconflicts=%" PRIu64
                "\nexpand_calls=%" PRIu64 "\nlookahead_expand_calls=%" PRIu64
                "\nbackjumps=%" PRIu64 "\nduration_s=%.6f\n",
                stats.choicePoints, stats.conflicts, stats.expandCalls,
                stats.lookaheadExpandCalls, stats.backjumps,
                stats.elapsedSeconds);
  return buf;
}

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"ground answer-set solver"};
  app.require_subcommand(1);

  std::string inputPath = "-";
  std::string modelsStr;
  bool noLookahead = false, noBackjump = false, noRestrict = false;
  bool doShuffle = false, showStats = false;
  uint64_t seed = 0;
  int oracleLimit = 20;
  std::vector<std::string> checkAtoms;
  std::vector<std::string> genParams;

  auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("file", inputPath, "program file ('-' for stdin)");
    cmd->add_flag("--no-lookahead", noLookahead, "disable lookahead");
    cmd->add_flag("--no-backjump", noBackjump, "disable backjumping");
    cmd->add_flag("--no-restrict", noRestrict,
                  "disable choice-point restriction");
    cmd->add_option("--seed", seed, "shuffle seed (implies --shuffle)");
    cmd->add_flag("--shuffle", doShuffle, "shuffle atoms and rules");
    cmd->add_flag("--stats", showStats, "print search statistics");
  };

  CLI::App* solveCmd = app.add_subcommand("solve", "find one stable model");
  addCommon(solveCmd);
  CLI::App* enumCmd = app.add_subcommand("enumerate", "enumerate stable models");
  addCommon(enumCmd);
  enumCmd->add_option("--models", modelsStr, "model limit (number or 'all')");
  CLI::App* optCmd = app.add_subcommand("optimize", "find an optimal model");
  addCommon(optCmd);
  CLI::App* checkCmd =
      app.add_subcommand("check", "verify an atom set is a stable model");
  checkCmd->add_option("file", inputPath, "program file ('-' for stdin)");
  checkCmd->add_option("atoms", checkAtoms, "atoms of the candidate model");
  CLI::App* oracleCmd =
      app.add_subcommand("oracle", "brute-force model enumeration");
  oracleCmd->add_option("file", inputPath, "program file ('-' for stdin)");
  oracleCmd->add_option("--oracle-limit", oracleLimit,
                        "atom-count cap for brute force");
  CLI::App* wfsCmd = app.add_subcommand("wfs", "well-founded model");
  wfsCmd->add_option("file", inputPath, "program file ('-' for stdin)");
  CLI::App* genCmd = app.add_subcommand("gen", "emit a benchmark program");
  genCmd->add_option("params", genParams,
                     "family and parameters: 3sat A SEED | dimacs FILE | "
                     "pigeonhole N K | hamiltonian FILE | code N D | "
                     "binpacking BINS CAP SIZE...");

  std::vector<std::string> full;
  full.push_back("asp");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(full.size());
  for (std::string& s : full) argv.push_back(s.data());
  try {
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  const bool seedSet = solveCmd->count("--seed") || enumCmd->count("--seed") ||
                       optCmd->count("--seed");
  if (seedSet) doShuffle = true;

  if (genCmd->parsed()) {
    auto usage = [&](const std::string& msg) {
      err << msg << "\n";
      return kUsageError;
    };
    if (genParams.empty()) return usage("gen: missing family");
    const std::string family = genParams[0];
    auto intAt = [&](size_t i, int64_t& v) {
      if (i >= genParams.size()) return false;
      uint64_t u;
      if (!parseCount(genParams[i], u)) return false;
      v = (int64_t)u;
      return true;
    };
    try {
      if (family == "pigeonhole") {
        int64_t n, k;
        if (!intAt(1, n) || !intAt(2, k) || genParams.size() != 3 || n < 1 || k < 1) {
          return usage("gen pigeonhole N K");
        }
        out << render(encode_pigeonhole((int)n, (int)k));
      } else if (family == "code") {
        int64_t n, d;
        if (!intAt(1, n) || !intAt(2, d) || genParams.size() != 3) {
          return usage("gen code N D");
        }
        out << render(encode_code((int)n, (int)d));
      } else if (family == "3sat") {
        int64_t a, s;
        if (!intAt(1, a) || !intAt(2, s) || genParams.size() != 3 || a < 0) {
          return usage("gen 3sat ATOMS SEED");
        }
        out << render(encode_3sat(random_3sat((int)a, (uint64_t)s)));
      } else if (family == "dimacs") {
        if (genParams.size() != 2) return usage("gen dimacs FILE");
        std::string text;
        if (!readInput(genParams[1], in, text, err)) return kUsageError;
        auto r = read_dimacs(text);
        if (auto* e = std::get_if<ParseError>(&r)) {
          err << "parse error at " << e->line << ":" << e->column << ": "
              << e->message << "\n";
          return kParseError;
        }
        out << render(encode_3sat(std::get<CnfFormula>(r)));
      } else if (family == "hamiltonian") {
        if (genParams.size() != 2) return usage("gen hamiltonian FILE");
        std::string text;
        if (!readInput(genParams[1], in, text, err)) return kUsageError;
        auto r = read_graph(text);
        if (auto* e = std::get_if<ParseError>(&r)) {
          err << "parse error at " << e->line << ":" << e->column << ": "
              << e->message << "\n";
          return kParseError;
        }
        out << render(encode_hamiltonian(std::get<UndirectedGraph>(r)));
      } else if (family == "binpacking") {
        int64_t bins, cap;
        if (!intAt(1, bins) || !intAt(2, cap) || genParams.size() < 4) {
          return usage("gen binpacking BINS CAP SIZE...");
        }
        std::vector<int64_t> sizes;
        for (size_t i = 3; i < genParams.size(); ++i) {
          int64_t s;
          if (!intAt(i, s) || s <= 0) return usage("gen binpacking: sizes must be positive");
          sizes.push_back(s);
        }
        out << render(encode_binpacking(sizes, (int)bins, cap));
      } else {
        return usage("gen: unknown family " + family);
      }
    } catch (const std::invalid_argument& e) {
      return usage(e.what());
    }
    return kSuccess;
  }

  // Every other subcommand reads a program.
  std::string text;
  if (!readInput(inputPath, in, text, err)) return kUsageError;
  ParseResult parsed = parse(text);
  if (auto* e = std::get_if<ParseError>(&parsed)) {
    err << "parse error at " << e->line << ":" << e->column << ": "
        << e->message << "\n";
    return kParseError;
  }
  Program p = std::move(std::get<Program>(parsed));

  if (checkCmd->parsed()) {
    AtomSet m(p.numAtoms());
    for (const std::string& name : checkAtoms) {
      auto a = p.find(name);
      if (!a) {
        out << "NOT STABLE\n";
        return kUnsatisfiable;
      }
      m.add(*a);
    }
    const ModelReport rep = report(p, m);
    if (is_stable(p, m) && rep.satisfiesCompute) {
      out << "STABLE\n";
      return kSuccess;
    }
    out << "NOT STABLE\n";
    return kUnsatisfiable;
  }

  if (oracleCmd->parsed()) {
    try {
      const auto models = enumerate_bruteforce(p, oracleLimit, true);
      for (const ModelReport& rep : models) out << modelLine(p, rep.model) << "\n";
      out << "Models: " << models.size() << "\n";
      return models.empty() ? kUnsatisfiable : kSatisfiable;
    } catch (const std::length_error& e) {
      err << e.what() << "\n";
      return kUsageError;
    }
  }

  if (wfsCmd->parsed()) {
    const WellFounded wf = well_founded(p);
    out << "Wplus: " << nameList(p, wf.wplus) << "\n";
    out << "Wminus: " << nameList(p, wf.wminus) << "\n";
    return kSuccess;
  }

  if (doShuffle) p = shuffle(p, seed);

  SearchOptions opts;
  opts.lookaheadEnabled = !noLookahead;
  opts.backjumpEnabled = !noBackjump;
  opts.choicePointRestriction = !noRestrict;
  opts.rngSeed = seed;

  if (optCmd->parsed()) {
    if (p.optimize.empty()) {
      err << "optimize requires a minimize or maximize statement\n";
      return kUsageError;
    }
    const SearchOutcome outcome = optimize(p, opts);
    int code;
    if (outcome.incumbent) {
      out << modelLine(p, outcome.incumbent->model) << "\n";
      out << "Weights:";
      for (int64_t w : outcome.incumbent->weights) out << ' ' << w;
      out << "\n";
      code = kOptimumFound;
    } else {
      out << "UNSATISFIABLE\n";
      code = kUnsatisfiable;
    }
    if (showStats) out << emit_stats(outcome.stats);
    return code;
  }

  // solve / enumerate
  const bool enumerating = enumCmd->parsed();
  if (enumerating) {
    opts.maxModels = 0;  // all, unless --models narrows it
    if (!modelsStr.empty() && modelsStr != "all") {
      if (!parseCount(modelsStr, opts.maxModels)) {
        err << "--models expects a number or 'all'\n";
        return kUsageError;
      }
    }
  } else {
    opts.maxModels = 1;
  }
  const SearchOutcome outcome = solve(p, opts, [&](const ModelReport& rep) {
    out << modelLine(p, rep.model) << "\n";
    return true;
  });
  int code;
  if (enumerating) {
    out << "Models: " << outcome.models << "\n";
    code = outcome.models > 0 ? kSatisfiable : kUnsatisfiable;
  } else if (outcome.models > 0) {
    code = kSatisfiable;
  } else {
    out << "UNSATISFIABLE\n";
    code = kUnsatisfiable;
  }
  if (showStats) out << emit_stats(outcome.stats);
  return code;
}

}  // namespace aspen::cli
