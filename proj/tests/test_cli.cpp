#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aspen/cli.hpp"
#include "aspen/encodings.hpp"
#include "aspen/rng.hpp"
#include "aspen/textio.hpp"
#include "util.hpp"

using namespace aspen;

namespace {

struct CliResult {
  int code = 0;
  std::string out, err;
};

CliResult runCli(const std::vector<std::string>& args,
                 const std::string& stdinText = "") {
  std::istringstream in(stdinText);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::set<std::string> modelLines(const std::string& text) {
  std::set<std::string> out;
  for (const std::string& l : lines(text)) {
    if (l.rfind("Stable Model:", 0) == 0) out.insert(l);
  }
  return out;
}

const char* kNormalProgram = "a :- b. b :- c, not d. d :- not b. c :- a.";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve prints the single model and exits 10") {
  const CliResult r = runCli({"solve"}, kNormalProgram);
  CHECK(r.code == cli::kSatisfiable);
  CHECK(r.out == "Stable Model: d\n");
}

TEST_CASE("solve on an unsatisfiable program exits 20") {
  const CliResult r = runCli({"solve"}, "p :- not p.");
  CHECK(r.code == cli::kUnsatisfiable);
  CHECK(r.out == "UNSATISFIABLE\n");
}

TEST_CASE("enumerate counts the ten satisfying assignments") {
  CnfFormula f;
  f.numAtoms = 4;
  f.clauses = {{1, 2, -3}, {-1, 2, -4}, {-2, 3, 4}};
  const std::string text = render(encode_3sat(f));
  const CliResult r = runCli({"enumerate", "--models", "all"}, text);
  CHECK(r.code == cli::kSatisfiable);
  CHECK(modelLines(r.out).size() == 10);
  CHECK(lines(r.out).back() == "Models: 10");
}

TEST_CASE("enumerate defaults to all models") {
  const CliResult r = runCli({"enumerate"}, "{a}. {b}.");
  CHECK(modelLines(r.out).size() == 4);
  CHECK(lines(r.out).back() == "Models: 4");
}

TEST_CASE("enumerate honors a numeric model limit") {
  const CliResult r = runCli({"enumerate", "--models", "2"}, "{a}. {b}.");
  CHECK(modelLines(r.out).size() == 2);
  CHECK(lines(r.out).back() == "Models: 2");
}

TEST_CASE("gen pigeonhole piped into solve is unsatisfiable") {
  const CliResult gen = runCli({"gen", "pigeonhole", "4", "3"});
  REQUIRE(gen.code == cli::kSuccess);
  const CliResult r = runCli({"solve"}, gen.out);
  CHECK(r.code == cli::kUnsatisfiable);
}

TEST_CASE("optimize prints the model and its weight vector") {
  const CliResult r = runCli(
      {"optimize"},
      "{a, b, c}. true :- 2 {a, b, c}. compute {true}. minimize {a=1, b=2}.");
  CHECK(r.code == cli::kOptimumFound);
  CHECK(r.out == "Stable Model: a c true\nWeights: 1\n");
}

TEST_CASE("optimize without an objective is a usage error") {
  const CliResult r = runCli({"optimize"}, "{a}.");
  CHECK(r.code == cli::kUsageError);
}

TEST_CASE("check accepts the model and rejects non-models") {
  CHECK(runCli({"check", "-", "d"}, kNormalProgram).code == cli::kSuccess);
  CHECK(runCli({"check", "-", "d"}, kNormalProgram).out == "STABLE\n");
  const CliResult bad = runCli({"check", "-", "a", "b", "c"}, kNormalProgram);
  CHECK(bad.code == cli::kUnsatisfiable);
  CHECK(bad.out == "NOT STABLE\n");
  CHECK(runCli({"check", "-", "zzz"}, kNormalProgram).code == cli::kUnsatisfiable);
}

TEST_CASE("check accepts exactly what enumerate emits") {
  SplitMix64 rng(515151);
  for (int trial = 0; trial < 40; ++trial) {
    const Program p = testutil::randomProgram(rng, 6, 12);
    const std::string text = render(p);
    const CliResult en = runCli({"enumerate"}, text);
    for (const std::string& line : modelLines(en.out)) {
      std::vector<std::string> args = {"check", "-"};
      std::istringstream ss(line.substr(std::string("Stable Model:").size()));
      std::string atom;
      while (ss >> atom) args.push_back(atom);
      CAPTURE(text);
      CAPTURE(line);
      CHECK(runCli(args, text).code == cli::kSuccess);
    }
  }
}

TEST_CASE("oracle agrees with enumerate") {
  SplitMix64 rng(626262);
  for (int trial = 0; trial < 40; ++trial) {
    const Program p = testutil::randomProgram(rng, 6, 12);
    const std::string text = render(p);
    const CliResult en = runCli({"enumerate"}, text);
    const CliResult orc = runCli({"oracle"}, text);
    CAPTURE(text);
    CHECK(modelLines(en.out) == modelLines(orc.out));
    CHECK(en.code == orc.code);
  }
}

TEST_CASE("wfs prints both halves of the well-founded model") {
  const CliResult r = runCli({"wfs"}, kNormalProgram);
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out == "Wplus: d\nWminus: a b c\n");

  const CliResult u = runCli({"wfs"}, "p :- not p.");
  CHECK(u.out == "Wplus: \nWminus: \n");
}

TEST_CASE("parse errors exit 2 with a positioned diagnostic") {
  // Note "a :- ." would be legal: a body list may be empty.
  const CliResult r = runCli({"solve"}, "a :- b");
  CHECK(r.code == cli::kParseError);
  CHECK(r.err.rfind("parse error at 1:", 0) == 0);
}

TEST_CASE("usage errors exit 1") {
  CHECK(runCli({"frobnicate"}).code == cli::kUsageError);
  CHECK(runCli({"gen"}).code == cli::kUsageError);
  CHECK(runCli({"gen", "nosuch", "1"}).code == cli::kUsageError);
  CHECK(runCli({"enumerate", "--models", "many"}, "{a}.").code == cli::kUsageError);
  CHECK(runCli({"solve", "/nonexistent/file"}).code == cli::kUsageError);
}

TEST_CASE("statistics are machine-parseable key=value lines") {
  SearchStats s;
  s.choicePoints = 3;
  s.conflicts = 2;
  s.expandCalls = 10;
  s.lookaheadExpandCalls = 7;
  s.backjumps = 1;
  s.elapsedSeconds = 0.25;
  CHECK(cli::emit_stats(s) ==
        "choice_points=3\nconflicts=2\nexpand_calls=10\n"
        "lookahead_expand_calls=7\nbackjumps=1\nduration_s=0.250000\n");
}

TEST_CASE("a trivial Horn program solves without choices") {
  const CliResult r = runCli({"solve", "--stats"}, "a :- b. b.");
  CHECK(r.code == cli::kSatisfiable);
  CHECK(r.out.find("choice_points=0\n") != std::string::npos);
}

TEST_CASE("disabling lookahead zeroes its counter") {
  const CliResult r = runCli({"solve", "--stats", "--no-lookahead"}, "{a}. {b}.");
  CHECK(r.out.find("lookahead_expand_calls=0\n") != std::string::npos);
}

TEST_CASE("shuffling is deterministic in the seed") {
  SplitMix64 rng(737373);
  for (int trial = 0; trial < 20; ++trial) {
    const std::string text = render(testutil::randomProgram(rng));
    const CliResult a = runCli({"enumerate", "--seed", "11"}, text);
    const CliResult b = runCli({"enumerate", "--seed", "11"}, text);
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
  }
}

TEST_CASE("shuffling preserves the model set and verdicts") {
  SplitMix64 rng(747474);
  for (int trial = 0; trial < 30; ++trial) {
    const Program p = testutil::randomProgram(rng);
    const std::string text = render(p);
    const CliResult plain = runCli({"enumerate"}, text);
    for (uint64_t seed : {1ull, 2ull, 99ull}) {
      const CliResult shuffled =
          runCli({"enumerate", "--seed", std::to_string(seed)}, text);
      CAPTURE(text);
      CHECK(modelLines(plain.out) == modelLines(shuffled.out));
      CHECK(plain.code == shuffled.code);
    }
  }
}

TEST_CASE("shuffle keeps optimum weights") {
  const std::string text =
      "{a, b, c}. true :- 2 {a, b, c}. compute {true}. minimize {a=1, b=2}.";
  const CliResult plain = runCli({"optimize"}, text);
  for (uint64_t seed : {1ull, 5ull, 9ull}) {
    const CliResult shuffled =
        runCli({"optimize", "--seed", std::to_string(seed)}, text);
    CHECK(shuffled.code == cli::kOptimumFound);
    CHECK(shuffled.out == plain.out);
  }
}

TEST_CASE("shuffle as a library function renames atoms consistently") {
  SplitMix64 rng(99);
  const Program p = testutil::randomProgram(rng);
  const Program q = cli::shuffle(p, 5);
  CHECK(q.numAtoms() == p.numAtoms());
  // Same atom names, possibly different ids.
  std::vector<std::string> np = p.atomNames, nq = q.atomNames;
  std::sort(np.begin(), np.end());
  std::sort(nq.begin(), nq.end());
  CHECK(np == nq);
  CHECK(q.rules.size() == p.rules.size());
  // Identical seeds give identical results.
  const Program q2 = cli::shuffle(p, 5);
  CHECK(q2.atomNames == q.atomNames);
  CHECK(q2.rules == q.rules);
}

TEST_CASE("model lines list atoms in name order") {
  const CliResult r = runCli({"solve"}, "zz. mm. aa.");
  CHECK(r.out == "Stable Model: aa mm zz\n");
}

}  // TEST_SUITE
