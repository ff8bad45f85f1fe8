#include <benchmark/benchmark.h>

#include <string>
#include <variant>
#include <vector>

#include "aspen/encodings.hpp"
#include "aspen/program.hpp"
#include "aspen/propagate.hpp"
#include "aspen/search.hpp"
#include "aspen/textio.hpp"

namespace {

using namespace aspen;

// a0 <- a1 <- ... <- a(n-1), with a fact at the end of the chain.
Program chainProgram(int n) {
  std::vector<RawStatement> stmts;
  for (int i = 0; i + 1 < n; ++i) {
    RawStatement r;
    r.type = RawStatement::RuleStmt;
    r.kind = RuleKind::Basic;
    r.heads.push_back("a" + std::to_string(i));
    r.body.push_back({"a" + std::to_string(i + 1), true, 1});
    stmts.push_back(r);
  }
  RawStatement fact;
  fact.type = RawStatement::RuleStmt;
  fact.kind = RuleKind::Basic;
  fact.heads.push_back("a" + std::to_string(n - 1));
  stmts.push_back(fact);
  return build_program(stmts);
}

void BM_ChainExpand(benchmark::State& state) {
  const Program p = chainProgram((int)state.range(0));
  for (auto _ : state) {
    PropState st(p);
    st.expand();
    benchmark::DoNotOptimize(st.covers());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChainExpand)->Range(1 << 10, 1 << 17)->Complexity(benchmark::oN);

void BM_AssumeBacktrack(benchmark::State& state) {
  const Program p = encode_pigeonhole(5, 5);
  PropState st(p);
  st.expand();
  // First unassigned atom, assumed and retracted repeatedly.
  Atom a = 0;
  while (a < p.numAtoms() && st.isAssigned(a)) ++a;
  for (auto _ : state) {
    st.assume(pos(a));
    st.expand();
    st.backtrack();
  }
}
BENCHMARK(BM_AssumeBacktrack);

void BM_SolvePigeonholeUnsat(benchmark::State& state) {
  const int k = (int)state.range(0);
  const Program p = encode_pigeonhole(k + 1, k);
  for (auto _ : state) {
    SearchOptions opts;
    const SearchOutcome out = solve(p, opts, nullptr);
    benchmark::DoNotOptimize(out.verdict);
  }
}
BENCHMARK(BM_SolvePigeonholeUnsat)->DenseRange(4, 7);

void BM_EnumeratePigeonhole(benchmark::State& state) {
  const int k = (int)state.range(0);
  const Program p = encode_pigeonhole(k, k);
  for (auto _ : state) {
    SearchOptions opts;
    opts.maxModels = 0;
    const SearchOutcome out =
        solve(p, opts, [](const ModelReport&) { return true; });
    benchmark::DoNotOptimize(out.models);
  }
}
BENCHMARK(BM_EnumeratePigeonhole)->DenseRange(4, 6);

void BM_Solve3Sat(benchmark::State& state) {
  const Program p = encode_3sat(random_3sat((int)state.range(0), 1));
  for (auto _ : state) {
    SearchOptions opts;
    const SearchOutcome out = solve(p, opts, nullptr);
    benchmark::DoNotOptimize(out.verdict);
  }
}
BENCHMARK(BM_Solve3Sat)->Arg(20)->Arg(30)->Arg(40);

void BM_OptimizeCode(benchmark::State& state) {
  const Program p = encode_code(5, 3);
  for (auto _ : state) {
    const SearchOutcome out = optimize(p, {});
    benchmark::DoNotOptimize(out.incumbent.has_value());
  }
}
BENCHMARK(BM_OptimizeCode);

void BM_ParseRender(benchmark::State& state) {
  const std::string text = render(encode_pigeonhole(8, 8));
  for (auto _ : state) {
    auto r = parse(text);
    benchmark::DoNotOptimize(std::get<Program>(r).rules.size());
  }
  state.SetBytesProcessed((int64_t)state.iterations() * (int64_t)text.size());
}
BENCHMARK(BM_ParseRender);

}  // namespace

BENCHMARK_MAIN();
