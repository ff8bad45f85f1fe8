// Command-line front end: solve/enumerate/optimize/check/oracle/wfs/gen
// subcommands, deterministic program shuffling, and statistics output.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aspen/program.hpp"
#include "aspen/search.hpp"

namespace aspen::cli {

// Exit codes.
inline constexpr int kSatisfiable = 10;
inline constexpr int kUnsatisfiable = 20;
inline constexpr int kOptimumFound = 30;
inline constexpr int kSuccess = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kParseError = 2;

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

// Seeded permutation of atom indices and rule order; atom names (and hence
// the model sets) are preserved.
Program shuffle(const Program& p, uint64_t seed);

// Machine-parseable key=value lines.
std::string emit_stats(const SearchStats& stats);

}  // namespace aspen::cli
