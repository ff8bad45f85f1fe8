// Benchmark-family generators (3-SAT, pigeon-hole, Hamiltonian cycles,
// error-correcting codes, bin-packing) plus DIMACS CNF and edge-list graph
// readers and the decoders/validators for the structured families.
#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "aspen/program.hpp"
#include "aspen/semantics.hpp"
#include "aspen/textio.hpp"

namespace aspen {

struct CnfFormula {
  int numAtoms = 0;
  std::vector<std::vector<int>> clauses;  // DIMACS literals, no zeros
};

struct UndirectedGraph {
  int vertices = 0;                            // labeled 1..vertices
  std::vector<std::pair<int, int>> edges;      // normalized u < v, deduplicated
};

// Clause (l1 ∨ …) becomes false <- complements; one choice rule frees the
// variable atoms; compute{not false}.
Program encode_3sat(const CnfFormula& f);

// Atoms p(i,j): per-pigeon choice, at-most-one, at-least-one; per-hole
// at-most-one; compute{not false}.
Program encode_pigeonhole(int pigeons, int holes);

// Edge atoms e(u,v): per-vertex degree-two constraints; a reachability chain
// from the lowest vertex rules out multi-cycle models.
Program encode_hamiltonian(const UndirectedGraph& g);

// Word atoms w<i>: maximal codes of length n with pairwise Hamming distance
// >= d, containing word 0, maximized over the word count.
// Throws std::invalid_argument unless 1 <= d <= n <= 12 (or allowLarge).
Program encode_code(int n, int d, bool allowLarge = false);

// Atoms b(i,j): per-item choice/at-most-one/at-least-one and a per-bin weight
// rule false <- {...} >= capacity+1.
Program encode_binpacking(const std::vector<int64_t>& sizes, int bins,
                          int64_t capacity);

std::variant<CnfFormula, ParseError> read_dimacs(const std::string& text);
std::variant<UndirectedGraph, ParseError> read_graph(const std::string& text);

// Seeded random 3-SAT at the hard clause/atom ratio 4.258 + 58.26 a^{-5/3}.
CnfFormula random_3sat(int numAtoms, uint64_t seed);

// Model decoders and the independent validators used by the tests.
std::vector<std::pair<int, int>> decode_hamiltonian(const Program& p,
                                                    const AtomSet& model);
bool is_hamiltonian_cycle(const UndirectedGraph& g,
                          const std::vector<std::pair<int, int>>& edges);

std::vector<int> decode_code(const Program& p, const AtomSet& model);
bool is_code(int n, int d, const std::vector<int>& words);

}  // namespace aspen
