#pragma once

#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

#include "prxml/gen.hpp"
#include "prxml/model.hpp"

namespace prxml {

// Shape of the random documents used by the randomized cross-check suites.
struct RandomDocSpec {
  std::vector<NodeKind> kinds;  // probabilistic kinds to draw from
  int max_prob_nodes = 8;
  int max_events = 3;
  bool ordered = false;
  bool forbid_ind_under_mux = false;
  // Regenerate until the configuration space fits; keeps oracle runs cheap.
  unsigned long long max_configs = 1ull << 16;
};

using Rng = std::mt19937_64;

// A valid random document of the requested shape. Deterministic for a given
// engine state.
PDocument random_pdocument(Rng& rng, const RandomDocSpec& spec);

// Trees to probe probability computations with: actual possible worlds of d
// mixed with mutated lookalikes (dropped/duplicated subtrees, relabelled or
// extra nodes, swapped siblings). Never empty, at most `count` entries.
std::vector<XDocument> candidate_worlds(Rng& rng, const PDocument& d, int count);

// Brute-force reference solvers for the generator reductions. All are
// exponential and guard their input size.
unsigned long long sat_model_count(const CnfFormula& f);
bool exact_cover_exists(const ExactCoverInstance& inst);
unsigned long long count_perfect_matchings(const BipartiteGraph& g);

CnfFormula random_cnf(Rng& rng, int variables, int clauses, int width = 3);
ExactCoverInstance random_exact_cover(Rng& rng, int universe, int sets);
BipartiteGraph random_bipartite(Rng& rng, int n);

// Deterministic ordered mux/ind/det family for runtime scaling checks: the
// k-th member has exactly 20*k nodes, 24^k configurations, and yields the
// returned world with probability exactly (1/24)^k.
std::pair<PDocument, XDocument> scaling_family(int k);

// Randomized cross-checks of every algorithm against the enumeration
// oracle; one line per suite. True when all suites pass.
bool run_selftest(unsigned long long seed, std::ostream& out);

}  // namespace prxml
