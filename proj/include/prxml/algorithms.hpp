#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prxml/model.hpp"

namespace prxml {

// -- Subtree isomorphism classes ----------------------------------------------

struct IsoClasses {
  struct ClassDef {
    std::string label;
    std::vector<int> child_classes;  // ordered mode keeps order, unordered sorts
  };
  std::vector<int> class_of;  // per node id
  std::vector<ClassDef> classes;
  int accepting = -1;  // class of the root
};

// Partitions the subtrees of w into isomorphism classes (bottom-up hashing).
IsoClasses iso_classes(const XDocument& w);

// -- Exact probability on ordered local documents -------------------------------

// D(w) for an ordered document using only {mux, ind, det}, by dynamic
// programming over (D-node, W-node child span) pairs. Polynomial in
// |d| * |w|^2. Throws UnsupportedClassError / PreconditionError.
Rational prob_ordered_local(const PDocument& d, const XDocument& w);

// -- Possibility on unordered single-type documents ------------------------------

// Decides D(w) > 0 for unordered documents using only ind or only mux
// (with relaxed=true: both, provided no ind node is a child of a mux node).
// Strips probabilistic leaves internally. Polynomial time.
bool poss_unordered_single(const PDocument& d, const XDocument& w, bool relaxed = false);

// -- Bipartite matching -----------------------------------------------------------

struct BipartiteGraph {
  int left_size = 0;
  int right_size = 0;
  std::vector<std::pair<int, int>> edges;  // (left index, right index)
};

struct MatchingResult {
  int max_matching = 0;
  bool perfect = false;  // equal part sizes and all vertices matched
};

// Hopcroft-Karp maximum matching.
MatchingResult bipartite_perfect_matching(const BipartiteGraph& g);

}  // namespace prxml
