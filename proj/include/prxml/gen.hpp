#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prxml/algorithms.hpp"
#include "prxml/model.hpp"

namespace prxml {

struct CnfFormula {
  int variables = 0;                      // x1..xn by index
  std::vector<std::vector<int>> clauses;  // nonempty lists of signed 1-based indices
};

struct ExactCoverInstance {
  std::vector<std::string> universe;           // elements to cover, in fixed order
  std::vector<std::vector<std::string>> sets;  // nonempty subsets of the universe
};

// DIMACS CNF: optional 'c' comment lines, one 'p cnf VARS CLAUSES' header,
// then whitespace-separated literals with 0 terminating each clause.
CnfFormula parse_dimacs(const std::string& text);

// One set per line, elements whitespace-separated; '#' starts a comment. The
// universe is the union in first-occurrence order.
ExactCoverInstance parse_set_lines(const std::string& text);

// First significant line: the part size n; then one '#'-commentable line
// "i j" (1-based) per edge.
BipartiteGraph parse_edge_list(const std::string& text);

// Each generator returns a document/world pair such that the world is
// possible exactly when the source instance is a yes-instance; the comments
// state the exact probability identity.

// D(W) * 2^variables = number of satisfying assignments. D: "top" over one
// cie node whose edge i keeps a "bot" leaf exactly when clause i fails.
std::pair<PDocument, XDocument> gen_sat_cie(const CnfFormula& f);

// Possible iff satisfiable. D: "top" over one mux per variable choosing a
// truth value; the chosen ind node can emit one leaf per clause the literal
// satisfies. W: "top" over l1..ln.
std::pair<PDocument, XDocument> gen_sat_muxind(const CnfFormula& f);

// Possible iff an exact cover exists. D: "top" over one ind (resp. mux) node
// per set, each keeping a det node with the set's elements at 1/2.
std::pair<PDocument, XDocument> gen_xc_inddet(const ExactCoverInstance& inst);
std::pair<PDocument, XDocument> gen_xc_muxdet(const ExactCoverInstance& inst);

// D(W) * 2^sets = number of exact covers. D: "top" over one mie node with an
// edge per element occurrence, grouped by element so that any cover yields
// the universe in order; works ordered and unordered.
std::pair<PDocument, XDocument> gen_xc_mie(const ExactCoverInstance& inst, bool ordered = false);

// D(W) * 2^edges = number of perfect matchings. D: "top" over one "bot" per
// left vertex, holding one ind (resp. mux) node per incident edge that keeps
// leaf l(j) at 1/2. W: "top" over bot(l1)..bot(ln).
std::pair<PDocument, XDocument> gen_pm_ind(const BipartiteGraph& g);
std::pair<PDocument, XDocument> gen_pm_mux(const BipartiteGraph& g);

}  // namespace prxml
