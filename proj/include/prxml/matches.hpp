#pragma once

#include <map>
#include <string>
#include <vector>

#include "prxml/model.hpp"
#include "prxml/oracle.hpp"

namespace prxml {

// An injective map from every node of a candidate world W to a regular node
// of a document D such that the root maps to the root, labels agree, and the
// image of a node's parent is the nearest regular proper ancestor of the
// node's image (only probabilistic nodes in between).
using CandidateMatch = std::map<NodeId, NodeId>;

inline constexpr unsigned long long kDefaultMatchCap = 100000;

// All candidate matches of w into d, ignoring probabilities and sibling
// order, found by backtracking over w in preorder. Deterministic order.
// Throws TooManyMatchesError beyond cap. When every label in w is unique the
// result has at most one element.
std::vector<CandidateMatch> enumerate_matches(const PDocument& d, const XDocument& w,
                                              unsigned long long cap = kDefaultMatchCap);

// Diagnoses f against the candidate-match conditions; empty means valid.
std::vector<std::string> check_match(const PDocument& d, const XDocument& w,
                                     const CandidateMatch& f);

// Keeps only matches where sibling order in w agrees with document order of
// the images in d. Identity unless both documents are ordered.
std::vector<CandidateMatch> filter_matches_order(const PDocument& d, const XDocument& w,
                                                 std::vector<CandidateMatch> ms);

// Probability that d evaluates to exactly w, computed from a complete
// candidate-match set: per image, relabel w with fresh unique labels, mirror
// them onto the image nodes of d, impose a common sibling order, and run the
// ordered algorithm; the per-image events are mutually exclusive, so the
// results sum. A partial match set yields an underestimate. Requires a
// mux/ind/det document.
Rational prob_explicit_local(const PDocument& d, const XDocument& w,
                             const std::vector<CandidateMatch>& ms);

// Outcome constraints a single match imposes on the events of a document
// using mie nodes only: atoms (event, value, equal/differ), or infeasibility
// when the match would have to drop a child of a regular node.
struct MatchConstraint {
  bool infeasible = false;
  std::vector<std::pair<MieAtom, bool>> atoms;  // true = equal, false = differ
};

MatchConstraint match_constraint_mie(const PDocument& d, const CandidateMatch& f);

// Probability that a mie document evaluates to exactly w, as the sum over
// image-distinct matches of the probability that the match's constraint
// holds (per event: total probability of the surviving outcomes).
Rational prob_explicit_mie(const PDocument& d, const XDocument& w,
                           const std::vector<CandidateMatch>& ms);

// Same quantity for arbitrary documents, by enumerating configurations and
// keeping those whose surviving regular nodes form the image of one of the
// supplied matches. Throws TooManyConfigurationsError beyond cap.
Rational prob_explicit_oracle(const PDocument& d, const XDocument& w,
                              const std::vector<CandidateMatch>& ms,
                              unsigned long long cap = kDefaultConfigCap);

}  // namespace prxml
