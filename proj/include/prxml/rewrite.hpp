#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prxml/model.hpp"

namespace prxml {

// Binary decision tree over an outcome list. Internal nodes carry a fresh
// Boolean event (taken with probability prob) whose positive branch is the
// left child; leaves carry an outcome value. The product of branch
// probabilities along a root-to-leaf path equals the outcome's probability.
struct DecisionTree {
  struct Node {
    bool leaf = false;
    std::string outcome;  // leaves
    std::string event;    // internal nodes: fresh Boolean event id
    Rational prob;        // internal nodes: probability of the left branch
    int left = -1;
    int right = -1;
  };
  std::vector<Node> nodes;
  int root = -1;

  int height() const;  // edges on the longest root-to-leaf path
  // Root-to-leaf literals for the given outcome: positive on left branches.
  std::vector<EventLiteral> path_to(const std::string& outcome) const;
};

// Count-balanced tree over the outcomes (probabilities in (0,1] summing to
// 1). Fresh event ids are prefix.b0, prefix.b1, ... in creation order; each
// internal probability is the left half's mass normalized by the subtree's
// mass. Throws InvalidDistributionError on a malformed distribution.
DecisionTree event_decision_tree(const std::vector<std::pair<std::string, Rational>>& outcomes,
                                 const std::string& prefix);

// Removes mux-under-mux chains: a mux absorbs each mux child's branches with
// multiplied probabilities, preserving branch order. Same distribution.
// Requires a document whose probabilistic nodes are all mux.
PDocument flatten_mux(const PDocument& d);

// Flattens, then replaces each mux by a mie node driven by a fresh
// multivalued event (ids mux1, mux2, ... by document order) with one outcome
// per branch (v1, v2, ...) plus vnone carrying any residual probability.
// Same distribution. Throws ValidationError when a fresh id collides with a
// declared event.
PDocument mux_to_mie(const PDocument& d);

// Replaces each mie node by a cie node: every edge atom (e, x) becomes the
// conjunction of decision-tree literals on the path to x, over fresh Boolean
// events (e.b0, ...) that replace e in the event table. Conjunctions per
// event partition the outcome space. Same distribution. Requires a document
// whose probabilistic nodes are all mie.
PDocument mie_to_cie(const PDocument& d);

}  // namespace prxml
