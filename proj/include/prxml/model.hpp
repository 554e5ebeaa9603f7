#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "prxml/rational.hpp"

namespace prxml {

enum class NodeKind { Regular, Det, Ind, Mux, Cie, Fie, Mie };

const char* kind_name(NodeKind k);
bool is_probabilistic(NodeKind k);

// One literal of a conjunction on a cie edge: the event, possibly negated.
struct EventLiteral {
  std::string event;
  bool positive = true;

  bool operator==(const EventLiteral&) const = default;
};

// Arbitrary boolean formula over event literals, for fie edges.
struct BoolFormula {
  enum class Op { Lit, And, Or, Not };
  Op op = Op::Lit;
  EventLiteral lit;               // Op::Lit only
  std::vector<BoolFormula> args;  // And/Or: any arity; Not: exactly one

  static BoolFormula literal(std::string event, bool positive = true);
  static BoolFormula conj(std::vector<BoolFormula> args);
  static BoolFormula disj(std::vector<BoolFormula> args);
  static BoolFormula negate(BoolFormula arg);

  bool operator==(const BoolFormula&) const = default;
};

// One (event, value) pair labelling a mie edge.
struct MieAtom {
  std::string event;
  std::string value;

  bool operator==(const MieAtom&) const = default;
};

// Edge annotation by parent kind: none for regular/det, a probability for
// ind/mux, a conjunction for cie, a formula for fie, an atom for mie.
using EdgeAnnotation =
    std::variant<std::monostate, Rational, std::vector<EventLiteral>, BoolFormula, MieAtom>;

using NodeId = int;

struct PEdge {
  EdgeAnnotation ann;
  NodeId child = -1;
};

struct PNode {
  NodeKind kind = NodeKind::Regular;
  std::string label;  // regular nodes only
  std::vector<PEdge> edges;
  NodeId parent = -1;
};

// A finite-probability-space event: distinct outcome values with
// probabilities in (0,1] summing to exactly 1. Boolean events are the
// special case with outcomes {t, f}.
struct Event {
  std::string id;
  std::vector<std::pair<std::string, Rational>> outcomes;

  bool is_boolean() const;
  std::optional<Rational> outcome_prob(const std::string& value) const;
};

struct EventTable {
  std::vector<Event> events;

  const Event* find(const std::string& id) const;
  bool operator==(const EventTable&) const;
};

// A probabilistic document. Nodes are stored in preorder; a node's id is its
// index, the root is node 0. Treated as immutable once built.
struct PDocument {
  std::vector<PNode> nodes;
  EventTable events;
  bool ordered = false;

  NodeId root() const { return 0; }
  const PNode& node(NodeId id) const { return nodes[id]; }
  int size() const { return static_cast<int>(nodes.size()); }
};

struct XNode {
  std::string label;
  std::vector<NodeId> children;
  NodeId parent = -1;
};

// A deterministic document (a possible world candidate), preorder ids.
struct XDocument {
  std::vector<XNode> nodes;
  bool ordered = false;

  NodeId root() const { return 0; }
  const XNode& node(NodeId id) const { return nodes[id]; }
  int size() const { return static_cast<int>(nodes.size()); }
};

// -- Validation ------------------------------------------------------------

enum class ViolationKind {
  RootNotRegular,
  EmptyLabel,
  LabelOnNonRegular,
  WrongAnnotation,
  EdgeProbNotOpenInterval,
  MuxSumExceedsOne,
  UnknownEvent,
  EventNotBoolean,
  UnknownOutcome,
  DuplicateEvent,
  DuplicateOutcome,
  OutcomeProbOutOfRange,
  OutcomeProbsNotSumOne,
  MieUnderMie,
  EmptyDocument,
  BadFormula,
};

struct Violation {
  ViolationKind kind;
  NodeId node = -1;  // -1 when the violation is not tied to a node
  std::string detail;
};

// Checks every structural invariant and returns all violations; never throws.
std::vector<Violation> validate(const PDocument& doc);

std::string violation_message(const Violation& v);

// -- Classification ---------------------------------------------------------

struct ClassProfile {
  std::set<NodeKind> used;  // probabilistic kinds present
  bool no_ind_under_mux = true;
  bool no_mux_hierarchy = true;

  bool uses_only(std::initializer_list<NodeKind> kinds) const;
};

// Throws InvalidDocumentError when validate() reports violations.
ClassProfile classify(const PDocument& doc);

// -- Transformations ---------------------------------------------------------

// Repeatedly removes probabilistic nodes with no children (their edges with
// them) until none remain. Distribution-preserving; the regular root stays.
PDocument strip_probabilistic_leaves(const PDocument& doc);

// -- Structural equality -----------------------------------------------------

// Exact structural comparison: kinds, labels, annotations, stored child
// order, event table, ordered flag.
bool structurally_equal(const PDocument& a, const PDocument& b);
bool structurally_equal(const XDocument& a, const XDocument& b);

// -- Construction helpers ----------------------------------------------------

// Nested mutable tree used to assemble documents before freezing them into
// preorder-id form.
struct TreeNode {
  NodeKind kind = NodeKind::Regular;
  std::string label;
  std::vector<std::pair<EdgeAnnotation, TreeNode>> children;

  static TreeNode regular(std::string label);
  TreeNode& add(TreeNode child);                       // unannotated edge
  TreeNode& add(EdgeAnnotation ann, TreeNode child);
};

PDocument freeze(const TreeNode& root, EventTable events, bool ordered);
TreeNode thaw(const PDocument& doc);  // structure only, ids dropped

struct XTreeNode {
  std::string label;
  std::vector<XTreeNode> children;

  static XTreeNode leaf(std::string label);
  XTreeNode& add(XTreeNode child);
};

XDocument freeze(const XTreeNode& root, bool ordered);
XTreeNode thaw(const XDocument& doc);

// Longest root-to-leaf path counted in nodes (a lone root has height 1).
int height(const PDocument& doc);
int height(const XDocument& doc);

}  // namespace prxml
