#include "prxml/model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "prxml/errors.hpp"

namespace prxml {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Regular: return "node";
    case NodeKind::Det: return "det";
    case NodeKind::Ind: return "ind";
    case NodeKind::Mux: return "mux";
    case NodeKind::Cie: return "cie";
    case NodeKind::Fie: return "fie";
    case NodeKind::Mie: return "mie";
  }
  return "?";
}

bool is_probabilistic(NodeKind k) { return k != NodeKind::Regular; }

BoolFormula BoolFormula::literal(std::string event, bool positive) {
  BoolFormula f;
  f.op = Op::Lit;
  f.lit = EventLiteral{std::move(event), positive};
  return f;
}

BoolFormula BoolFormula::conj(std::vector<BoolFormula> args) {
  BoolFormula f;
  f.op = Op::And;
  f.args = std::move(args);
  return f;
}

BoolFormula BoolFormula::disj(std::vector<BoolFormula> args) {
  BoolFormula f;
  f.op = Op::Or;
  f.args = std::move(args);
  return f;
}

BoolFormula BoolFormula::negate(BoolFormula arg) {
  // A negated literal stays a literal, so "(not e)" has one representation.
  if (arg.op == Op::Lit) {
    arg.lit.positive = !arg.lit.positive;
    return arg;
  }
  BoolFormula f;
  f.op = Op::Not;
  f.args.push_back(std::move(arg));
  return f;
}

bool Event::is_boolean() const {
  if (outcomes.size() != 2) return false;
  const auto& a = outcomes[0].first;
  const auto& b = outcomes[1].first;
  return (a == "t" && b == "f") || (a == "f" && b == "t");
}

std::optional<Rational> Event::outcome_prob(const std::string& value) const {
  for (const auto& [v, p] : outcomes)
    if (v == value) return p;
  return std::nullopt;
}

const Event* EventTable::find(const std::string& id) const {
  for (const auto& e : events)
    if (e.id == id) return &e;
  return nullptr;
}

bool EventTable::operator==(const EventTable& o) const {
  if (events.size() != o.events.size()) return false;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].id != o.events[i].id) return false;
    if (events[i].outcomes != o.events[i].outcomes) return false;
  }
  return true;
}

// -- Validation ------------------------------------------------------------

namespace {

struct Validator {
  const PDocument& doc;
  std::vector<Violation> out;

  void flag(ViolationKind k, NodeId n, std::string detail) {
    out.push_back(Violation{k, n, std::move(detail)});
  }

  void check_events() {
    std::set<std::string> seen;
    for (const auto& e : doc.events.events) {
      if (!seen.insert(e.id).second)
        flag(ViolationKind::DuplicateEvent, -1, "event '" + e.id + "' declared twice");
      std::set<std::string> values;
      Rational sum;
      for (const auto& [v, p] : e.outcomes) {
        if (!values.insert(v).second)
          flag(ViolationKind::DuplicateOutcome, -1,
               "event '" + e.id + "' repeats outcome '" + v + "'");
        if (!(p > Rational::zero()) || p > Rational::one())
          flag(ViolationKind::OutcomeProbOutOfRange, -1,
               "event '" + e.id + "' outcome '" + v + "' has probability " + p.str());
        sum += p;
      }
      if (e.outcomes.empty() || sum != Rational::one())
        flag(ViolationKind::OutcomeProbsNotSumOne, -1,
             "event '" + e.id + "' outcome probabilities sum to " + sum.str());
    }
  }

  void check_literal(const EventLiteral& lit, NodeId n) {
    const Event* e = doc.events.find(lit.event);
    if (!e) {
      flag(ViolationKind::UnknownEvent, n, "event '" + lit.event + "' not declared");
    } else if (!e->is_boolean()) {
      flag(ViolationKind::EventNotBoolean, n,
           "event '" + lit.event + "' used as a literal but is not boolean");
    }
  }

  void check_formula(const BoolFormula& f, NodeId n) {
    switch (f.op) {
      case BoolFormula::Op::Lit:
        check_literal(f.lit, n);
        break;
      case BoolFormula::Op::Not:
        if (f.args.size() != 1)
          flag(ViolationKind::BadFormula, n, "'not' takes exactly one argument");
        for (const auto& a : f.args) check_formula(a, n);
        break;
      case BoolFormula::Op::And:
      case BoolFormula::Op::Or:
        for (const auto& a : f.args) check_formula(a, n);
        break;
    }
  }

  void check_node(NodeId id) {
    const PNode& n = doc.node(id);
    if (n.kind == NodeKind::Regular) {
      if (n.label.empty()) flag(ViolationKind::EmptyLabel, id, "regular node with empty label");
    } else if (!n.label.empty()) {
      flag(ViolationKind::LabelOnNonRegular, id,
           std::string(kind_name(n.kind)) + " node carries a label");
    }

    Rational mux_sum;
    for (const auto& edge : n.edges) {
      switch (n.kind) {
        case NodeKind::Regular:
        case NodeKind::Det:
          if (!std::holds_alternative<std::monostate>(edge.ann))
            flag(ViolationKind::WrongAnnotation, id,
                 std::string(kind_name(n.kind)) + " edge must be unannotated");
          break;
        case NodeKind::Ind:
        case NodeKind::Mux: {
          const Rational* p = std::get_if<Rational>(&edge.ann);
          if (!p) {
            flag(ViolationKind::WrongAnnotation, id,
                 std::string(kind_name(n.kind)) + " edge must carry a probability");
          } else {
            if (!p->in_open_unit_interval())
              flag(ViolationKind::EdgeProbNotOpenInterval, id,
                   std::string(kind_name(n.kind)) + " edge probability " + p->str() +
                       " outside (0,1)");
            if (n.kind == NodeKind::Mux) mux_sum += *p;
          }
          break;
        }
        case NodeKind::Cie: {
          const auto* conj = std::get_if<std::vector<EventLiteral>>(&edge.ann);
          if (!conj) {
            flag(ViolationKind::WrongAnnotation, id, "cie edge must carry a conjunction");
          } else {
            for (const auto& lit : *conj) check_literal(lit, id);
          }
          break;
        }
        case NodeKind::Fie: {
          const BoolFormula* f = std::get_if<BoolFormula>(&edge.ann);
          if (!f)
            flag(ViolationKind::WrongAnnotation, id, "fie edge must carry a formula");
          else
            check_formula(*f, id);
          break;
        }
        case NodeKind::Mie: {
          const MieAtom* a = std::get_if<MieAtom>(&edge.ann);
          if (!a) {
            flag(ViolationKind::WrongAnnotation, id, "mie edge must carry an (event value) pair");
          } else {
            const Event* e = doc.events.find(a->event);
            if (!e)
              flag(ViolationKind::UnknownEvent, id, "event '" + a->event + "' not declared");
            else if (!e->outcome_prob(a->value))
              flag(ViolationKind::UnknownOutcome, id,
                   "event '" + a->event + "' has no outcome '" + a->value + "'");
          }
          break;
        }
      }
    }
    if (n.kind == NodeKind::Mux && mux_sum > Rational::one())
      flag(ViolationKind::MuxSumExceedsOne, id,
           "mux branch probabilities sum to " + mux_sum.str());
  }

  // A mie node below another mie node with only probabilistic nodes between
  // them collapses to a direct mie child after evaluation.
  void check_mie_hierarchy(NodeId id, bool mie_above) {
    const PNode& n = doc.node(id);
    if (n.kind == NodeKind::Mie && mie_above)
      flag(ViolationKind::MieUnderMie, id,
           "mie node reachable from a mie node through probabilistic nodes only");
    bool below = n.kind == NodeKind::Regular ? false : (mie_above || n.kind == NodeKind::Mie);
    for (const auto& e : n.edges) check_mie_hierarchy(e.child, below);
  }

  std::vector<Violation> run() {
    if (doc.nodes.empty()) {
      flag(ViolationKind::EmptyDocument, -1, "document has no nodes");
      return out;
    }
    check_events();
    if (doc.node(doc.root()).kind != NodeKind::Regular)
      flag(ViolationKind::RootNotRegular, doc.root(), "root must be a regular node");
    for (NodeId id = 0; id < doc.size(); ++id) check_node(id);
    check_mie_hierarchy(doc.root(), false);
    return out;
  }
};

}  // namespace

std::vector<Violation> validate(const PDocument& doc) { return Validator{doc, {}}.run(); }

std::string violation_message(const Violation& v) {
  std::ostringstream os;
  if (v.node >= 0) os << "node " << v.node << ": ";
  os << v.detail;
  return os.str();
}

// -- Classification ----------------------------------------------------------

bool ClassProfile::uses_only(std::initializer_list<NodeKind> kinds) const {
  for (NodeKind k : used)
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) return false;
  return true;
}

ClassProfile classify(const PDocument& doc) {
  auto violations = validate(doc);
  if (!violations.empty()) throw InvalidDocumentError(std::move(violations));

  ClassProfile profile;
  for (NodeId id = 0; id < doc.size(); ++id) {
    const PNode& n = doc.node(id);
    if (n.kind == NodeKind::Regular) continue;
    profile.used.insert(n.kind);
    if (n.parent >= 0 && doc.node(n.parent).kind == NodeKind::Mux) {
      if (n.kind == NodeKind::Ind) profile.no_ind_under_mux = false;
      if (n.kind == NodeKind::Mux) profile.no_mux_hierarchy = false;
    }
  }
  return profile;
}

// -- Builders ----------------------------------------------------------------

TreeNode TreeNode::regular(std::string label) {
  TreeNode t;
  t.kind = NodeKind::Regular;
  t.label = std::move(label);
  return t;
}

TreeNode& TreeNode::add(TreeNode child) {
  children.emplace_back(std::monostate{}, std::move(child));
  return *this;
}

TreeNode& TreeNode::add(EdgeAnnotation ann, TreeNode child) {
  children.emplace_back(std::move(ann), std::move(child));
  return *this;
}

static void freeze_into(const TreeNode& t, NodeId parent, std::vector<PNode>& out) {
  NodeId id = static_cast<NodeId>(out.size());
  out.push_back(PNode{t.kind, t.label, {}, parent});
  for (const auto& [ann, child] : t.children) {
    NodeId child_id = static_cast<NodeId>(out.size());
    out[id].edges.push_back(PEdge{ann, child_id});
    freeze_into(child, id, out);
  }
}

PDocument freeze(const TreeNode& root, EventTable events, bool ordered) {
  PDocument doc;
  doc.events = std::move(events);
  doc.ordered = ordered;
  freeze_into(root, -1, doc.nodes);
  return doc;
}

static TreeNode thaw_node(const PDocument& doc, NodeId id) {
  const PNode& n = doc.node(id);
  TreeNode t;
  t.kind = n.kind;
  t.label = n.label;
  for (const auto& e : n.edges) t.children.emplace_back(e.ann, thaw_node(doc, e.child));
  return t;
}

TreeNode thaw(const PDocument& doc) { return thaw_node(doc, doc.root()); }

XTreeNode XTreeNode::leaf(std::string label) {
  XTreeNode t;
  t.label = std::move(label);
  return t;
}

XTreeNode& XTreeNode::add(XTreeNode child) {
  children.push_back(std::move(child));
  return *this;
}

static void freeze_into(const XTreeNode& t, NodeId parent, std::vector<XNode>& out) {
  NodeId id = static_cast<NodeId>(out.size());
  out.push_back(XNode{t.label, {}, parent});
  for (const auto& child : t.children) {
    NodeId child_id = static_cast<NodeId>(out.size());
    out[id].children.push_back(child_id);
    freeze_into(child, id, out);
  }
}

XDocument freeze(const XTreeNode& root, bool ordered) {
  XDocument doc;
  doc.ordered = ordered;
  freeze_into(root, -1, doc.nodes);
  return doc;
}

static XTreeNode thaw_node(const XDocument& doc, NodeId id) {
  const XNode& n = doc.node(id);
  XTreeNode t;
  t.label = n.label;
  for (NodeId c : n.children) t.children.push_back(thaw_node(doc, c));
  return t;
}

XTreeNode thaw(const XDocument& doc) { return thaw_node(doc, doc.root()); }

// -- strip_probabilistic_leaves ----------------------------------------------

static std::optional<TreeNode> strip_node(const TreeNode& t) {
  TreeNode result;
  result.kind = t.kind;
  result.label = t.label;
  for (const auto& [ann, child] : t.children) {
    if (auto kept = strip_node(child)) result.children.emplace_back(ann, std::move(*kept));
  }
  if (is_probabilistic(t.kind) && result.children.empty()) return std::nullopt;
  return result;
}

PDocument strip_probabilistic_leaves(const PDocument& doc) {
  auto stripped = strip_node(thaw(doc));
  // The root is regular, so a single bottom-up pass always leaves it.
  return freeze(*stripped, doc.events, doc.ordered);
}

// -- Structural equality -----------------------------------------------------

static bool nodes_equal(const PDocument& a, NodeId ia, const PDocument& b, NodeId ib) {
  const PNode& na = a.node(ia);
  const PNode& nb = b.node(ib);
  if (na.kind != nb.kind || na.label != nb.label) return false;
  if (na.edges.size() != nb.edges.size()) return false;
  for (std::size_t i = 0; i < na.edges.size(); ++i) {
    if (!(na.edges[i].ann == nb.edges[i].ann)) return false;
    if (!nodes_equal(a, na.edges[i].child, b, nb.edges[i].child)) return false;
  }
  return true;
}

bool structurally_equal(const PDocument& a, const PDocument& b) {
  if (a.ordered != b.ordered) return false;
  if (!(a.events == b.events)) return false;
  if (a.nodes.empty() || b.nodes.empty()) return a.nodes.empty() == b.nodes.empty();
  return nodes_equal(a, a.root(), b, b.root());
}

static bool nodes_equal(const XDocument& a, NodeId ia, const XDocument& b, NodeId ib) {
  const XNode& na = a.node(ia);
  const XNode& nb = b.node(ib);
  if (na.label != nb.label || na.children.size() != nb.children.size()) return false;
  for (std::size_t i = 0; i < na.children.size(); ++i)
    if (!nodes_equal(a, na.children[i], b, nb.children[i])) return false;
  return true;
}

bool structurally_equal(const XDocument& a, const XDocument& b) {
  if (a.ordered != b.ordered) return false;
  if (a.nodes.empty() || b.nodes.empty()) return a.nodes.empty() == b.nodes.empty();
  return nodes_equal(a, a.root(), b, b.root());
}

// -- Height ------------------------------------------------------------------

template <typename Doc, typename ChildFn>
static int height_of(const Doc& doc, NodeId id, ChildFn children) {
  int best = 0;
  for (NodeId c : children(doc, id)) best = std::max(best, height_of(doc, c, children));
  return best + 1;
}

int height(const PDocument& doc) {
  auto children = [](const PDocument& d, NodeId id) {
    std::vector<NodeId> out;
    for (const auto& e : d.node(id).edges) out.push_back(e.child);
    return out;
  };
  return doc.nodes.empty() ? 0 : height_of(doc, doc.root(), children);
}

int height(const XDocument& doc) {
  auto children = [](const XDocument& d, NodeId id) { return d.node(id).children; };
  return doc.nodes.empty() ? 0 : height_of(doc, doc.root(), children);
}

}  // namespace prxml
