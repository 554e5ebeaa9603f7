#include "prxml/rewrite.hpp"

#include <map>

#include "prxml/errors.hpp"

namespace prxml {

int DecisionTree::height() const {
  auto depth = [&](auto&& self, int id) -> int {
    const Node& n = nodes[id];
    return n.leaf ? 0 : 1 + std::max(self(self, n.left), self(self, n.right));
  };
  return root < 0 ? 0 : depth(depth, root);
}

std::vector<EventLiteral> DecisionTree::path_to(const std::string& outcome) const {
  std::vector<EventLiteral> path;
  auto walk = [&](auto&& self, int id) -> bool {
    const Node& n = nodes[id];
    if (n.leaf) return n.outcome == outcome;
    path.push_back(EventLiteral{n.event, true});
    if (self(self, n.left)) return true;
    path.back().positive = false;
    if (self(self, n.right)) return true;
    path.pop_back();
    return false;
  };
  if (root < 0 || !walk(walk, root)) throw PreconditionError("outcome not in decision tree: " + outcome);
  return path;
}

DecisionTree event_decision_tree(const std::vector<std::pair<std::string, Rational>>& outcomes,
                                 const std::string& prefix) {
  if (outcomes.empty()) throw InvalidDistributionError("no outcomes");
  Rational total;
  for (const auto& [value, prob] : outcomes) {
    if (!prob.in_open_unit_interval() && !prob.is_one())
      throw InvalidDistributionError("outcome probability of " + value + " outside (0,1]");
    total += prob;
  }
  if (!total.is_one()) throw InvalidDistributionError("outcome probabilities do not sum to 1");

  DecisionTree tree;
  int next_event = 0;
  // Builds the subtree for outcomes [lo, hi) whose joint mass is `mass`.
  auto build = [&](auto&& self, std::size_t lo, std::size_t hi, Rational mass) -> int {
    int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (hi - lo == 1) {
      tree.nodes[id].leaf = true;
      tree.nodes[id].outcome = outcomes[lo].first;
      return id;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    Rational left_mass;
    for (std::size_t i = lo; i < mid; ++i) left_mass += outcomes[i].second;
    tree.nodes[id].event = prefix + ".b" + std::to_string(next_event++);
    tree.nodes[id].prob = left_mass / mass;
    tree.nodes[id].left = self(self, lo, mid, left_mass);
    tree.nodes[id].right = self(self, mid, hi, Rational(mass - left_mass));
    return id;
  };
  tree.root = build(build, 0, outcomes.size(), Rational::one());
  return tree;
}

namespace {

void require_class(const PDocument& d, NodeKind kind, const char* what) {
  if (!classify(d).uses_only({kind}))
    throw UnsupportedClassError(std::string(what) + " requires a document whose probabilistic nodes are all " +
                                kind_name(kind));
}

TreeNode flatten_node(const PDocument& d, NodeId id) {
  const PNode& nd = d.node(id);
  TreeNode out;
  out.kind = nd.kind;
  out.label = nd.label;
  for (const PEdge& e : nd.edges) {
    TreeNode child = flatten_node(d, e.child);
    if (nd.kind == NodeKind::Mux && child.kind == NodeKind::Mux) {
      const Rational& p = std::get<Rational>(e.ann);
      for (auto& [ann, grandchild] : child.children)
        out.children.emplace_back(Rational(p * std::get<Rational>(ann)), std::move(grandchild));
    } else {
      out.children.emplace_back(e.ann, std::move(child));
    }
  }
  return out;
}

}  // namespace

PDocument flatten_mux(const PDocument& d) {
  require_class(d, NodeKind::Mux, "mux flattening");
  return freeze(flatten_node(d, d.root()), d.events, d.ordered);
}

PDocument mux_to_mie(const PDocument& d) {
  require_class(d, NodeKind::Mux, "the mux-to-mie rewriting");
  PDocument flat = flatten_mux(d);

  EventTable events = flat.events;
  int mux_index = 0;
  for (PNode& n : flat.nodes) {
    if (n.kind != NodeKind::Mux) continue;
    std::string id = "mux" + std::to_string(++mux_index);
    if (events.find(id))
      throw ValidationError({Violation{ViolationKind::DuplicateEvent, -1,
                                       "fresh event " + id + " collides with a declared event"}});
    Event ev{id, {}};
    Rational sum;
    for (std::size_t i = 0; i < n.edges.size(); ++i) {
      Rational p = std::get<Rational>(n.edges[i].ann);
      std::string value = "v" + std::to_string(i + 1);
      ev.outcomes.emplace_back(value, p);
      n.edges[i].ann = MieAtom{id, value};
      sum += p;
    }
    if (!sum.is_one()) ev.outcomes.emplace_back("vnone", Rational(Rational::one() - sum));
    events.events.push_back(std::move(ev));
    n.kind = NodeKind::Mie;
  }
  flat.events = std::move(events);
  return flat;
}

PDocument mie_to_cie(const PDocument& d) {
  require_class(d, NodeKind::Mie, "the mie-to-cie rewriting");

  EventTable fresh;
  std::map<std::string, DecisionTree> trees;
  for (const Event& ev : d.events.events) {
    DecisionTree tree = event_decision_tree(ev.outcomes, ev.id);
    for (const DecisionTree::Node& n : tree.nodes)
      if (!n.leaf)
        fresh.events.push_back(Event{n.event, {{"t", n.prob}, {"f", Rational(Rational::one() - n.prob)}}});
    trees.emplace(ev.id, std::move(tree));
  }

  PDocument out = d;
  out.events = std::move(fresh);
  for (PNode& n : out.nodes) {
    if (n.kind != NodeKind::Mie) continue;
    n.kind = NodeKind::Cie;
    for (PEdge& e : n.edges) {
      const MieAtom& atom = std::get<MieAtom>(e.ann);
      e.ann = trees.at(atom.event).path_to(atom.value);
    }
  }
  return out;
}

}  // namespace prxml
