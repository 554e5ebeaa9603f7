#include "prxml/oracle.hpp"

#include <algorithm>

#include "prxml/errors.hpp"

namespace prxml {

bool literal_true(const EventLiteral& lit, const Valuation& v) {
  auto it = v.outcomes.find(lit.event);
  if (it == v.outcomes.end())
    throw IncompleteConfigurationError("no outcome for event '" + lit.event + "'");
  return (it->second == "t") == lit.positive;
}

bool formula_true(const BoolFormula& f, const Valuation& v) {
  switch (f.op) {
    case BoolFormula::Op::Lit:
      return literal_true(f.lit, v);
    case BoolFormula::Op::Not:
      return !formula_true(f.args[0], v);
    case BoolFormula::Op::And:
      return std::all_of(f.args.begin(), f.args.end(),
                         [&](const BoolFormula& a) { return formula_true(a, v); });
    case BoolFormula::Op::Or:
      return std::any_of(f.args.begin(), f.args.end(),
                         [&](const BoolFormula& a) { return formula_true(a, v); });
  }
  return false;
}

// -- ConfigurationSpace -------------------------------------------------------

static unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
  if (a != 0 && b > ~0ull / a) return ~0ull;
  return a * b;
}

ConfigurationSpace::ConfigurationSpace(const PDocument& doc) : doc_(doc) {
  for (const auto& e : doc.events.events) {
    Slot s;
    s.what = Slot::What::Event;
    s.event = e.id;
    s.arity = static_cast<int>(e.outcomes.size());
    slots_.push_back(std::move(s));
  }
  for (NodeId id = 0; id < doc.size(); ++id) {
    const PNode& n = doc.node(id);
    if (n.kind == NodeKind::Ind) {
      for (const auto& e : n.edges) {
        Slot s;
        s.what = Slot::What::IndEdge;
        s.node = e.child;
        s.arity = 2;
        slots_.push_back(std::move(s));
      }
    } else if (n.kind == NodeKind::Mux) {
      Rational sum;
      for (const auto& e : n.edges) sum += std::get<Rational>(e.ann);
      Slot s;
      s.what = Slot::What::MuxNode;
      s.node = id;
      s.has_none = sum < Rational::one();
      s.arity = static_cast<int>(n.edges.size()) + (s.has_none ? 1 : 0);
      slots_.push_back(std::move(s));
    }
  }
  for (const auto& s : slots_) count_ = sat_mul(count_, static_cast<unsigned long long>(s.arity));
}

int ConfigurationSpace::digit_of(const Configuration& cfg, const Slot& s) const {
  switch (s.what) {
    case Slot::What::Event: {
      const Event* e = doc_.events.find(s.event);
      const std::string& v = cfg.valuation.outcomes.at(s.event);
      for (int i = 0; i < static_cast<int>(e->outcomes.size()); ++i)
        if (e->outcomes[i].first == v) return i;
      return 0;
    }
    case Slot::What::IndEdge:
      return cfg.ind_keep.at(s.node) ? 1 : 0;
    case Slot::What::MuxNode: {
      const auto& choice = cfg.mux_choice.at(s.node);
      if (!choice) return static_cast<int>(doc_.node(s.node).edges.size());
      return *choice;
    }
  }
  return 0;
}

void ConfigurationSpace::set_digit(Configuration& cfg, const Slot& s, int digit) const {
  switch (s.what) {
    case Slot::What::Event:
      cfg.valuation.outcomes[s.event] = doc_.events.find(s.event)->outcomes[digit].first;
      break;
    case Slot::What::IndEdge:
      cfg.ind_keep[s.node] = digit == 1;
      break;
    case Slot::What::MuxNode:
      if (digit == static_cast<int>(doc_.node(s.node).edges.size()))
        cfg.mux_choice[s.node] = std::nullopt;
      else
        cfg.mux_choice[s.node] = digit;
      break;
  }
}

Rational ConfigurationSpace::factor(const Slot& s, int digit) const {
  switch (s.what) {
    case Slot::What::Event:
      return doc_.events.find(s.event)->outcomes[digit].second;
    case Slot::What::IndEdge: {
      const PNode& parent = doc_.node(doc_.node(s.node).parent);
      for (const auto& e : parent.edges)
        if (e.child == s.node) {
          const Rational& p = std::get<Rational>(e.ann);
          return digit == 1 ? p : Rational::one() - p;
        }
      return Rational::zero();
    }
    case Slot::What::MuxNode: {
      const PNode& n = doc_.node(s.node);
      if (digit < static_cast<int>(n.edges.size()))
        return std::get<Rational>(n.edges[digit].ann);
      Rational residual = Rational::one();
      for (const auto& e : n.edges) residual -= std::get<Rational>(e.ann);
      return residual;
    }
  }
  return Rational::zero();
}

Configuration ConfigurationSpace::first() const {
  Configuration cfg;
  for (const auto& s : slots_) set_digit(cfg, s, 0);
  return cfg;
}

bool ConfigurationSpace::next(Configuration& cfg) const {
  for (const auto& s : slots_) {
    int d = digit_of(cfg, s);
    if (d + 1 < s.arity) {
      set_digit(cfg, s, d + 1);
      return true;
    }
    set_digit(cfg, s, 0);
  }
  return false;
}

Rational ConfigurationSpace::probability(const Configuration& cfg) const {
  Rational p = Rational::one();
  for (const auto& s : slots_) p *= factor(s, digit_of(cfg, s));
  return p;
}

// -- Evaluation ---------------------------------------------------------------

namespace {

struct Evaluator {
  const PDocument& doc;
  const Configuration& cfg;
  std::set<NodeId>* kept;  // optional

  void check_complete() const {
    for (const auto& e : doc.events.events)
      if (!cfg.valuation.outcomes.count(e.id))
        throw IncompleteConfigurationError("configuration misses event '" + e.id + "'");
    for (NodeId id = 0; id < doc.size(); ++id) {
      const PNode& n = doc.node(id);
      if (n.kind == NodeKind::Ind) {
        for (const auto& e : n.edges)
          if (!cfg.ind_keep.count(e.child))
            throw IncompleteConfigurationError("configuration misses an ind edge");
      } else if (n.kind == NodeKind::Mux) {
        auto it = cfg.mux_choice.find(id);
        if (it == cfg.mux_choice.end())
          throw IncompleteConfigurationError("configuration misses a mux node");
        if (it->second && (*it->second < 0 || *it->second >= static_cast<int>(n.edges.size())))
          throw IncompleteConfigurationError("mux branch choice out of range");
      }
    }
  }

  bool edge_alive(const PNode& n, NodeId node_id, int edge_index) const {
    const PEdge& e = n.edges[edge_index];
    switch (n.kind) {
      case NodeKind::Regular:
      case NodeKind::Det:
        return true;
      case NodeKind::Ind:
        return cfg.ind_keep.at(e.child);
      case NodeKind::Mux: {
        const auto& choice = cfg.mux_choice.at(node_id);
        return choice && *choice == edge_index;
      }
      case NodeKind::Cie: {
        const auto& conj = std::get<std::vector<EventLiteral>>(e.ann);
        return std::all_of(conj.begin(), conj.end(),
                           [&](const EventLiteral& l) { return literal_true(l, cfg.valuation); });
      }
      case NodeKind::Fie:
        return formula_true(std::get<BoolFormula>(e.ann), cfg.valuation);
      case NodeKind::Mie: {
        const auto& atom = std::get<MieAtom>(e.ann);
        return cfg.valuation.at(atom.event) == atom.value;
      }
    }
    return false;
  }

  void eval(NodeId id, std::vector<XTreeNode>& out) const {
    const PNode& n = doc.node(id);
    if (n.kind == NodeKind::Regular) {
      XTreeNode t = XTreeNode::leaf(n.label);
      for (int i = 0; i < static_cast<int>(n.edges.size()); ++i)
        if (edge_alive(n, id, i)) eval(n.edges[i].child, t.children);
      if (kept) kept->insert(id);
      out.push_back(std::move(t));
    } else {
      for (int i = 0; i < static_cast<int>(n.edges.size()); ++i)
        if (edge_alive(n, id, i)) eval(n.edges[i].child, out);
    }
  }

  XTreeNode run() {
    check_complete();
    std::vector<XTreeNode> forest;
    eval(doc.root(), forest);
    return std::move(forest.front());
  }
};

}  // namespace

XDocument apply_configuration(const PDocument& doc, const Configuration& cfg) {
  Evaluator ev{doc, cfg, nullptr};
  return freeze(ev.run(), doc.ordered);
}

std::set<NodeId> kept_regular_nodes(const PDocument& doc, const Configuration& cfg) {
  std::set<NodeId> kept;
  Evaluator ev{doc, cfg, &kept};
  ev.run();
  return kept;
}

// -- Canonical form -------------------------------------------------------------

static std::string canon_node(const XDocument& doc, NodeId id, bool ordered) {
  const XNode& n = doc.node(id);
  std::vector<std::string> kids;
  kids.reserve(n.children.size());
  for (NodeId c : n.children) kids.push_back(canon_node(doc, c, ordered));
  if (!ordered) std::sort(kids.begin(), kids.end());
  std::string out = "(" + std::to_string(n.label.size()) + ":" + n.label;
  for (auto& k : kids) out += k;
  out += ")";
  return out;
}

std::string canonical_form(const XDocument& doc, bool ordered) {
  return canon_node(doc, doc.root(), ordered);
}

bool trees_equal(const XDocument& a, const XDocument& b, bool ordered) {
  if (a.size() != b.size()) return false;
  return canonical_form(a, ordered) == canonical_form(b, ordered);
}

// -- Enumeration -----------------------------------------------------------------

Rational WorldDistribution::total() const {
  Rational t;
  for (const auto& [k, e] : worlds) t += e.prob;
  return t;
}

const WorldEntry* WorldDistribution::find(const XDocument& w, bool ordered) const {
  auto it = worlds.find(canonical_form(w, ordered));
  return it == worlds.end() ? nullptr : &it->second;
}

WorldDistribution enumerate_worlds(const PDocument& doc, unsigned long long cap) {
  ConfigurationSpace space(doc);
  if (space.count() > cap) throw TooManyConfigurationsError(space.count(), cap);

  WorldDistribution dist;
  Configuration cfg = space.first();
  do {
    XDocument w = apply_configuration(doc, cfg);
    std::string key = canonical_form(w, doc.ordered);
    auto [it, inserted] = dist.worlds.try_emplace(key, WorldEntry{Rational::zero(), {}});
    if (inserted) it->second.repr = std::move(w);
    it->second.prob += space.probability(cfg);
  } while (space.next(cfg));
  return dist;
}

Rational world_probability_bf(const PDocument& doc, const XDocument& w,
                              unsigned long long cap) {
  ConfigurationSpace space(doc);
  if (space.count() > cap) throw TooManyConfigurationsError(space.count(), cap);

  std::string target = canonical_form(w, doc.ordered);
  Rational total;
  Configuration cfg = space.first();
  do {
    XDocument result = apply_configuration(doc, cfg);
    if (canonical_form(result, doc.ordered) == target) total += space.probability(cfg);
  } while (space.next(cfg));
  return total;
}

bool check_configuration_yields(const PDocument& doc, const Configuration& cfg,
                                const XDocument& w) {
  return trees_equal(apply_configuration(doc, cfg), w, doc.ordered);
}

// -- Valuation helpers -------------------------------------------------------------

std::vector<std::pair<Valuation, Rational>> all_valuations(const EventTable& events) {
  std::vector<std::pair<Valuation, Rational>> out;
  out.emplace_back(Valuation{}, Rational::one());
  for (const auto& e : events.events) {
    std::vector<std::pair<Valuation, Rational>> next;
    next.reserve(out.size() * e.outcomes.size());
    for (const auto& [v, p] : out) {
      for (const auto& [value, q] : e.outcomes) {
        Valuation v2 = v;
        v2.outcomes[e.id] = value;
        next.emplace_back(std::move(v2), p * q);
      }
    }
    out = std::move(next);
  }
  return out;
}

static TreeNode resolve_node(const PDocument& doc, NodeId id, const Valuation& v) {
  const PNode& n = doc.node(id);
  TreeNode t;
  t.label = n.label;
  switch (n.kind) {
    case NodeKind::Regular:
    case NodeKind::Det:
    case NodeKind::Ind:
    case NodeKind::Mux:
      t.kind = n.kind;
      for (const auto& e : n.edges) t.children.emplace_back(e.ann, resolve_node(doc, e.child, v));
      return t;
    case NodeKind::Cie:
    case NodeKind::Fie:
    case NodeKind::Mie: {
      t.kind = NodeKind::Det;
      for (const auto& e : n.edges) {
        bool alive = false;
        if (n.kind == NodeKind::Cie) {
          const auto& conj = std::get<std::vector<EventLiteral>>(e.ann);
          alive = std::all_of(conj.begin(), conj.end(),
                              [&](const EventLiteral& l) { return literal_true(l, v); });
        } else if (n.kind == NodeKind::Fie) {
          alive = formula_true(std::get<BoolFormula>(e.ann), v);
        } else {
          alive = v.at(std::get<MieAtom>(e.ann).event) == std::get<MieAtom>(e.ann).value;
        }
        if (alive) t.children.emplace_back(std::monostate{}, resolve_node(doc, e.child, v));
      }
      return t;
    }
  }
  return t;
}

PDocument resolve_under_valuation(const PDocument& doc, const Valuation& v) {
  return freeze(resolve_node(doc, doc.root(), v), EventTable{}, doc.ordered);
}

}  // namespace prxml
