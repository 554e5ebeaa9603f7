#include "prxml/selftest.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <string>

#include "prxml/algorithms.hpp"
#include "prxml/errors.hpp"
#include "prxml/matches.hpp"
#include "prxml/oracle.hpp"
#include "prxml/rewrite.hpp"

namespace prxml {

namespace {

int pick(Rng& rng, int lo, int hi) {  // inclusive
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(Rng& rng, int num, int den) { return pick(rng, 1, den) <= num; }

constexpr int kMaxDepth = 4;
constexpr int kMaxNodes = 32;

class DocBuilder {
 public:
  DocBuilder(Rng& rng, const RandomDocSpec& spec) : rng_(rng), spec_(spec) {}

  PDocument build() {
    events_ = random_events();
    prob_budget_ = spec_.max_prob_nodes;
    nodes_ = 0;
    placed_prob_ = false;
    TreeNode root = make_node(NodeKind::Regular, 1, false);
    root.label = "r";
    return freeze(root, events_, spec_.ordered);
  }

  bool placed_prob() const { return placed_prob_; }

 private:
  Rng& rng_;
  const RandomDocSpec& spec_;
  EventTable events_;
  std::vector<int> bool_events_;  // indices of Boolean events
  int prob_budget_ = 0;
  int nodes_ = 0;
  bool placed_prob_ = false;

  bool wants(NodeKind k) const {
    return std::find(spec_.kinds.begin(), spec_.kinds.end(), k) != spec_.kinds.end();
  }

  EventTable random_events() {
    bool_events_.clear();
    bool need_bool = wants(NodeKind::Cie) || wants(NodeKind::Fie);
    bool need_any = need_bool || wants(NodeKind::Mie);
    if (!need_any) return {};  // local kinds never reference events
    int count = pick(rng_, 1, std::max(1, spec_.max_events));
    EventTable t;
    for (int i = 1; i <= count; ++i) {
      std::string id = "e" + std::to_string(i);
      bool multivalued = wants(NodeKind::Mie) && chance(rng_, 1, 2);
      if (need_bool && i == 1) multivalued = false;
      if (multivalued) {
        int k = pick(rng_, 2, 3);
        static const char* values[] = {"a", "b", "c"};
        int total = 0;
        std::vector<int> weights(k);
        for (int j = 0; j < k; ++j) total += weights[j] = pick(rng_, 1, 3);
        Event ev{id, {}};
        for (int j = 0; j < k; ++j)
          ev.outcomes.emplace_back(values[j], Rational(weights[j], total));
        t.events.push_back(std::move(ev));
      } else {
        int den = pick(rng_, 2, 4);
        Rational p(pick(rng_, 1, den - 1), den);
        t.events.push_back(Event{id, {{"t", p}, {"f", Rational(Rational::one() - p)}}});
        bool_events_.push_back(i - 1);
      }
    }
    return t;
  }

  Rational random_prob() {
    int den = pick(rng_, 2, 4);
    return Rational(pick(rng_, 1, den - 1), den);
  }

  EventLiteral random_literal() {
    int i = bool_events_[pick(rng_, 0, static_cast<int>(bool_events_.size()) - 1)];
    return EventLiteral{events_.events[i].id, chance(rng_, 1, 2)};
  }

  BoolFormula random_formula() {
    switch (pick(rng_, 0, 3)) {
      case 0:
        return BoolFormula::literal(random_literal().event, true);
      case 1:
        return BoolFormula::negate(BoolFormula::literal(random_literal().event, true));
      case 2:
        return BoolFormula::conj({BoolFormula::literal(random_literal().event, chance(rng_, 1, 2)),
                                  BoolFormula::literal(random_literal().event, chance(rng_, 1, 2))});
      default:
        return BoolFormula::disj({BoolFormula::literal(random_literal().event, chance(rng_, 1, 2)),
                                  BoolFormula::literal(random_literal().event, chance(rng_, 1, 2))});
    }
  }

  MieAtom random_atom() {
    const Event& ev = events_.events[pick(rng_, 0, static_cast<int>(events_.events.size()) - 1)];
    return MieAtom{ev.id, ev.outcomes[pick(rng_, 0, static_cast<int>(ev.outcomes.size()) - 1)].first};
  }

  NodeKind child_kind(NodeKind parent, bool mie_above, int depth) {
    if (depth >= kMaxDepth || nodes_ >= kMaxNodes || prob_budget_ <= 0 || chance(rng_, 2, 5))
      return NodeKind::Regular;
    std::vector<NodeKind> pool;
    for (NodeKind k : spec_.kinds) {
      if (k == NodeKind::Ind && spec_.forbid_ind_under_mux && parent == NodeKind::Mux) continue;
      if (k == NodeKind::Mie && (mie_above || parent == NodeKind::Mie)) continue;
      pool.push_back(k);
    }
    if (pool.empty()) return NodeKind::Regular;
    return pool[pick(rng_, 0, static_cast<int>(pool.size()) - 1)];
  }

  TreeNode make_node(NodeKind kind, int depth, bool mie_above) {
    ++nodes_;
    TreeNode n;
    n.kind = kind;
    if (kind == NodeKind::Regular) {
      static const char* labels[] = {"a", "b", "c", "d"};
      n.label = labels[pick(rng_, 0, 3)];
    } else {
      --prob_budget_;
      placed_prob_ = true;
    }

    bool below_mie = kind == NodeKind::Regular ? false : (mie_above || kind == NodeKind::Mie);
    auto child = [&](NodeKind parent) {
      return make_node(child_kind(parent, below_mie, depth + 1), depth + 1, below_mie);
    };

    switch (kind) {
      case NodeKind::Regular:
      case NodeKind::Det: {
        int kids = depth >= kMaxDepth || nodes_ >= kMaxNodes ? 0 : pick(rng_, 0, 3 - (depth > 1));
        if (kind == NodeKind::Det && kids == 0) kids = 1;
        for (int i = 0; i < kids; ++i) n.add(child(kind));
        break;
      }
      case NodeKind::Ind: {
        int kids = pick(rng_, 1, 3);
        for (int i = 0; i < kids; ++i) n.add(random_prob(), child(kind));
        break;
      }
      case NodeKind::Mux: {
        int kids = pick(rng_, 1, 3);
        int slack = pick(rng_, kids == 1 ? 1 : 0, 2);
        std::vector<int> weights(kids);
        int total = slack;
        for (int& w : weights) total += w = pick(rng_, 1, 3);
        for (int i = 0; i < kids; ++i) n.add(Rational(weights[i], total), child(kind));
        break;
      }
      case NodeKind::Cie: {
        int kids = pick(rng_, 1, 2);
        for (int i = 0; i < kids; ++i) {
          std::vector<EventLiteral> conj;
          int lits = pick(rng_, 1, 2);
          for (int j = 0; j < lits; ++j) conj.push_back(random_literal());
          n.add(std::move(conj), child(kind));
        }
        break;
      }
      case NodeKind::Fie: {
        int kids = pick(rng_, 1, 2);
        for (int i = 0; i < kids; ++i) n.add(random_formula(), child(kind));
        break;
      }
      case NodeKind::Mie: {
        int kids = pick(rng_, 1, 3);
        for (int i = 0; i < kids; ++i) n.add(random_atom(), child(kind));
        break;
      }
    }
    return n;
  }
};

// -- world mutation ---------------------------------------------------------

int tree_size(const XTreeNode& n) {
  int total = 1;
  for (const XTreeNode& c : n.children) total += tree_size(c);
  return total;
}

// Preorder lookup; index 0 is the root.
XTreeNode* node_at(XTreeNode& n, int& index) {
  if (index == 0) return &n;
  --index;
  for (XTreeNode& c : n.children) {
    XTreeNode* hit = node_at(c, index);
    if (hit) return hit;
  }
  return nullptr;
}

XTreeNode* parent_of(XTreeNode& root, const XTreeNode* target) {
  for (XTreeNode& c : root.children) {
    if (&c == target) return &root;
    if (XTreeNode* hit = parent_of(c, target)) return hit;
  }
  return nullptr;
}

XDocument mutate_world(Rng& rng, const XDocument& base) {
  XTreeNode root = thaw(base);
  int size = tree_size(root);
  switch (pick(rng, 0, 4)) {
    case 0: {  // drop a non-root subtree
      if (size < 2) {
        root.add(XTreeNode::leaf("zz"));
        break;
      }
      int idx = pick(rng, 1, size - 1);
      int walk = idx;
      XTreeNode* victim = node_at(root, walk);
      XTreeNode* parent = parent_of(root, victim);
      parent->children.erase(parent->children.begin() + (victim - parent->children.data()));
      break;
    }
    case 1: {  // duplicate a non-root subtree
      if (size < 2) {
        root.add(XTreeNode::leaf(root.label));
        break;
      }
      int idx = pick(rng, 1, size - 1);
      int walk = idx;
      XTreeNode* victim = node_at(root, walk);
      XTreeNode* parent = parent_of(root, victim);
      XTreeNode copy = *victim;
      parent->children.insert(parent->children.begin() + (victim - parent->children.data()),
                              std::move(copy));
      break;
    }
    case 2: {  // relabel any node
      int walk = pick(rng, 0, size - 1);
      node_at(root, walk)->label = "zz";
      break;
    }
    case 3: {  // graft an extra leaf
      int walk = pick(rng, 0, size - 1);
      node_at(root, walk)->add(XTreeNode::leaf("zz"));
      break;
    }
    default: {  // rotate the children of some node
      std::vector<XTreeNode*> wide;
      for (int i = 0; i < size; ++i) {
        int walk = i;
        XTreeNode* n = node_at(root, walk);
        if (n->children.size() >= 2) wide.push_back(n);
      }
      if (wide.empty()) {
        root.add(XTreeNode::leaf("zz"));
        break;
      }
      XTreeNode* n = wide[pick(rng, 0, static_cast<int>(wide.size()) - 1)];
      std::rotate(n->children.begin(), n->children.begin() + 1, n->children.end());
      break;
    }
  }
  return freeze(root, base.ordered);
}

}  // namespace

PDocument random_pdocument(Rng& rng, const RandomDocSpec& spec) {
  int budget = std::max(1, spec.max_prob_nodes);
  for (int attempt = 1;; ++attempt) {
    RandomDocSpec trimmed = spec;
    trimmed.max_prob_nodes = budget;
    DocBuilder builder(rng, trimmed);
    PDocument doc = builder.build();
    if (builder.placed_prob() && ConfigurationSpace(doc).count() <= spec.max_configs)
      return doc;
    if (attempt % 8 == 0 && budget > 1) --budget;
  }
}

std::vector<XDocument> candidate_worlds(Rng& rng, const PDocument& d, int count) {
  WorldDistribution dist = enumerate_worlds(d);
  std::vector<const XDocument*> support;
  for (const auto& [key, entry] : dist.worlds) support.push_back(&entry.repr);

  std::vector<XDocument> out;
  for (int i = 0; i < count; ++i) {
    const XDocument& base = *support[pick(rng, 0, static_cast<int>(support.size()) - 1)];
    if (i % 2 == 0)
      out.push_back(base);
    else
      out.push_back(mutate_world(rng, base));
  }
  return out;
}

unsigned long long sat_model_count(const CnfFormula& f) {
  if (f.variables > 20) throw PreconditionError("truth table capped at 20 variables");
  unsigned long long models = 0;
  for (unsigned long long mask = 0; mask < (1ull << f.variables); ++mask) {
    bool all = true;
    for (const auto& clause : f.clauses) {
      bool sat = false;
      for (int lit : clause)
        if (((mask >> (std::abs(lit) - 1)) & 1) == static_cast<unsigned>(lit > 0)) {
          sat = true;
          break;
        }
      if (!sat) {
        all = false;
        break;
      }
    }
    models += all;
  }
  return models;
}

bool exact_cover_exists(const ExactCoverInstance& inst) {
  if (inst.sets.size() > 20) throw PreconditionError("subset search capped at 20 sets");
  std::vector<std::vector<int>> member(inst.sets.size());
  for (std::size_t i = 0; i < inst.sets.size(); ++i)
    for (const auto& v : inst.sets[i]) {
      auto it = std::find(inst.universe.begin(), inst.universe.end(), v);
      member[i].push_back(static_cast<int>(it - inst.universe.begin()));
    }
  std::vector<int> hits(inst.universe.size());
  for (unsigned long long mask = 0; mask < (1ull << inst.sets.size()); ++mask) {
    std::fill(hits.begin(), hits.end(), 0);
    for (std::size_t i = 0; i < inst.sets.size(); ++i)
      if ((mask >> i) & 1)
        for (int v : member[i]) ++hits[v];
    if (std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; })) return true;
  }
  return false;
}

unsigned long long count_perfect_matchings(const BipartiteGraph& g) {
  if (g.left_size != g.right_size) return 0;
  int n = g.left_size;
  if (n > 20) throw PreconditionError("matching count capped at 20 vertices per part");
  std::vector<unsigned> adj(n, 0);
  for (auto [u, v] : g.edges) adj[u] |= 1u << v;
  std::vector<unsigned long long> ways(1ull << n, 0);
  ways[0] = 1;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (!ways[mask]) continue;
    int u = __builtin_popcount(mask);
    if (u == n) continue;
    for (int v = 0; v < n; ++v)
      if ((adj[u] >> v & 1) && !(mask >> v & 1)) ways[mask | (1u << v)] += ways[mask];
  }
  return ways[(1u << n) - 1];
}

CnfFormula random_cnf(Rng& rng, int variables, int clauses, int width) {
  CnfFormula f;
  f.variables = variables;
  width = std::min(width, variables);
  for (int i = 0; i < clauses; ++i) {
    std::vector<int> vars(variables);
    for (int v = 0; v < variables; ++v) vars[v] = v + 1;
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<int> clause(vars.begin(), vars.begin() + width);
    for (int& lit : clause)
      if (chance(rng, 1, 2)) lit = -lit;
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

ExactCoverInstance random_exact_cover(Rng& rng, int universe, int sets) {
  ExactCoverInstance inst;
  for (int i = 1; i <= universe; ++i) inst.universe.push_back("v" + std::to_string(i));
  for (int i = 0; i < sets; ++i) {
    std::vector<std::string> s;
    for (const auto& v : inst.universe)
      if (chance(rng, 1, 3)) s.push_back(v);
    if (s.empty()) s.push_back(inst.universe[pick(rng, 0, universe - 1)]);
    inst.sets.push_back(std::move(s));
  }
  return inst;
}

BipartiteGraph random_bipartite(Rng& rng, int n) {
  BipartiteGraph g;
  g.left_size = g.right_size = n;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (chance(rng, 1, 2)) g.edges.emplace_back(u, v);
  return g;
}

std::pair<PDocument, XDocument> scaling_family(int k) {
  if (k < 1) throw PreconditionError("family index must be positive");
  const Rational half(1, 2), third(1, 3);

  // One 20-node unit contributes 24 configurations, exactly one of which
  // keeps the pattern below, at probability 1/24.
  auto unit = [&](auto&& self, int remaining) -> TreeNode {
    TreeNode u = TreeNode::regular("u");
    TreeNode a;
    a.kind = NodeKind::Ind;
    a.add(half, TreeNode::regular("a1")).add(half, TreeNode::regular("a2"));
    TreeNode b;
    b.kind = NodeKind::Ind;
    b.add(half, TreeNode::regular("b"));
    TreeNode m;
    m.kind = NodeKind::Mux;
    m.add(third, TreeNode::regular("m1"))
        .add(third, TreeNode::regular("m2"))
        .add(third, TreeNode::regular("m3"));
    TreeNode det;
    det.kind = NodeKind::Det;
    det.add(TreeNode::regular("c1")).add(TreeNode::regular("c2"));
    u.add(std::move(a)).add(std::move(b)).add(std::move(m)).add(std::move(det));
    for (int i = 1; i <= 7; ++i) u.add(TreeNode::regular("r" + std::to_string(i)));
    if (remaining > 1) u.add(self(self, remaining - 1));
    return u;
  };
  auto wunit = [](auto&& self, int remaining) -> XTreeNode {
    XTreeNode u = XTreeNode::leaf("u");
    u.add(XTreeNode::leaf("a1")).add(XTreeNode::leaf("b")).add(XTreeNode::leaf("m2"));
    u.add(XTreeNode::leaf("c1")).add(XTreeNode::leaf("c2"));
    for (int i = 1; i <= 7; ++i) u.add(XTreeNode::leaf("r" + std::to_string(i)));
    if (remaining > 1) u.add(self(self, remaining - 1));
    return u;
  };
  return {freeze(unit(unit, k), {}, true), freeze(wunit(wunit, k), true)};
}

// -- selftest ----------------------------------------------------------------

namespace {

std::string describe_diff(const WorldDistribution& a, const WorldDistribution& b) {
  if (a.worlds.size() != b.worlds.size())
    return "world counts differ: " + std::to_string(a.worlds.size()) + " vs " +
           std::to_string(b.worlds.size());
  for (const auto& [key, entry] : a.worlds) {
    auto it = b.worlds.find(key);
    if (it == b.worlds.end()) return "world missing from the rewritten document";
    if (!(entry.prob == it->second.prob))
      return "probability differs: " + entry.prob.str() + " vs " + it->second.prob.str();
  }
  return {};
}

}  // namespace

bool run_selftest(unsigned long long seed, std::ostream& out) {
  bool all_ok = true;
  auto suite = [&](const char* name, auto&& body) {
    std::string detail;
    try {
      detail = body();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    if (detail.empty()) {
      out << "ok   " << name << "\n";
    } else {
      out << "FAIL " << name << ": " << detail << "\n";
      all_ok = false;
    }
  };

  suite("world probabilities sum to 1", [&]() -> std::string {
    Rng rng(seed);
    RandomDocSpec spec;
    spec.kinds = {NodeKind::Det, NodeKind::Ind, NodeKind::Mux,
                  NodeKind::Cie, NodeKind::Fie, NodeKind::Mie};
    for (int i = 0; i < 20; ++i) {
      PDocument d = random_pdocument(rng, spec);
      if (!enumerate_worlds(d).total().is_one()) return "total probability is not 1";
    }
    return {};
  });

  suite("ordered counting matches the oracle", [&]() -> std::string {
    Rng rng(seed + 1);
    RandomDocSpec spec;
    spec.kinds = {NodeKind::Mux, NodeKind::Ind, NodeKind::Det};
    spec.ordered = true;
    for (int i = 0; i < 20; ++i) {
      PDocument d = random_pdocument(rng, spec);
      for (const XDocument& w : candidate_worlds(rng, d, 4))
        if (!(prob_ordered_local(d, w) == world_probability_bf(d, w)))
          return "probability mismatch on a random document";
    }
    return {};
  });

  suite("unordered decision matches the oracle", [&]() -> std::string {
    Rng rng(seed + 2);
    struct Family {
      std::vector<NodeKind> kinds;
      bool forbid;
      bool relaxed;
    };
    for (const Family& fam :
         {Family{{NodeKind::Ind}, false, false},
          Family{{NodeKind::Mux}, false, false},
          Family{{NodeKind::Mux, NodeKind::Ind}, true, true}}) {
      RandomDocSpec spec;
      spec.kinds = fam.kinds;
      spec.forbid_ind_under_mux = fam.forbid;
      for (int i = 0; i < 7; ++i) {
        PDocument d = random_pdocument(rng, spec);
        for (const XDocument& w : candidate_worlds(rng, d, 4))
          if (poss_unordered_single(d, w, fam.relaxed) != !world_probability_bf(d, w).is_zero())
            return "decision mismatch on a random document";
      }
    }
    return {};
  });

  suite("explicit matches match the oracle", [&]() -> std::string {
    Rng rng(seed + 3);
    for (bool ordered : {false, true}) {
      RandomDocSpec spec;
      spec.kinds = {NodeKind::Mux, NodeKind::Ind, NodeKind::Det};
      spec.ordered = ordered;
      for (int i = 0; i < 10; ++i) {
        PDocument d = random_pdocument(rng, spec);
        for (const XDocument& w : candidate_worlds(rng, d, 3))
          if (!(prob_explicit_local(d, w, enumerate_matches(d, w)) == world_probability_bf(d, w)))
            return "local variant mismatch";
      }
    }
    RandomDocSpec spec;
    spec.kinds = {NodeKind::Mie};
    for (int i = 0; i < 10; ++i) {
      PDocument d = random_pdocument(rng, spec);
      for (const XDocument& w : candidate_worlds(rng, d, 3))
        if (!(prob_explicit_mie(d, w, enumerate_matches(d, w)) == world_probability_bf(d, w)))
          return "mie variant mismatch";
    }
    spec.kinds = {NodeKind::Cie};
    for (int i = 0; i < 5; ++i) {
      PDocument d = random_pdocument(rng, spec);
      for (const XDocument& w : candidate_worlds(rng, d, 3))
        if (!(prob_explicit_oracle(d, w, enumerate_matches(d, w)) == world_probability_bf(d, w)))
          return "configuration-filter variant mismatch";
    }
    return {};
  });

  suite("rewritings preserve the distribution", [&]() -> std::string {
    Rng rng(seed + 4);
    RandomDocSpec spec;
    spec.kinds = {NodeKind::Mux};
    for (int i = 0; i < 12; ++i) {
      PDocument d = random_pdocument(rng, spec);
      WorldDistribution base = enumerate_worlds(d);
      PDocument mie = mux_to_mie(d);
      if (std::string diff = describe_diff(base, enumerate_worlds(mie)); !diff.empty())
        return "mux-to-mie: " + diff;
      if (std::string diff = describe_diff(base, enumerate_worlds(mie_to_cie(mie))); !diff.empty())
        return "mie-to-cie: " + diff;
    }
    return {};
  });

  suite("reductions agree with brute force", [&]() -> std::string {
    Rng rng(seed + 5);
    for (int i = 0; i < 5; ++i) {
      CnfFormula f = random_cnf(rng, pick(rng, 2, 4), pick(rng, 1, 4));
      auto [d, w] = gen_sat_cie(f);
      Rational p = world_probability_bf(d, w);
      unsigned long long models = sat_model_count(f);
      if (!(p * Rational(1L << f.variables) == Rational(static_cast<long>(models))))
        return "satisfiability count mismatch";
      auto [d2, w2] = gen_sat_muxind(f);
      if (world_probability_bf(d2, w2).is_zero() == (models > 0))
        return "mux/ind satisfiability gadget mismatch";
    }
    for (int i = 0; i < 5; ++i) {
      ExactCoverInstance inst = random_exact_cover(rng, pick(rng, 2, 4), pick(rng, 1, 4));
      bool truth = exact_cover_exists(inst);
      for (auto gadget : {&gen_xc_inddet, &gen_xc_muxdet}) {
        auto [d, w] = gadget(inst);
        if (world_probability_bf(d, w).is_zero() == truth) return "cover gadget mismatch";
      }
      auto [d, w] = gen_xc_mie(inst);
      if (world_probability_bf(d, w).is_zero() == truth) return "cover gadget mismatch (mie)";
    }
    for (int i = 0; i < 4; ++i) {
      BipartiteGraph g = random_bipartite(rng, pick(rng, 2, 3));
      auto [d, w] = gen_pm_ind(g);
      Rational p = world_probability_bf(d, w);
      if (!(p * Rational(1L << g.edges.size()) ==
            Rational(static_cast<long>(count_perfect_matchings(g)))))
        return "matching count mismatch";
    }
    return {};
  });

  return all_ok;
}

}  // namespace prxml
