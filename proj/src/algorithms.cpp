#include "prxml/algorithms.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "prxml/errors.hpp"

namespace prxml {

// -- iso_classes ---------------------------------------------------------------

IsoClasses iso_classes(const XDocument& w) {
  IsoClasses result;
  result.class_of.assign(w.size(), -1);
  std::map<std::pair<std::string, std::vector<int>>, int> table;

  // Children have larger preorder ids, so a reverse id sweep is bottom-up.
  for (NodeId id = w.size() - 1; id >= 0; --id) {
    const XNode& n = w.node(id);
    std::vector<int> kids;
    kids.reserve(n.children.size());
    for (NodeId c : n.children) kids.push_back(result.class_of[c]);
    if (!w.ordered) std::sort(kids.begin(), kids.end());
    auto key = std::make_pair(n.label, kids);
    auto it = table.find(key);
    if (it == table.end()) {
      int fresh = static_cast<int>(result.classes.size());
      result.classes.push_back(IsoClasses::ClassDef{n.label, kids});
      it = table.emplace(std::move(key), fresh).first;
    }
    result.class_of[id] = it->second;
  }
  result.accepting = result.class_of[w.root()];
  return result;
}

// -- prob_ordered_local -----------------------------------------------------------

namespace {

// Memoized recursion over two quantities:
//   tree(n, wn, i, j): probability that evaluating D-node n yields exactly
//     the forest of children [i, j) of W-node wn;
//   seq(n, k, wn, i, j): probability that D-edges k.. of node n yield exactly
//     that forest, composed left to right.
class OrderedLocalDp {
 public:
  OrderedLocalDp(const PDocument& d, const XDocument& w) : d_(d), w_(w) {}

  Rational run() {
    if (d_.node(d_.root()).label != w_.node(w_.root()).label) return Rational::zero();
    return seq(d_.root(), 0, w_.root(), 0, deg(w_.root()));
  }

 private:
  struct Key {
    NodeId n;
    int k;  // -1 marks a tree() entry
    NodeId wn;
    int i, j;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const {
      std::size_t h = std::hash<long long>()((static_cast<long long>(key.n) << 20) ^ key.k);
      h ^= std::hash<long long>()((static_cast<long long>(key.wn) << 28) ^
                                  (static_cast<long long>(key.i) << 14) ^ key.j) +
           0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return h;
    }
  };

  const PDocument& d_;
  const XDocument& w_;
  std::unordered_map<Key, Rational, KeyHash> memo_;

  int deg(NodeId wn) const { return static_cast<int>(w_.node(wn).children.size()); }

  Rational tree(NodeId n, NodeId wn, int i, int j) {
    Key key{n, -1, wn, i, j};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Rational out;
    const PNode& nd = d_.node(n);
    switch (nd.kind) {
      case NodeKind::Regular: {
        if (j != i + 1) break;
        NodeId wc = w_.node(wn).children[i];
        if (nd.label != w_.node(wc).label) break;
        out = seq(n, 0, wc, 0, deg(wc));
        break;
      }
      case NodeKind::Det:
      case NodeKind::Ind:
        out = seq(n, 0, wn, i, j);
        break;
      case NodeKind::Mux: {
        Rational sum;
        for (const auto& e : nd.edges) {
          const Rational& p = std::get<Rational>(e.ann);
          sum += p;
          Rational f = tree(e.child, wn, i, j);
          if (!f.is_zero()) out += p * f;
        }
        if (i == j) out += Rational::one() - sum;
        break;
      }
      default:
        throw UnsupportedClassError("ordered probability algorithm supports mux/ind/det only");
    }
    memo_.emplace(key, out);
    return out;
  }

  Rational seq(NodeId n, int k, NodeId wn, int i, int j) {
    const PNode& nd = d_.node(n);
    if (k == static_cast<int>(nd.edges.size()))
      return i == j ? Rational::one() : Rational::zero();
    Key key{n, k, wn, i, j};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const PEdge& edge = nd.edges[k];
    Rational out;
    if (nd.kind == NodeKind::Ind) {
      const Rational& p = std::get<Rational>(edge.ann);
      out += (Rational::one() - p) * seq(n, k + 1, wn, i, j);
      for (int mid = i; mid <= j; ++mid) {
        Rational f = tree(edge.child, wn, i, mid);
        if (f.is_zero()) continue;
        Rational rest = seq(n, k + 1, wn, mid, j);
        if (rest.is_zero()) continue;
        out += p * f * rest;
      }
    } else {
      for (int mid = i; mid <= j; ++mid) {
        Rational f = tree(edge.child, wn, i, mid);
        if (f.is_zero()) continue;
        Rational rest = seq(n, k + 1, wn, mid, j);
        if (rest.is_zero()) continue;
        out += f * rest;
      }
    }
    memo_.emplace(std::move(key), out);
    return out;
  }
};

}  // namespace

Rational prob_ordered_local(const PDocument& d, const XDocument& w) {
  ClassProfile profile = classify(d);
  if (!profile.uses_only({NodeKind::Mux, NodeKind::Ind, NodeKind::Det}))
    throw UnsupportedClassError("ordered probability algorithm supports mux/ind/det only");
  if (!d.ordered || !w.ordered)
    throw PreconditionError("ordered probability algorithm needs ordered documents");
  return OrderedLocalDp(d, w).run();
}

// -- Hopcroft-Karp ------------------------------------------------------------------

namespace {

class HopcroftKarp {
 public:
  HopcroftKarp(int left, int right, const std::vector<std::pair<int, int>>& edges)
      : left_(left), right_(right), adj_(left) {
    for (auto [u, v] : edges) adj_[u].push_back(v);
    match_left_.assign(left_, kFree);
    match_right_.assign(right_, kFree);
  }

  int run() {
    int matching = 0;
    while (bfs()) {
      for (int u = 0; u < left_; ++u)
        if (match_left_[u] == kFree && dfs(u)) ++matching;
    }
    return matching;
  }

 private:
  static constexpr int kFree = -1;
  static constexpr int kInf = 1 << 30;

  int left_, right_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_left_, match_right_, dist_;

  bool bfs() {
    dist_.assign(left_, kInf);
    std::deque<int> queue;
    for (int u = 0; u < left_; ++u) {
      if (match_left_[u] == kFree) {
        dist_[u] = 0;
        queue.push_back(u);
      }
    }
    bool reachable_free = false;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj_[u]) {
        int u2 = match_right_[v];
        if (u2 == kFree) {
          reachable_free = true;
        } else if (dist_[u2] == kInf) {
          dist_[u2] = dist_[u] + 1;
          queue.push_back(u2);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(int u) {
    for (int v : adj_[u]) {
      int u2 = match_right_[v];
      if (u2 == kFree || (dist_[u2] == dist_[u] + 1 && dfs(u2))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }
};

}  // namespace

MatchingResult bipartite_perfect_matching(const BipartiteGraph& g) {
  MatchingResult result;
  result.max_matching = HopcroftKarp(g.left_size, g.right_size, g.edges).run();
  result.perfect = g.left_size == g.right_size && result.max_matching == g.left_size;
  return result;
}

// -- poss_unordered_single ------------------------------------------------------------

namespace {

class UnorderedSingle {
 public:
  UnorderedSingle(const PDocument& d, const XDocument& w) : d_(d), w_(w) {
    empty_.assign(d.size(), -1);
    can_.assign(static_cast<std::size_t>(d.size()) * w.size(), -1);
  }

  bool run() { return can_match(d_.root(), w_.root()); }

 private:
  const PDocument& d_;
  const XDocument& w_;
  std::vector<signed char> empty_;  // per non-ind D-node: can it evaluate to nothing
  std::vector<signed char> can_;

  bool empty_possible(NodeId n) {
    signed char& memo = empty_[n];
    if (memo >= 0) return memo != 0;
    const PNode& nd = d_.node(n);
    bool result = false;
    if (nd.kind == NodeKind::Mux) {
      Rational sum;
      for (const auto& e : nd.edges) sum += std::get<Rational>(e.ann);
      result = sum < Rational::one();
      if (!result)
        for (const auto& e : nd.edges)
          if (empty_possible(e.child)) {
            result = true;
            break;
          }
    }
    memo = result ? 1 : 0;
    return result;
  }

  // Topmost descendants reachable without passing another non-ind node; the
  // flag says the node may be absent (an ind edge above it, or it can
  // evaluate to nothing).
  void collect(NodeId n, bool via_ind, std::vector<std::pair<NodeId, bool>>& out) {
    for (const auto& e : d_.node(n).edges) {
      if (d_.node(e.child).kind == NodeKind::Ind)
        collect(e.child, true, out);
      else
        out.emplace_back(e.child, via_ind || empty_possible(e.child));
    }
  }

  bool can_match(NodeId n, NodeId wn) {
    signed char& memo = can_[static_cast<std::size_t>(n) * w_.size() + wn];
    if (memo >= 0) return memo != 0;
    memo = 0;  // settles self-recursion conservatively; shapes are acyclic
    const PNode& nd = d_.node(n);
    bool result = false;
    if (nd.kind == NodeKind::Mux) {
      for (const auto& e : nd.edges)
        if (can_match(e.child, wn)) {
          result = true;
          break;
        }
    } else {
      result = regular_match(n, wn);
    }
    memo = result ? 1 : 0;
    return result;
  }

  bool regular_match(NodeId n, NodeId wn) {
    if (d_.node(n).label != w_.node(wn).label) return false;
    std::vector<std::pair<NodeId, bool>> candidates;
    collect(n, false, candidates);
    const auto& w_children = w_.node(wn).children;
    int left = static_cast<int>(candidates.size());
    int right = static_cast<int>(w_children.size());
    if (left < right) return false;

    BipartiteGraph g;
    g.left_size = left;
    g.right_size = left;  // right part padded with interchangeable dummies
    for (int x = 0; x < left; ++x) {
      for (int y = 0; y < right; ++y)
        if (can_match(candidates[x].first, w_children[y])) g.edges.emplace_back(x, y);
      if (candidates[x].second)
        for (int dummy = right; dummy < left; ++dummy) g.edges.emplace_back(x, dummy);
    }
    return bipartite_perfect_matching(g).perfect;
  }
};

}  // namespace

bool poss_unordered_single(const PDocument& d, const XDocument& w, bool relaxed) {
  ClassProfile profile = classify(d);
  if (!profile.uses_only({NodeKind::Mux, NodeKind::Ind}))
    throw UnsupportedClassError("unordered possibility algorithm supports mux/ind only");
  if (!relaxed && profile.used.size() > 1)
    throw UnsupportedClassError(
        "mixing mux and ind needs the relaxed mode (no ind node under a mux node)");
  if (!profile.no_ind_under_mux)
    throw PreconditionError("document has an ind node directly under a mux node");
  if (d.ordered || w.ordered)
    throw PreconditionError("unordered possibility algorithm needs unordered documents");

  PDocument stripped = strip_probabilistic_leaves(d);
  return UnorderedSingle(stripped, w).run();
}

}  // namespace prxml
