#include "prxml/gen.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "prxml/errors.hpp"

namespace prxml {

namespace {

const Rational kHalf(1, 2);

void require_cnf(const CnfFormula& f) {
  if (f.variables < 1) throw PreconditionError("CNF needs at least one variable");
  if (f.clauses.empty()) throw PreconditionError("CNF needs at least one clause");
  for (const auto& clause : f.clauses) {
    if (clause.empty()) throw PreconditionError("empty clause");
    for (int lit : clause)
      if (lit == 0 || std::abs(lit) > f.variables)
        throw PreconditionError("literal " + std::to_string(lit) + " out of range");
  }
}

void require_cover(const ExactCoverInstance& inst) {
  if (inst.sets.empty()) throw PreconditionError("cover instance needs at least one set");
  std::set<std::string> universe(inst.universe.begin(), inst.universe.end());
  if (universe.size() != inst.universe.size())
    throw PreconditionError("duplicate universe element");
  if (universe.empty()) throw PreconditionError("empty universe");
  for (const auto& s : inst.sets) {
    if (s.empty()) throw PreconditionError("empty set");
    std::set<std::string> dedup(s.begin(), s.end());
    if (dedup.size() != s.size()) throw PreconditionError("duplicate element within a set");
    for (const auto& v : s)
      if (!universe.count(v)) throw PreconditionError("set element " + v + " not in the universe");
  }
}

void require_square(const BipartiteGraph& g) {
  if (g.left_size != g.right_size || g.left_size < 1)
    throw PreconditionError("graph parts must be nonempty and of equal size");
  for (auto [u, v] : g.edges)
    if (u < 0 || u >= g.left_size || v < 0 || v >= g.right_size)
      throw PreconditionError("edge endpoint out of range");
}

EventTable boolean_halves(const std::string& prefix, int count) {
  EventTable t;
  for (int i = 1; i <= count; ++i)
    t.events.push_back(Event{prefix + std::to_string(i), {{"t", kHalf}, {"f", kHalf}}});
  return t;
}

XDocument top_with_leaves(const std::vector<std::string>& labels, bool ordered) {
  XTreeNode w = XTreeNode::leaf("top");
  for (const auto& l : labels) w.add(XTreeNode::leaf(l));
  return freeze(w, ordered);
}

std::string clause_label(std::size_t j) { return "l" + std::to_string(j + 1); }

}  // namespace

CnfFormula parse_dimacs(const std::string& text) {
  CnfFormula f;
  std::istringstream in(text);
  std::string line;
  bool seen_header = false;
  std::vector<int> clause;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") continue;
    if (first == "%") break;
    if (first == "p") {
      std::string kind;
      int clause_count = 0;
      if (seen_header || !(ls >> kind >> f.variables >> clause_count) || kind != "cnf")
        throw PreconditionError("malformed DIMACS header");
      seen_header = true;
      continue;
    }
    if (!seen_header) throw PreconditionError("DIMACS literals before the 'p cnf' header");
    ls.clear();
    ls.seekg(0);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (clause.empty()) throw PreconditionError("empty clause");
        f.clauses.push_back(std::move(clause));
        clause.clear();
      } else {
        clause.push_back(lit);
      }
    }
    if (!ls.eof()) throw PreconditionError("non-integer token in a DIMACS clause");
  }
  if (!seen_header) throw PreconditionError("missing DIMACS header");
  if (!clause.empty()) throw PreconditionError("last clause not terminated by 0");
  require_cnf(f);
  return f;
}

ExactCoverInstance parse_set_lines(const std::string& text) {
  ExactCoverInstance inst;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> s;
    std::string v;
    while (ls >> v) {
      if (seen.insert(v).second) inst.universe.push_back(v);
      s.push_back(std::move(v));
    }
    if (!s.empty()) inst.sets.push_back(std::move(s));
  }
  require_cover(inst);
  return inst;
}

BipartiteGraph parse_edge_list(const std::string& text) {
  BipartiteGraph g;
  std::istringstream in(text);
  std::string line;
  bool seen_size = false;
  std::set<std::pair<int, int>> seen_edges;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (!seen_size) {
      if (!(ls >> g.left_size)) continue;
      std::string rest;
      if (ls >> rest) throw PreconditionError("size line must hold a single integer");
      g.right_size = g.left_size;
      seen_size = true;
      continue;
    }
    int u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v)) throw PreconditionError("edge line needs two endpoints");
    std::string rest;
    if (ls >> rest) throw PreconditionError("edge line has trailing tokens");
    if (!seen_edges.insert({u, v}).second)
      throw PreconditionError("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    g.edges.emplace_back(u - 1, v - 1);
  }
  if (!seen_size) throw PreconditionError("missing part size line");
  require_square(g);
  return g;
}

std::pair<PDocument, XDocument> gen_sat_cie(const CnfFormula& f) {
  require_cnf(f);
  TreeNode d = TreeNode::regular("top");
  TreeNode cie;
  cie.kind = NodeKind::Cie;
  for (const auto& clause : f.clauses) {
    // The edge keeps its leaf exactly when every literal of the clause is
    // false, so an all-clauses-true assignment keeps nothing.
    std::vector<EventLiteral> conj;
    for (int lit : clause)
      conj.push_back(EventLiteral{"x" + std::to_string(std::abs(lit)), lit < 0});
    cie.add(std::move(conj), TreeNode::regular("bot"));
  }
  d.add(std::move(cie));
  return {freeze(d, boolean_halves("x", f.variables), false), top_with_leaves({}, false)};
}

std::pair<PDocument, XDocument> gen_sat_muxind(const CnfFormula& f) {
  require_cnf(f);
  TreeNode d = TreeNode::regular("top");
  for (int var = 1; var <= f.variables; ++var) {
    TreeNode mux;
    mux.kind = NodeKind::Mux;
    for (bool phase : {true, false}) {
      TreeNode ind;
      ind.kind = NodeKind::Ind;
      for (std::size_t j = 0; j < f.clauses.size(); ++j)
        for (int lit : f.clauses[j])
          if (std::abs(lit) == var && (lit > 0) == phase)
            ind.add(kHalf, TreeNode::regular(clause_label(j)));
      mux.add(kHalf, std::move(ind));
    }
    d.add(std::move(mux));
  }
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < f.clauses.size(); ++j) labels.push_back(clause_label(j));
  return {freeze(d, {}, false), top_with_leaves(labels, false)};
}

namespace {

std::pair<PDocument, XDocument> gen_xc_local(const ExactCoverInstance& inst, NodeKind kind) {
  require_cover(inst);
  TreeNode d = TreeNode::regular("top");
  for (const auto& s : inst.sets) {
    TreeNode chooser;
    chooser.kind = kind;
    TreeNode det;
    det.kind = NodeKind::Det;
    for (const auto& v : s) det.add(TreeNode::regular(v));
    chooser.add(kHalf, std::move(det));
    d.add(std::move(chooser));
  }
  return {freeze(d, {}, false), top_with_leaves(inst.universe, false)};
}

}  // namespace

std::pair<PDocument, XDocument> gen_xc_inddet(const ExactCoverInstance& inst) {
  return gen_xc_local(inst, NodeKind::Ind);
}

std::pair<PDocument, XDocument> gen_xc_muxdet(const ExactCoverInstance& inst) {
  return gen_xc_local(inst, NodeKind::Mux);
}

std::pair<PDocument, XDocument> gen_xc_mie(const ExactCoverInstance& inst, bool ordered) {
  require_cover(inst);
  TreeNode d = TreeNode::regular("top");
  TreeNode mie;
  mie.kind = NodeKind::Mie;
  // Grouping the edges by element makes every cover keep the universe in
  // declaration order, so the reduction also works for ordered documents.
  for (const auto& v : inst.universe)
    for (std::size_t i = 0; i < inst.sets.size(); ++i)
      for (const auto& element : inst.sets[i])
        if (element == v)
          mie.add(MieAtom{"e" + std::to_string(i + 1), "t"}, TreeNode::regular(v));
  d.add(std::move(mie));
  return {freeze(d, boolean_halves("e", static_cast<int>(inst.sets.size())), ordered),
          top_with_leaves(inst.universe, ordered)};
}

namespace {

std::pair<PDocument, XDocument> gen_pm(const BipartiteGraph& g, NodeKind kind) {
  require_square(g);
  std::vector<std::vector<int>> incident(g.left_size);
  for (auto [u, v] : g.edges) incident[u].push_back(v);
  for (auto& row : incident) std::sort(row.begin(), row.end());

  TreeNode d = TreeNode::regular("top");
  for (int u = 0; u < g.left_size; ++u) {
    TreeNode bot = TreeNode::regular("bot");
    for (int v : incident[u]) {
      TreeNode chooser;
      chooser.kind = kind;
      chooser.add(kHalf, TreeNode::regular(clause_label(v)));
      bot.add(std::move(chooser));
    }
    d.add(std::move(bot));
  }

  XTreeNode w = XTreeNode::leaf("top");
  for (int v = 0; v < g.right_size; ++v) {
    XTreeNode bot = XTreeNode::leaf("bot");
    bot.add(XTreeNode::leaf(clause_label(v)));
    w.add(std::move(bot));
  }
  return {freeze(d, {}, false), freeze(w, false)};
}

}  // namespace

std::pair<PDocument, XDocument> gen_pm_ind(const BipartiteGraph& g) {
  return gen_pm(g, NodeKind::Ind);
}

std::pair<PDocument, XDocument> gen_pm_mux(const BipartiteGraph& g) {
  return gen_pm(g, NodeKind::Mux);
}

}  // namespace prxml
