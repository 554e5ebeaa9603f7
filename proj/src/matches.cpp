#include "prxml/matches.hpp"

#include <algorithm>
#include <set>

#include "prxml/algorithms.hpp"
#include "prxml/errors.hpp"

namespace prxml {

namespace {

// Nearest regular proper ancestor of every node (-1 for the root).
std::vector<NodeId> regular_anchors(const PDocument& d) {
  std::vector<NodeId> anchor(d.size(), -1);
  for (NodeId id = 1; id < d.size(); ++id) {
    NodeId p = d.node(id).parent;
    anchor[id] = d.node(p).kind == NodeKind::Regular ? p : anchor[p];
  }
  return anchor;
}

class MatchEnumerator {
 public:
  MatchEnumerator(const PDocument& d, const XDocument& w, unsigned long long cap)
      : d_(d), w_(w), cap_(cap) {
    std::vector<NodeId> anchor = regular_anchors(d);
    bucket_.assign(d.size(), {});
    for (NodeId id = 1; id < d.size(); ++id)
      if (d.node(id).kind == NodeKind::Regular) bucket_[anchor[id]].push_back(id);
  }

  std::vector<CandidateMatch> run() {
    if (d_.node(d_.root()).label != w_.node(w_.root()).label) return {};
    assignment_.assign(w_.size(), -1);
    used_.assign(d_.size(), false);
    assignment_[w_.root()] = d_.root();
    used_[d_.root()] = true;
    extend(1);
    return std::move(out_);
  }

 private:
  const PDocument& d_;
  const XDocument& w_;
  unsigned long long cap_;
  std::vector<std::vector<NodeId>> bucket_;  // regular descendants via probabilistic paths
  std::vector<NodeId> assignment_;
  std::vector<bool> used_;
  std::vector<CandidateMatch> out_;

  void extend(NodeId wid) {
    if (wid == w_.size()) {
      if (out_.size() == cap_) throw TooManyMatchesError(cap_);
      CandidateMatch f;
      for (NodeId v = 0; v < w_.size(); ++v) f[v] = assignment_[v];
      out_.push_back(std::move(f));
      return;
    }
    const XNode& wn = w_.node(wid);
    for (NodeId cand : bucket_[assignment_[wn.parent]]) {
      if (used_[cand] || d_.node(cand).label != wn.label) continue;
      used_[cand] = true;
      assignment_[wid] = cand;
      extend(wid + 1);
      assignment_[wid] = -1;
      used_[cand] = false;
    }
  }
};

std::vector<NodeId> image_of(const CandidateMatch& f) {
  std::vector<NodeId> image;
  image.reserve(f.size());
  for (const auto& pair : f) image.push_back(pair.second);
  std::sort(image.begin(), image.end());
  return image;
}

// Representatives of the distinct images. Two matches sharing an image
// describe the same evaluation event (keep exactly these regular nodes), so
// summing both would double count.
std::vector<const CandidateMatch*> image_distinct(const std::vector<CandidateMatch>& ms) {
  std::set<std::vector<NodeId>> seen;
  std::vector<const CandidateMatch*> reps;
  for (const CandidateMatch& f : ms)
    if (seen.insert(image_of(f)).second) reps.push_back(&f);
  return reps;
}

void require_valid(const PDocument& d, const XDocument& w,
                   const std::vector<CandidateMatch>& ms) {
  if (d.ordered != w.ordered)
    throw PreconditionError("document and world disagree on sibling order");
  for (const CandidateMatch& f : ms) {
    std::vector<std::string> problems = check_match(d, w, f);
    if (!problems.empty()) throw PreconditionError("supplied match invalid: " + problems.front());
  }
}

std::string fresh_label(NodeId wid) { return "#" + std::to_string(wid); }

}  // namespace

std::vector<CandidateMatch> enumerate_matches(const PDocument& d, const XDocument& w,
                                              unsigned long long cap) {
  return MatchEnumerator(d, w, cap).run();
}

std::vector<std::string> check_match(const PDocument& d, const XDocument& w,
                                     const CandidateMatch& f) {
  std::vector<std::string> problems;
  auto complain = [&](std::string msg) { problems.push_back(std::move(msg)); };

  std::set<NodeId> image;
  for (auto [wid, did] : f) {
    if (wid < 0 || wid >= w.size()) {
      complain("world node " + std::to_string(wid) + " does not exist");
      continue;
    }
    if (did < 0 || did >= d.size()) {
      complain("document node " + std::to_string(did) + " does not exist");
      continue;
    }
    if (d.node(did).kind != NodeKind::Regular)
      complain("world node " + std::to_string(wid) + " maps to a non-regular node");
    else if (d.node(did).label != w.node(wid).label)
      complain("labels differ at world node " + std::to_string(wid));
    if (!image.insert(did).second)
      complain("document node " + std::to_string(did) + " used twice");
  }
  for (NodeId wid = 0; wid < w.size(); ++wid)
    if (!f.count(wid)) complain("world node " + std::to_string(wid) + " unmapped");
  if (!problems.empty()) return problems;

  if (f.at(w.root()) != d.root()) complain("world root does not map to the document root");
  std::vector<NodeId> anchor = regular_anchors(d);
  for (NodeId wid = 1; wid < w.size(); ++wid) {
    NodeId did = f.at(wid);
    if (anchor[did] != f.at(w.node(wid).parent))
      complain("image of world node " + std::to_string(wid) +
               " is not reachable from its parent's image through probabilistic nodes");
  }
  return problems;
}

std::vector<CandidateMatch> filter_matches_order(const PDocument& d, const XDocument& w,
                                                 std::vector<CandidateMatch> ms) {
  if (!d.ordered || !w.ordered) return ms;
  auto crossing = [&](const CandidateMatch& f) {
    for (NodeId wid = 0; wid < w.size(); ++wid) {
      const auto& kids = w.node(wid).children;
      for (std::size_t i = 1; i < kids.size(); ++i)
        if (f.at(kids[i - 1]) >= f.at(kids[i])) return true;
    }
    return false;
  };
  std::erase_if(ms, crossing);
  return ms;
}

Rational prob_explicit_local(const PDocument& d, const XDocument& w,
                             const std::vector<CandidateMatch>& ms) {
  if (!classify(d).uses_only({NodeKind::Mux, NodeKind::Ind, NodeKind::Det}))
    throw UnsupportedClassError("explicit-match probability supports mux/ind/det only");
  require_valid(d, w, ms);

  Rational total;
  std::vector<CandidateMatch> kept = filter_matches_order(d, w, ms);
  for (const CandidateMatch* fp : image_distinct(kept)) {
    const CandidateMatch& f = *fp;

    XDocument wr = w;  // every node gets a label no document label can collide with
    for (NodeId wid = 0; wid < wr.size(); ++wid) wr.nodes[wid].label = fresh_label(wid);

    PDocument dr = d;  // image nodes take the label of their preimage
    for (auto [wid, did] : f) dr.nodes[did].label = fresh_label(wid);

    if (!d.ordered) {
      // Impose the document's stored order, mirrored onto the world: the
      // image ids are document-preorder positions.
      for (XNode& n : wr.nodes)
        std::sort(n.children.begin(), n.children.end(),
                  [&](NodeId a, NodeId b) { return f.at(a) < f.at(b); });
    }
    dr.ordered = true;
    wr.ordered = true;
    total += prob_ordered_local(dr, wr);
  }
  return total;
}

MatchConstraint match_constraint_mie(const PDocument& d, const CandidateMatch& f) {
  if (!classify(d).uses_only({NodeKind::Mie}))
    throw UnsupportedClassError("match constraints are defined for mie documents only");

  MatchConstraint mc;
  std::set<NodeId> image;
  for (const auto& pair : f) image.insert(pair.second);
  if (!image.count(d.root())) {
    mc.infeasible = true;
    return mc;
  }

  // Walk the part of the document that is certainly present given the match:
  // a present regular node keeps all its children, so a child outside the
  // image sinks the match unless a mie edge above it can be switched off.
  auto visit = [&](auto&& self, NodeId n) -> void {
    const PNode& nd = d.node(n);
    for (const PEdge& e : nd.edges) {
      bool in_image = image.count(e.child) != 0;
      if (nd.kind == NodeKind::Mie) {
        mc.atoms.emplace_back(std::get<MieAtom>(e.ann), in_image);
        if (in_image) self(self, e.child);
      } else if (d.node(e.child).kind == NodeKind::Regular && !in_image) {
        mc.infeasible = true;
        return;
      } else {
        self(self, e.child);
      }
      if (mc.infeasible) return;
    }
  };
  visit(visit, d.root());
  if (mc.infeasible) mc.atoms.clear();
  return mc;
}

Rational prob_explicit_mie(const PDocument& d, const XDocument& w,
                           const std::vector<CandidateMatch>& ms) {
  if (!classify(d).uses_only({NodeKind::Mie}))
    throw UnsupportedClassError("explicit-match probability via constraints needs a mie document");
  require_valid(d, w, ms);

  Rational total;
  std::vector<CandidateMatch> kept = filter_matches_order(d, w, ms);
  for (const CandidateMatch* fp : image_distinct(kept)) {
    MatchConstraint mc = match_constraint_mie(d, *fp);
    if (mc.infeasible) continue;

    // Surviving outcomes per constrained event; unconstrained events
    // marginalize to 1.
    std::map<std::string, std::set<std::string>> allowed;
    bool empty = false;
    for (const auto& [atom, equal] : mc.atoms) {
      const Event* ev = d.events.find(atom.event);
      auto [it, fresh] = allowed.try_emplace(atom.event);
      if (fresh)
        for (const auto& [value, prob] : ev->outcomes) it->second.insert(value);
      if (equal) {
        bool kept = it->second.count(atom.value) != 0;
        it->second.clear();
        if (kept) it->second.insert(atom.value);
      } else {
        it->second.erase(atom.value);
      }
      if (it->second.empty()) empty = true;
    }
    if (empty) continue;

    Rational p = Rational::one();
    for (const auto& [event, values] : allowed) {
      Rational mass;
      for (const std::string& value : values) mass += *d.events.find(event)->outcome_prob(value);
      p *= mass;
    }
    total += p;
  }
  return total;
}

Rational prob_explicit_oracle(const PDocument& d, const XDocument& w,
                              const std::vector<CandidateMatch>& ms,
                              unsigned long long cap) {
  classify(d);
  require_valid(d, w, ms);

  std::set<std::set<NodeId>> images;
  std::vector<CandidateMatch> kept = filter_matches_order(d, w, ms);
  for (const CandidateMatch* fp : image_distinct(kept)) {
    std::set<NodeId> image;
    for (const auto& pair : *fp) image.insert(pair.second);
    images.insert(std::move(image));
  }

  ConfigurationSpace space(d);
  if (space.count() > cap) throw TooManyConfigurationsError(space.count(), cap);
  Rational total;
  Configuration cfg = space.first();
  do {
    if (images.count(kept_regular_nodes(d, cfg))) total += space.probability(cfg);
  } while (space.next(cfg));
  return total;
}

}  // namespace prxml
