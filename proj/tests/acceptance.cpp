// Acceptance gate: one criterion per invocation, selected by argv[1] (1..10).
// Prints exactly one PASS/FAIL line and exits 0/1. All probability checks are
// exact rational comparisons; the only tolerances anywhere are wall-clock
// budgets and the runtime-growth ratio bound.

#include <chrono>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "prxml/algorithms.hpp"
#include "prxml/errors.hpp"
#include "prxml/format.hpp"
#include "prxml/gen.hpp"
#include "prxml/matches.hpp"
#include "prxml/model.hpp"
#include "prxml/oracle.hpp"
#include "prxml/rewrite.hpp"
#include "prxml/selftest.hpp"

namespace {

using namespace prxml;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome pass(const std::string& detail) { return {true, detail}; }
Outcome fail(const std::string& detail) { return {false, detail}; }

double secs_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string corpus(const std::string& name) {
  return std::string(PRXML_CORPUS_DIR) + "/" + name;
}

Rational pow2(int e) {
  Rational r = Rational::one();
  for (int i = 0; i < e; ++i) r *= Rational(2);
  return r;
}

int ceil_log2(std::size_t k) {
  int bits = 0;
  while ((std::size_t{1} << bits) < k) ++bits;
  return bits;
}

// -- 1: every random document's world distribution sums to exactly 1 --------

Outcome criterion1() {
  auto start = Clock::now();
  Rng rng(11);
  RandomDocSpec spec;
  spec.kinds = {NodeKind::Det, NodeKind::Ind, NodeKind::Mux,
                NodeKind::Cie, NodeKind::Fie, NodeKind::Mie};
  for (int i = 0; i < 200; ++i) {
    spec.ordered = i % 2 == 0;
    PDocument d = random_pdocument(rng, spec);
    WorldDistribution dist = enumerate_worlds(d);
    if (dist.total() != Rational::one())
      return fail("document " + std::to_string(i) + " sums to " + dist.total().str());
  }
  double t = secs_since(start);
  if (t >= 60.0) return fail("exceeded 60 s budget: " + std::to_string(t) + " s");
  std::ostringstream os;
  os << "200 documents, every distribution total exactly 1, " << t << " s";
  return pass(os.str());
}

// -- 2: ordered mux/ind/det DP equals the enumeration oracle ----------------

Outcome criterion2() {
  auto start = Clock::now();
  Rng rng(22);
  RandomDocSpec spec;
  spec.kinds = {NodeKind::Mux, NodeKind::Ind, NodeKind::Det};
  spec.ordered = true;
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    PDocument d = random_pdocument(rng, spec);
    for (const XDocument& w : candidate_worlds(rng, d, 5)) {
      Rational dp = prob_ordered_local(d, w);
      Rational bf = world_probability_bf(d, w);
      if (dp != bf)
        return fail("document " + std::to_string(i) + ": DP " + dp.str() +
                    " vs oracle " + bf.str());
      ++checked;
    }
  }
  double t = secs_since(start);
  if (t >= 120.0) return fail("exceeded 120 s budget: " + std::to_string(t) + " s");
  std::ostringstream os;
  os << checked << " document/world pairs, exact agreement, " << t << " s";
  return pass(os.str());
}

// -- 3: unordered single-type decision equals the oracle --------------------

Outcome criterion3() {
  Rng rng(33);
  struct Family {
    const char* name;
    std::vector<NodeKind> kinds;
    bool forbid_ind_under_mux;
    bool relaxed;
  };
  const Family families[] = {
      {"ind-only", {NodeKind::Ind}, false, false},
      {"mux-only", {NodeKind::Mux}, false, false},
      {"mux+ind", {NodeKind::Mux, NodeKind::Ind}, true, true},
  };
  int checked = 0;
  for (const Family& fam : families) {
    RandomDocSpec spec;
    spec.kinds = fam.kinds;
    spec.forbid_ind_under_mux = fam.forbid_ind_under_mux;
    for (int i = 0; i < 200; ++i) {
      PDocument d = random_pdocument(rng, spec);
      for (const XDocument& w : candidate_worlds(rng, d, 5)) {
        bool decided = poss_unordered_single(d, w, fam.relaxed);
        bool actual = !world_probability_bf(d, w).is_zero();
        if (decided != actual)
          return fail(std::string(fam.name) + " document " + std::to_string(i) +
                      ": decision " + (decided ? "yes" : "no") + " vs oracle " +
                      (actual ? "yes" : "no"));
        ++checked;
      }
    }
  }
  return pass(std::to_string(checked) + " decisions across 3 families, zero disagreements");
}

// -- 4: explicit-matches algorithms equal the oracle ------------------------

Outcome criterion4() {
  Rng rng(44);
  RandomDocSpec local;
  local.kinds = {NodeKind::Mux, NodeKind::Ind, NodeKind::Det};
  for (int i = 0; i < 200; ++i) {
    local.ordered = i % 2 == 0;
    PDocument d = random_pdocument(rng, local);
    std::vector<XDocument> ws = candidate_worlds(rng, d, 3);
    const XDocument& w = ws[i % ws.size()];
    std::vector<CandidateMatch> ms = enumerate_matches(d, w);
    Rational got = prob_explicit_local(d, w, ms);
    Rational bf = world_probability_bf(d, w);
    if (got != bf)
      return fail("local instance " + std::to_string(i) + ": " + got.str() +
                  " vs oracle " + bf.str());
  }
  RandomDocSpec mie;
  mie.kinds = {NodeKind::Mie};
  for (int i = 0; i < 200; ++i) {
    mie.ordered = i % 2 == 0;
    PDocument d = random_pdocument(rng, mie);
    std::vector<XDocument> ws = candidate_worlds(rng, d, 3);
    const XDocument& w = ws[i % ws.size()];
    std::vector<CandidateMatch> ms = enumerate_matches(d, w);
    Rational got = prob_explicit_mie(d, w, ms);
    Rational bf = world_probability_bf(d, w);
    if (got != bf)
      return fail("mie instance " + std::to_string(i) + ": " + got.str() +
                  " vs oracle " + bf.str());
  }
  return pass("200 local + 200 mie instances, exact agreement with the oracle");
}

// -- 5: matching-count identity D(W) * 2^|E| == #perfect matchings ----------

Outcome criterion5() {
  std::vector<BipartiteGraph> graphs;
  for (int n = 1; n <= 3; ++n) {
    int cells = n * n;
    for (unsigned mask = 0; mask < (1u << cells); ++mask) {
      BipartiteGraph g{n, n, {}};
      for (int c = 0; c < cells; ++c)
        if (mask & (1u << c)) g.edges.emplace_back(c / n, c % n);
      graphs.push_back(std::move(g));
    }
  }
  Rng rng(55);
  for (int i = 0; i < 8; ++i) graphs.push_back(random_bipartite(rng, 4));
  BipartiteGraph k44{4, 4, {}};
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v) k44.edges.emplace_back(u, v);
  graphs.push_back(k44);

  auto identity_holds = [](const BipartiteGraph& g, unsigned long long count) {
    for (auto* gadget : {&gen_pm_ind, &gen_pm_mux}) {
      auto [d, w] = (*gadget)(g);
      Rational lhs = world_probability_bf(d, w) * pow2(static_cast<int>(g.edges.size()));
      if (lhs != Rational(static_cast<long>(count))) return false;
    }
    return true;
  };

  for (std::size_t i = 0; i < graphs.size(); ++i)
    if (!identity_holds(graphs[i], count_perfect_matchings(graphs[i])))
      return fail("graph " + std::to_string(i) + " breaks the identity");

  BipartiteGraph k33{3, 3, {}};
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) k33.edges.emplace_back(u, v);
  if (count_perfect_matchings(k33) != 6) return fail("complete 3x3 count is not 6");
  if (!identity_holds(k33, 6)) return fail("complete 3x3 graph breaks the identity");

  return pass(std::to_string(graphs.size() + 1) +
              " graphs (exhaustive n<=3, sampled n=4), both gadgets, complete 3x3 yields 6");
}

// -- 6: 3-CNF gadget matches truth-table satisfiability and model count -----

Outcome criterion6() {
  Rng rng(66);
  for (int i = 0; i < 50; ++i) {
    int variables = 1 + static_cast<int>(rng() % 10);
    int clauses = 1 + static_cast<int>(rng() % 10);
    CnfFormula f = random_cnf(rng, variables, clauses);
    auto [d, w] = gen_sat_cie(f);
    Rational p = world_probability_bf(d, w);
    unsigned long long models = sat_model_count(f);
    if (p.is_zero() == (models > 0))
      return fail("formula " + std::to_string(i) + ": possibility " +
                  (p.is_zero() ? "no" : "yes") + " vs " + std::to_string(models) + " models");
    if (p * pow2(variables) != Rational(static_cast<long>(models)))
      return fail("formula " + std::to_string(i) + ": D(W)*2^m = " +
                  (p * pow2(variables)).str() + " vs model count " + std::to_string(models));
  }
  return pass("50 random 3-CNF formulas, possibility == satisfiability and D(W)*2^m == #models");
}

// -- 7: exact-cover gadgets match brute-force subset search ------------------

Outcome criterion7() {
  Rng rng(77);
  for (int i = 0; i < 50; ++i) {
    int universe = 1 + static_cast<int>(rng() % 8);
    int sets = 1 + static_cast<int>(rng() % 8);
    ExactCoverInstance inst = random_exact_cover(rng, universe, sets);
    bool expected = exact_cover_exists(inst);
    struct Variant {
      const char* name;
      std::pair<PDocument, XDocument> pair;
    };
    const Variant variants[] = {{"ind+det", gen_xc_inddet(inst)},
                                {"mux+det", gen_xc_muxdet(inst)},
                                {"mie", gen_xc_mie(inst)}};
    for (const Variant& v : variants) {
      bool possible = !world_probability_bf(v.pair.first, v.pair.second).is_zero();
      if (possible != expected)
        return fail("instance " + std::to_string(i) + " (" + v.name + "): " +
                    (possible ? "yes" : "no") + " vs search " + (expected ? "yes" : "no"));
    }
  }
  return pass("50 instances, all three gadget variants agree with subset search");
}

// -- 8: mux -> mie -> cie rewrites preserve the exact distribution -----------

Outcome criterion8() {
  Rng rng(88);
  RandomDocSpec spec;
  spec.kinds = {NodeKind::Mux};
  spec.max_prob_nodes = 5;
  spec.max_configs = 1ull << 10;

  auto same_distribution = [](const WorldDistribution& a, const WorldDistribution& b) {
    if (a.worlds.size() != b.worlds.size()) return false;
    for (const auto& [key, entry] : a.worlds) {
      auto it = b.worlds.find(key);
      if (it == b.worlds.end() || it->second.prob != entry.prob) return false;
    }
    return true;
  };

  for (int i = 0; i < 100; ++i) {
    spec.ordered = i % 2 == 0;
    PDocument d = random_pdocument(rng, spec);
    PDocument viaMie = mux_to_mie(d);
    PDocument viaCie = mie_to_cie(viaMie);
    WorldDistribution base = enumerate_worlds(d);
    if (!same_distribution(base, enumerate_worlds(viaMie)))
      return fail("document " + std::to_string(i) + ": mie rewrite changes the distribution");
    if (!same_distribution(base, enumerate_worlds(viaCie)))
      return fail("document " + std::to_string(i) + ": cie rewrite changes the distribution");

    std::map<std::string, int> bound;
    for (const Event& e : viaMie.events.events)
      bound[e.id] = ceil_log2(e.outcomes.size());
    for (const PNode& node : viaCie.nodes) {
      if (node.kind != NodeKind::Cie) continue;
      for (const PEdge& edge : node.edges) {
        const auto& conj = std::get<std::vector<EventLiteral>>(edge.ann);
        if (conj.empty()) continue;
        std::string original = conj.front().event.substr(0, conj.front().event.find(".b"));
        auto it = bound.find(original);
        if (it == bound.end())
          return fail("document " + std::to_string(i) + ": literal on unknown event " +
                      conj.front().event);
        if (static_cast<int>(conj.size()) > it->second)
          return fail("document " + std::to_string(i) + ": conjunction of " +
                      std::to_string(conj.size()) + " literals for a " +
                      std::to_string(std::size_t{1} << it->second) + "-outcome bound");
      }
    }
  }
  return pass("100 mux documents: identical distributions through both rewrites, "
              "conjunctions within the log bound");
}

// -- 9: shipped two-conference corpus regression ------------------------------

Outcome criterion9() {
  PDocument d = parse_prxml(read_text_file(corpus("two-conferences.prxml")));
  const std::pair<std::string, Rational> cases[] = {
      {"two-conferences-w1.xml.sexp", Rational(567, 1250)},
      {"two-conferences-root.xml.sexp", Rational(3, 50)},
  };
  for (const auto& [file, expected] : cases) {
    XDocument w = parse_xml(read_text_file(corpus(file)));

    Rational oracle = world_probability_bf(d, w);
    if (oracle != expected)
      return fail(file + ": oracle " + oracle.str() + " vs expected " + expected.str());

    std::vector<CandidateMatch> ms = enumerate_matches(d, w);
    Rational explicit_ms = prob_explicit_oracle(d, w, ms);
    if (explicit_ms != expected)
      return fail(file + ": explicit-matches " + explicit_ms.str() + " vs expected " +
                  expected.str());

    Rational conditioned = Rational::zero();
    for (const auto& [valuation, vp] : all_valuations(d.events))
      conditioned += vp * prob_ordered_local(resolve_under_valuation(d, valuation), w);
    if (conditioned != expected)
      return fail(file + ": valuation-conditioned DP " + conditioned.str() +
                  " vs expected " + expected.str());
  }
  return pass("567/1250 and 3/50 via oracle, explicit matches, and conditioned DP");
}

// -- 10: the DP scales polynomially where the oracle blows up ----------------

Outcome criterion10() {
  Rational expected = Rational::one();
  std::vector<double> avg;
  for (int k = 1; k <= 8; ++k) {
    auto [d, w] = scaling_family(k);
    expected *= Rational(1, 24);
    if (prob_ordered_local(d, w) != expected)
      return fail("size " + std::to_string(20 * k) + ": wrong probability");

    auto start = Clock::now();
    int runs = 0;
    double elapsed = 0.0;
    do {
      Rational p = prob_ordered_local(d, w);
      if (p != expected) return fail("size " + std::to_string(20 * k) + ": unstable result");
      ++runs;
      elapsed = secs_since(start);
    } while (elapsed < 0.03);
    avg.push_back(elapsed / runs);
  }

  std::ostringstream ratios;
  for (std::size_t k = 0; k + 1 < avg.size(); ++k) {
    double ratio = avg[k + 1] / avg[k];
    ratios << (k ? ", " : "") << ratio;
    if (ratio >= 8.0)
      return fail("sizes " + std::to_string(20 * (k + 1)) + " -> " +
                  std::to_string(20 * (k + 2)) + ": runtime ratio " + std::to_string(ratio));
  }

  auto [d8, w8] = scaling_family(8);
  try {
    world_probability_bf(d8, w8);
    return fail("oracle finished the size-160 member without hitting its cap");
  } catch (const TooManyConfigurationsError&) {
  }
  std::ostringstream os;
  os << "DP exact through size 160 with growth ratios " << ratios.str()
     << "; oracle capped on the same family";
  return pass(os.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <criterion 1..10>\n";
    return 2;
  }
  int n = std::atoi(argv[1]);
  Outcome (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                             criterion6, criterion7, criterion8, criterion9, criterion10};
  if (n < 1 || n > 10) {
    std::cerr << "usage: acceptance <criterion 1..10>\n";
    return 2;
  }
  Outcome result;
  try {
    result = criteria[n - 1]();
  } catch (const std::exception& e) {
    result = fail(std::string("unexpected exception: ") + e.what());
  }
  std::cout << (result.ok ? "PASS" : "FAIL") << " criterion " << n << ": " << result.detail
            << "\n";
  return result.ok ? 0 : 1;
}
