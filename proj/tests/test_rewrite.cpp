#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "prxml/errors.hpp"
#include "prxml/oracle.hpp"
#include "prxml/rewrite.hpp"
#include "prxml/selftest.hpp"

using namespace prxml;

namespace {

bool same_distribution(const PDocument& a, const PDocument& b) {
  WorldDistribution da = enumerate_worlds(a);
  WorldDistribution db = enumerate_worlds(b);
  if (da.worlds.size() != db.worlds.size()) return false;
  for (const auto& [key, entry] : da.worlds) {
    auto it = db.worlds.find(key);
    if (it == db.worlds.end() || !(it->second.prob == entry.prob)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("flatten_mux absorbs nested branches") {
  PDocument d = t::doc(R"((prxml (events) (ordered false)
    (node "r" (mux (1/2 (mux (1/2 (node "a")) (1/2 (node "b")))) (1/2 (node "c"))))))");
  PDocument flat = flatten_mux(d);
  CHECK(classify(flat).no_mux_hierarchy);
  REQUIRE(flat.size() == 5);
  const PNode& mux = flat.node(1);
  REQUIRE(mux.kind == NodeKind::Mux);
  REQUIRE(mux.edges.size() == 3);
  CHECK(std::get<Rational>(mux.edges[0].ann) == Rational(1, 4));
  CHECK(flat.node(mux.edges[0].child).label == "a");
  CHECK(std::get<Rational>(mux.edges[1].ann) == Rational(1, 4));
  CHECK(flat.node(mux.edges[1].child).label == "b");
  CHECK(std::get<Rational>(mux.edges[2].ann) == Rational(1, 2));
  CHECK(flat.node(mux.edges[2].child).label == "c");
  CHECK(same_distribution(d, flat));
}

TEST_CASE("flatten_mux keeps already-flat documents intact") {
  PDocument d = t::doc(R"((prxml (events) (ordered false)
    (node "r" (mux (1/3 (node "a")) (1/3 (node "b"))))))");
  CHECK(structurally_equal(flatten_mux(d), d));
  CHECK(structurally_equal(flatten_mux(flatten_mux(d)), flatten_mux(d)));
}

TEST_CASE("flatten_mux multiplies through nested residuals") {
  PDocument d = t::doc(R"((prxml (events) (ordered false)
    (node "r" (mux (1/2 (mux (1/3 (node "a"))))))))");
  PDocument flat = flatten_mux(d);
  const PNode& mux = flat.node(1);
  REQUIRE(mux.edges.size() == 1);
  CHECK(std::get<Rational>(mux.edges[0].ann) == Rational(1, 6));
  CHECK(same_distribution(d, flat));
  CHECK(world_probability_bf(flat, t::world(R"((xml (ordered false) (node "r")))")) ==
        Rational(5, 6));
}

TEST_CASE("flatten_mux respects stored branch order") {
  PDocument d = t::doc(R"((prxml (events) (ordered true)
    (node "r" (mux (1/4 (node "a")) (1/4 (mux (1/2 (node "b")) (1/4 (node "c")))) (1/4 (node "d"))))))");
  PDocument flat = flatten_mux(d);
  const PNode& mux = flat.node(1);
  REQUIRE(mux.edges.size() == 4);
  std::vector<std::string> labels;
  for (const PEdge& e : mux.edges) labels.push_back(flat.node(e.child).label);
  CHECK(labels == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(std::get<Rational>(mux.edges[1].ann) == Rational(1, 8));
  CHECK(std::get<Rational>(mux.edges[2].ann) == Rational(1, 16));
}

TEST_CASE("flatten_mux rejects other classes") {
  PDocument d = t::doc(R"((prxml (events) (ordered false) (node "r" (ind (1/2 (node "a"))))))");
  CHECK_THROWS_AS(flatten_mux(d), UnsupportedClassError);
}

TEST_CASE("mux_to_mie invents one event per mux node") {
  SUBCASE("residual branch becomes a residual outcome") {
    PDocument d = t::doc(R"((prxml (events) (ordered false)
      (node "r" (mux (1/3 (node "b")) (1/3 (node "c"))))))");
    PDocument m = mux_to_mie(d);
    CHECK(classify(m).used == std::set<NodeKind>{NodeKind::Mie});
    REQUIRE(m.events.events.size() == 1);
    const Event& ev = m.events.events[0];
    CHECK(ev.id == "mux1");
    REQUIRE(ev.outcomes.size() == 3);
    CHECK(ev.outcomes[0] == std::pair<std::string, Rational>{"v1", Rational(1, 3)});
    CHECK(ev.outcomes[1] == std::pair<std::string, Rational>{"v2", Rational(1, 3)});
    CHECK(ev.outcomes[2] == std::pair<std::string, Rational>{"vnone", Rational(1, 3)});
    const PNode& mie = m.node(1);
    CHECK(mie.kind == NodeKind::Mie);
    CHECK(std::get<MieAtom>(mie.edges[0].ann) == MieAtom{"mux1", "v1"});
    CHECK(std::get<MieAtom>(mie.edges[1].ann) == MieAtom{"mux1", "v2"});
    CHECK(same_distribution(d, m));
  }
  SUBCASE("full mass means no residual outcome") {
    PDocument d = t::doc(R"((prxml (events) (ordered false)
      (node "r" (mux (1/2 (node "b")) (1/2 (node "c"))))))");
    PDocument m = mux_to_mie(d);
    CHECK(m.events.events[0].outcomes.size() == 2);
    CHECK(same_distribution(d, m));
  }
  SUBCASE("hierarchies are flattened on the way") {
    PDocument d = t::doc(R"((prxml (events) (ordered false)
      (node "r" (mux (1/2 (mux (1/2 (node "a"))))))))");
    PDocument m = mux_to_mie(d);
    CHECK(classify(m).used == std::set<NodeKind>{NodeKind::Mie});
    REQUIRE(m.events.events.size() == 1);
    CHECK(m.events.events[0].outcomes.size() == 2);  // 1/4 kept, 3/4 residual
    CHECK(same_distribution(d, m));
  }
  SUBCASE("mux-free documents pass through") {
    PDocument d = t::doc(R"((prxml (events) (ordered false) (node "r" (node "a"))))");
    CHECK(structurally_equal(mux_to_mie(d), d));
  }
  SUBCASE("a user event squatting on the namespace is refused") {
    PDocument d = t::doc(R"((prxml (events (mux1 bool 1/2)) (ordered false)
      (node "r" (mux (1/2 (node "a"))))))");
    CHECK_THROWS_AS(mux_to_mie(d), ValidationError);
  }
}

TEST_CASE("event_decision_tree reproduces the outcome distribution") {
  SUBCASE("single outcome, no events") {
    DecisionTree tr = event_decision_tree({{"a", Rational(1)}}, "e");
    CHECK(tr.height() == 0);
    CHECK(tr.path_to("a").empty());
  }
  SUBCASE("two outcomes, one split") {
    DecisionTree tr = event_decision_tree({{"a", Rational(1, 2)}, {"b", Rational(1, 2)}}, "e");
    CHECK(tr.height() == 1);
    REQUIRE(tr.path_to("a").size() == 1);
    CHECK(tr.path_to("a")[0] == EventLiteral{"e.b0", true});
    CHECK(tr.path_to("b")[0] == EventLiteral{"e.b0", false});
    CHECK(tr.nodes[tr.root].prob == Rational(1, 2));
  }
  SUBCASE("three outcomes, lopsided masses") {
    DecisionTree tr = event_decision_tree(
        {{"a", Rational(1, 2)}, {"b", Rational(1, 4)}, {"c", Rational(1, 4)}}, "e");
    CHECK(tr.height() == 2);
    CHECK(tr.path_to("a") == std::vector<EventLiteral>{{"e.b0", true}});
    CHECK(tr.path_to("b") == std::vector<EventLiteral>{{"e.b0", false}, {"e.b1", true}});
    CHECK(tr.path_to("c") == std::vector<EventLiteral>{{"e.b0", false}, {"e.b1", false}});
    CHECK(tr.nodes[tr.root].prob == Rational(1, 2));
  }
  SUBCASE("path products equal the inputs for awkward distributions") {
    std::vector<std::pair<std::string, Rational>> outcomes = {
        {"a", Rational(1, 7)}, {"b", Rational(2, 7)}, {"c", Rational(3, 7)},
        {"d", Rational(1, 14)}, {"e", Rational(1, 14)}};
    DecisionTree tr = event_decision_tree(outcomes, "q");
    for (const auto& [value, prob] : outcomes) {
      Rational product = Rational::one();
      int at = tr.root;
      for (const EventLiteral& lit : tr.path_to(value)) {
        const auto& n = tr.nodes[at];
        product *= lit.positive ? n.prob : Rational(1) - n.prob;
        at = lit.positive ? n.left : n.right;
      }
      CHECK(product == prob);
    }
    CHECK(tr.height() <= 3);  // ceil(log2 5)
  }
  SUBCASE("refuses non-distributions") {
    CHECK_THROWS_AS(event_decision_tree({}, "e"), InvalidDistributionError);
    CHECK_THROWS_AS(event_decision_tree({{"a", Rational(1, 2)}}, "e"), InvalidDistributionError);
    CHECK_THROWS_AS(event_decision_tree({{"a", Rational(1, 2)}, {"b", Rational(2, 3)}}, "e"),
                    InvalidDistributionError);
    CHECK_THROWS_AS(event_decision_tree({{"a", Rational(0)}, {"b", Rational(1)}}, "e"),
                    InvalidDistributionError);
  }
  SUBCASE("unknown outcome in path_to") {
    DecisionTree tr = event_decision_tree({{"a", Rational(1)}}, "e");
    CHECK_THROWS_AS(tr.path_to("zz"), PreconditionError);
  }
}

TEST_CASE("mie_to_cie expands atoms into conjunctions over fresh booleans") {
  SUBCASE("a boolean event stays one literal wide") {
    PDocument d = t::doc(R"((prxml (events (e enum (x 1/2) (y 1/2))) (ordered false)
      (node "r" (mie ((e x) (node "a")) ((e y) (node "b"))))))");
    PDocument c = mie_to_cie(d);
    CHECK(classify(c).used == std::set<NodeKind>{NodeKind::Cie});
    REQUIRE(c.events.events.size() == 1);
    CHECK(c.events.events[0].id == "e.b0");
    CHECK(c.events.events[0].is_boolean());
    auto conj0 = std::get<std::vector<EventLiteral>>(c.node(1).edges[0].ann);
    auto conj1 = std::get<std::vector<EventLiteral>>(c.node(1).edges[1].ann);
    CHECK(conj0 == std::vector<EventLiteral>{{"e.b0", true}});
    CHECK(conj1 == std::vector<EventLiteral>{{"e.b0", false}});
    CHECK(same_distribution(d, c));
  }
  SUBCASE("conjunctions partition the outcome space") {
    PDocument d = t::doc(R"((prxml (events (e enum (x 1/2) (y 1/4) (z 1/4))) (ordered false)
      (node "r" (mie ((e x) (node "a")) ((e y) (node "b")) ((e z) (node "c"))))))");
    PDocument c = mie_to_cie(d);
    REQUIRE(c.events.events.size() == 2);
    std::vector<std::vector<EventLiteral>> conjs;
    for (const PEdge& e : c.node(1).edges)
      conjs.push_back(std::get<std::vector<EventLiteral>>(e.ann));
    for (const auto& [v, p] : all_valuations(c.events)) {
      int fired = 0;
      for (const auto& conj : conjs) {
        bool all = true;
        for (const EventLiteral& lit : conj) all = all && (literal_true(lit, v));
        fired += all;
      }
      CHECK(fired == 1);
    }
    CHECK(same_distribution(d, c));
  }
  SUBCASE("independent events get disjoint boolean families") {
    PDocument d = t::doc(R"((prxml (events (e enum (x 1/2) (y 1/2)) (g enum (u 1/3) (v 1/3) (w 1/3)))
      (ordered false)
      (node "r" (mie ((e x) (node "a"))) (mie ((g w) (node "b"))))))");
    PDocument c = mie_to_cie(d);
    std::set<std::string> ids;
    for (const Event& ev : c.events.events) {
      CHECK(ev.is_boolean());
      ids.insert(ev.id);
    }
    CHECK(ids == std::set<std::string>{"e.b0", "g.b0", "g.b1"});
    CHECK(same_distribution(d, c));
  }
  SUBCASE("conjunction length is logarithmic in the outcome count") {
    std::string events = "(e enum";
    for (int i = 0; i < 9; ++i) events += " (v" + std::to_string(i) + " 1/9)";
    events += ")";
    std::string edges;
    for (int i = 0; i < 9; ++i)
      edges += " ((e v" + std::to_string(i) + ") (node \"a\"))";
    PDocument d = parse_prxml("(prxml (events " + events + ") (ordered false) (node \"r\" (mie" +
                              edges + ")))");
    PDocument c = mie_to_cie(d);
    int bound = static_cast<int>(std::ceil(std::log2(9)));
    for (const PEdge& e : c.node(1).edges)
      CHECK(std::get<std::vector<EventLiteral>>(e.ann).size() <=
            static_cast<std::size_t>(bound));
  }
  SUBCASE("rejects other classes") {
    PDocument d = t::doc(R"((prxml (events) (ordered false) (node "r" (mux (1/2 (node "a"))))))");
    CHECK_THROWS_AS(mie_to_cie(d), UnsupportedClassError);
  }
}

TEST_CASE("the full mux to cie pipeline preserves random distributions") {
  Rng rng(53);
  RandomDocSpec spec;
  spec.kinds = {NodeKind::Mux};
  spec.max_prob_nodes = 5;
  spec.max_configs = 1 << 10;
  for (int i = 0; i < 15; ++i) {
    PDocument d = random_pdocument(rng, spec);
    PDocument mie = mux_to_mie(d);
    PDocument cie = mie_to_cie(mie);
    CHECK(same_distribution(d, mie));
    CHECK(same_distribution(d, cie));
  }
}
