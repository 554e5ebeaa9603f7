#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "prxml/algorithms.hpp"
#include "prxml/errors.hpp"
#include "prxml/gen.hpp"
#include "prxml/oracle.hpp"
#include "prxml/selftest.hpp"

using namespace prxml;

TEST_CASE("parse_dimacs reads the usual dialect") {
  CnfFormula f = parse_dimacs("c tiny\np cnf 2 2\n1 2 0\n-1 -2 0\n");
  CHECK(f.variables == 2);
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == std::vector<int>{1, 2});
  CHECK(f.clauses[1] == std::vector<int>{-1, -2});

  CnfFormula g = parse_dimacs("p cnf 3 1\n3 -1\n2 0\n%\n0\n");  // clauses may wrap lines
  REQUIRE(g.clauses.size() == 1);
  CHECK(g.clauses[0] == std::vector<int>{3, -1, 2});

  // the header's clause count is advisory, as in the wild
  CHECK(parse_dimacs("p cnf 2 2\n1 0\n").clauses.size() == 1);

  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), PreconditionError);  // var out of range
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), PreconditionError);           // missing header
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n0\n"), PreconditionError);    // empty clause
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), PreconditionError);
}

TEST_CASE("parse_set_lines derives the universe in first-seen order") {
  ExactCoverInstance inst = parse_set_lines("# cover\n a b \nb c\nc\n");
  CHECK(inst.universe == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(inst.sets.size() == 3);
  CHECK(inst.sets[0] == std::vector<std::string>{"a", "b"});
  CHECK(inst.sets[2] == std::vector<std::string>{"c"});

  CHECK_THROWS_AS(parse_set_lines(""), PreconditionError);       // no sets
  CHECK_THROWS_AS(parse_set_lines("a a\n"), PreconditionError);  // duplicate inside a set
  CHECK_THROWS_AS(parse_set_lines("\n\n"), PreconditionError);
}

TEST_CASE("parse_edge_list reads 1-based pairs") {
  BipartiteGraph g = parse_edge_list("2\n1 1\n1 2\n2 2\n");
  CHECK(g.left_size == 2);
  CHECK(g.right_size == 2);
  REQUIRE(g.edges.size() == 3);
  CHECK(g.edges[0] == std::pair<int, int>{0, 0});
  CHECK(g.edges[2] == std::pair<int, int>{1, 1});

  CHECK_THROWS_AS(parse_edge_list("2\n1 3\n"), PreconditionError);       // index out of range
  CHECK_THROWS_AS(parse_edge_list("2\n1 1\n1 1\n"), PreconditionError);  // duplicate edge
  CHECK_THROWS_AS(parse_edge_list("0\n"), PreconditionError);
  CHECK_THROWS_AS(parse_edge_list("2\n1\n"), PreconditionError);
}

TEST_CASE("gen_sat_cie ties possibility to satisfiability") {
  SUBCASE("unsatisfiable") {
    CnfFormula f{1, {{1}, {-1}}};
    auto [d, w] = gen_sat_cie(f);
    CHECK(w.size() == 1);
    CHECK(height(d) == 3);
    CHECK(world_probability_bf(d, w).is_zero());
  }
  SUBCASE("satisfiable") {
    CnfFormula f{2, {{1, 2}}};
    auto [d, w] = gen_sat_cie(f);
    CHECK(world_probability_bf(d, w) == Rational(3, 4));  // 3 models over 4 valuations
    CHECK(sat_model_count(f) == 3);
  }
  SUBCASE("edge conjunctions negate the clause literals") {
    CnfFormula f{2, {{1, -2}}};
    auto [d, w] = gen_sat_cie(f);
    REQUIRE(d.node(1).kind == NodeKind::Cie);
    auto conj = std::get<std::vector<EventLiteral>>(d.node(1).edges[0].ann);
    CHECK(conj == std::vector<EventLiteral>{{"x1", false}, {"x2", true}});
  }
  SUBCASE("model counting through the scaled probability") {
    // clause 3 forces y false, clauses 1 and 2 then clash on x: no models
    CnfFormula f{2, {{1, 2}, {-1, 2}, {-2}}};
    auto [d, w] = gen_sat_cie(f);
    CHECK(sat_model_count(f) == 0);
    CHECK(world_probability_bf(d, w).is_zero());

    // flipping clause 2 leaves exactly one model (x=t, y=f)
    CnfFormula g{2, {{1, 2}, {-1, -2}, {-2}}};
    auto [d2, w2] = gen_sat_cie(g);
    CHECK(sat_model_count(g) == 1);
    CHECK(world_probability_bf(d2, w2) * Rational(4) == Rational(1));
  }
}

TEST_CASE("gen_sat_muxind builds the mux over ind phases") {
  SUBCASE("unsatisfiable") {
    CnfFormula f{1, {{1}, {-1}}};
    auto [d, w] = gen_sat_muxind(f);
    CHECK(world_probability_bf(d, w).is_zero());
  }
  SUBCASE("satisfiable") {
    CnfFormula f{2, {{1, 2}, {-1, -2}}};
    auto [d, w] = gen_sat_muxind(f);
    CHECK(!world_probability_bf(d, w).is_zero());
  }
  SUBCASE("shape") {
    CnfFormula f{2, {{1, -2}, {2}}};
    auto [d, w] = gen_sat_muxind(f);
    CHECK(height(d) == 4);
    ClassProfile p = classify(d);
    CHECK(p.used == std::set<NodeKind>{NodeKind::Mux, NodeKind::Ind});
    CHECK(!p.no_ind_under_mux);  // the hard shape
    // W lists one leaf per clause
    CHECK(w.size() == 3);
    CHECK(w.node(1).label == "l1");
    CHECK(w.node(2).label == "l2");
  }
}

TEST_CASE("exact-cover gadgets answer like the subset search") {
  ExactCoverInstance yes{{"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c"}}};
  ExactCoverInstance no{{"a", "b"}, {{"a"}, {"a"}}};
  ExactCoverInstance via_one{{"a", "b"}, {{"a", "b"}, {"b"}}};
  ExactCoverInstance twins{{"a", "b"}, {{"a", "b"}, {"a", "b"}}};
  CHECK(exact_cover_exists(yes));
  CHECK(!exact_cover_exists(no));
  CHECK(exact_cover_exists(via_one));
  CHECK(exact_cover_exists(twins));

  for (auto gadget : {&gen_xc_inddet, &gen_xc_muxdet}) {
    auto [d1, w1] = gadget(yes);
    CHECK(!world_probability_bf(d1, w1).is_zero());
    auto [d2, w2] = gadget(no);
    CHECK(world_probability_bf(d2, w2).is_zero());
    auto [d3, w3] = gadget(via_one);
    CHECK(!world_probability_bf(d3, w3).is_zero());
    auto [d4, w4] = gadget(twins);
    CHECK(!world_probability_bf(d4, w4).is_zero());
    CHECK(height(d1) == 4);
  }

  ExactCoverInstance single{{"a"}, {{"a"}}};
  auto [di, wi] = gen_xc_inddet(single);
  CHECK(world_probability_bf(di, wi) == Rational(1, 2));
  CHECK(classify(di).used == std::set<NodeKind>{NodeKind::Ind, NodeKind::Det});
  auto [dm, wm] = gen_xc_muxdet(single);
  CHECK(world_probability_bf(dm, wm) == Rational(1, 2));
  CHECK(classify(dm).used == std::set<NodeKind>{NodeKind::Mux, NodeKind::Det});
}

TEST_CASE("gen_xc_mie works ordered and unordered") {
  ExactCoverInstance inst{{"a", "b", "c"}, {{"a", "b"}, {"c"}}};
  SUBCASE("unique cover uses both events") {
    auto [d, w] = gen_xc_mie(inst);
    CHECK(height(d) == 3);
    CHECK(classify(d).used == std::set<NodeKind>{NodeKind::Mie});
    CHECK(world_probability_bf(d, w) == Rational(1, 4));
  }
  SUBCASE("ordered variant agrees") {
    auto [d, w] = gen_xc_mie(inst, true);
    CHECK(d.ordered);
    CHECK(w.ordered);
    CHECK(world_probability_bf(d, w) == Rational(1, 4));
  }
  SUBCASE("overlapping singletons leave one choice") {
    ExactCoverInstance twice{{"a"}, {{"a"}, {"a"}}};
    auto [d, w] = gen_xc_mie(twice);
    CHECK(world_probability_bf(d, w) == Rational(1, 2));
  }
  SUBCASE("uncoverable instances are impossible") {
    ExactCoverInstance gap{{"a", "b"}, {{"a"}}};
    auto [d, w] = gen_xc_mie(gap);
    CHECK(world_probability_bf(d, w).is_zero());
  }
}

TEST_CASE("perfect-matching gadgets count matchings") {
  BipartiteGraph k22{2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  SUBCASE("complete graph on two vertices per side") {
    auto [d, w] = gen_pm_ind(k22);
    CHECK(world_probability_bf(d, w) == Rational(1, 8));  // 2 matchings / 2^4
    CHECK(count_perfect_matchings(k22) == 2);
    CHECK(height(d) == 4);
    auto [dm, wm] = gen_pm_mux(k22);
    CHECK(world_probability_bf(dm, wm) == Rational(1, 8));
  }
  SUBCASE("k33 has six matchings") {
    BipartiteGraph k33{3, 3, {}};
    for (int u = 0; u < 3; ++u)
      for (int v = 0; v < 3; ++v) k33.edges.push_back({u, v});
    CHECK(count_perfect_matchings(k33) == 6);
    auto [d, w] = gen_pm_ind(k33);
    Rational p = world_probability_bf(d, w);
    CHECK(p * Rational(1 << 9) == Rational(6));
  }
  SUBCASE("an isolated vertex kills every matching") {
    BipartiteGraph g{2, 2, {{0, 0}, {0, 1}}};
    CHECK(count_perfect_matchings(g) == 0);
    auto [d, w] = gen_pm_ind(g);
    CHECK(world_probability_bf(d, w).is_zero());
  }
  SUBCASE("identity scales to random graphs") {
    Rng rng(61);
    for (int i = 0; i < 6; ++i) {
      BipartiteGraph g = random_bipartite(rng, 3);
      auto [d, w] = gen_pm_ind(g);
      CHECK(world_probability_bf(d, w) * Rational(1L << g.edges.size()) ==
            Rational(static_cast<long>(count_perfect_matchings(g))));
      auto [dm, wm] = gen_pm_mux(g);
      CHECK(world_probability_bf(dm, wm) * Rational(1L << g.edges.size()) ==
            Rational(static_cast<long>(count_perfect_matchings(g))));
    }
  }
}

TEST_CASE("brute-force reference solvers answer tiny instances") {
  CHECK(sat_model_count(CnfFormula{2, {{1, 2}}}) == 3);
  CHECK(sat_model_count(CnfFormula{1, {{1}, {-1}}}) == 0);
  CHECK(sat_model_count(CnfFormula{3, {{1}}}) == 4);

  CHECK(exact_cover_exists(ExactCoverInstance{{"a", "b"}, {{"a"}, {"b"}}}));
  CHECK(exact_cover_exists(ExactCoverInstance{{"a", "b"}, {{"a", "b"}, {"b"}, {"a", "b"}}}));
  CHECK(!exact_cover_exists(ExactCoverInstance{{"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}}));

  BipartiteGraph path{2, 2, {{0, 0}, {1, 0}, {1, 1}}};
  CHECK(count_perfect_matchings(path) == 1);
}
