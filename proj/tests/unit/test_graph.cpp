#include <cmath>

#include "doctest.h"
#include "gammaflow/families.hpp"
#include "gammaflow/gamma.hpp"
#include "gammaflow/graph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gammaflow;
using testutil::family;

TEST_SUITE("graph") {
  TEST_CASE("two vertices and one edge give K2") {
    const auto g = testutil::k2();
    CHECK(g.size() == 2);
    CHECK(g.edges().size() == 1);
    CHECK(g.neighbors(0).size() == 1);
    CHECK(g.neighbors(1)[0].index == 0);
    CHECK(g.edges()[0].mu == 1.0);
  }

  TEST_CASE("conflicting directions are rejected") {
    CHECK_ERROR_CODE(build_graph({{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 1.0}, {"b", "a", 2.0}}),
                     ErrorCode::AsymmetricInput);
  }

  TEST_CASE("matching directions are merged") {
    const auto g = build_graph({{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 1.5}, {"b", "a", 1.5}});
    CHECK(g.edges().size() == 1);
    CHECK(g.total_weight(0) == 1.5);
  }

  TEST_CASE("isolated vertex means disconnected") {
    CHECK_ERROR_CODE(build_graph({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}}, {{"a", "b", 1.0}}), ErrorCode::Disconnected);
  }

  TEST_CASE("validation errors") {
    CHECK_ERROR_CODE(build_graph(std::vector<VertexInput>{}, {}), ErrorCode::EmptyInput);
    CHECK_ERROR_CODE(build_graph({{"a", 0.0}, {"b", 1.0}}, {{"a", "b", 1.0}}), ErrorCode::NonPositiveWeight);
    CHECK_ERROR_CODE(build_graph({{"a", 1.0}, {"b", 1.0}}, {{"a", "b", -1.0}}), ErrorCode::NonPositiveWeight);
    CHECK_ERROR_CODE(build_graph({{"a", 1.0}, {"a", 1.0}}, {{"a", "a", 1.0}}), ErrorCode::DuplicateVertex);
    CHECK_ERROR_CODE(build_graph({{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 1.0}, {"a", "b", 2.0}}),
                     ErrorCode::DuplicateEdge);
    CHECK_ERROR_CODE(build_graph({{"a", 1.0}, {"b", 1.0}}, {{"a", "z", 1.0}}), ErrorCode::UnknownVertex);
    CHECK_ERROR_CODE(testutil::k2().index_of("zz"), ErrorCode::UnknownVertex);
  }

  TEST_CASE("families: small members") {
    const auto p = family("path:3");
    CHECK(p.size() == 3);
    CHECK(p.edges().size() == 2);
    for (VertexIndex x = 0; x < 3; ++x) CHECK(p.m(x) == 1.0);

    const auto k4 = generate_family(FamilySpec::complete(4, Flavor::normalized));
    CHECK(k4.edges().size() == 6);
    for (VertexIndex x = 0; x < 4; ++x) CHECK(k4.m(x) == 3.0);

    const auto bd = generate_family(
        FamilySpec::birth_death(3, SequenceExpr::parse("1"), SequenceExpr::parse("(k+1)^3")));
    REQUIRE(bd.size() == 4);
    CHECK(bd.edges()[0].mu == 1.0);
    CHECK(bd.edges()[1].mu == 8.0);
    CHECK(bd.edges()[2].mu == 27.0);
    CHECK(bd.m(2) == 1.0);

    CHECK(family("hypercube:3").size() == 8);
    CHECK(family("cycle:12").edges().size() == 12);
    CHECK(family("lattice:2:2").size() == 25);
    CHECK(family("tree:2:3").size() == 15);
    CHECK(family("star:25").size() == 26);
  }

  TEST_CASE("families: invalid specs") {
    CHECK_ERROR_CODE(generate_family(FamilySpec::hypercube(0)), ErrorCode::InvalidSpec);
    CHECK_ERROR_CODE(parse_family_spec("nonsense:3"), ErrorCode::InvalidSpec);
    CHECK_ERROR_CODE(parse_family_spec("path:x"), ErrorCode::InvalidSpec);
    CHECK_ERROR_CODE(parse_family_spec("lattice:2"), ErrorCode::InvalidSpec);
  }

  TEST_CASE("families are deterministic") {
    for (const auto* text : {"path:7", "tree:3:3", "lattice:2:3", "hypercube:4"}) {
      const auto a = family(text), b = family(text);
      CHECK(a.ids() == b.ids());
      REQUIRE(a.edges().size() == b.edges().size());
      for (std::size_t i = 0; i < a.edges().size(); ++i) CHECK(a.edges()[i].mu == b.edges()[i].mu);
    }
    RandomGraphOptions o;
    const auto r1 = random_connected_graph(o, 42), r2 = random_connected_graph(o, 42);
    CHECK(r1.measure() == r2.measure());
  }

  TEST_CASE("random graphs respect their weight range") {
    RandomGraphOptions o;
    o.vertices = 12;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto g = random_connected_graph(o, seed);
      CHECK(g.size() == 12);
      for (const auto& e : g.edges()) {
        CHECK(e.mu >= 0.1);
        CHECK(e.mu <= 10.0);
      }
      CHECK(g.measure().minCoeff() >= 0.1);
      CHECK(g.measure().maxCoeff() <= 10.0);
    }
  }

  TEST_CASE("weighted degree") {
    const auto p = family("path:5");
    CHECK(weighted_degree(p, "2") == 2.0);
    CHECK(weighted_degree(p, "0") == 1.0);
    CHECK(weighted_degree(testutil::k2(), "a") == 1.0);
    const auto n = generate_family(FamilySpec::tree(2, 3, Flavor::normalized));
    for (VertexIndex x = 0; x < n.size(); ++x) CHECK(weighted_degree(n, x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_ERROR_CODE(weighted_degree(p, "nope"), ErrorCode::UnknownVertex);
  }

  TEST_CASE("self-loops count in the degree but not in differences") {
    const auto g = build_graph({{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 1.0}, {"a", "a", 3.0}});
    CHECK(g.has_self_loop(0));
    CHECK(weighted_degree(g, "a") == 4.0);
    CHECK(g.off_diagonal_weight(0) == 1.0);
    const auto f = delta(g, "b");
    CHECK(laplacian(g, f)[0] == 1.0);
    CHECK(gamma(g, f)[0] == 0.5);
  }

  TEST_CASE("combinatorial balls") {
    const auto p3 = testutil::p3();
    CHECK(combinatorial_ball(p3, 1, 0) == std::vector<VertexIndex>{1});
    CHECK(combinatorial_ball(p3, 1, 1) == std::vector<VertexIndex>{0, 1, 2});
    CHECK(combinatorial_ball(family("path:5"), 0, 2).size() == 3);
    for (const auto& g : oracle::family_corpus()) {
      for (std::size_t r = 0; r < 5; ++r) {
        const auto small = combinatorial_ball(g, 0, r), big = combinatorial_ball(g, 0, r + 1);
        CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
      }
    }
  }

  TEST_CASE("non-degeneracy") {
    const auto nd = is_non_degenerate(family("path:4"));
    CHECK(nd.non_degenerate);
    CHECK(nd.delta == 1.0);
    const auto g = build_graph({{"a", 0.5}, {"b", 2.0}, {"c", 3.0}}, {{"a", "b", 1.0}, {"b", "c", 1.0}});
    CHECK(is_non_degenerate(g).delta == 0.5);
    const auto star = generate_family(FamilySpec::star(10, Flavor::normalized));
    CHECK(weighted_degree(star, "0") == 1.0);
    CHECK(is_non_degenerate(star).delta == 1.0);
  }

  TEST_CASE("handshake identity on every corpus graph") {
    for (const auto& g : oracle::family_corpus()) {
      double lhs = 0.0, rhs = 0.0;
      for (VertexIndex x = 0; x < g.size(); ++x) lhs += weighted_degree(g, x) * g.m(x);
      for (const auto& e : g.edges()) rhs += (e.u == e.v ? 1.0 : 2.0) * e.mu;
      CHECK(testutil::rel_diff(lhs, rhs) < 1e-13);
    }
  }
}
