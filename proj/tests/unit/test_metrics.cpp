#include <cmath>

#include "doctest.h"
#include "gammaflow/gamma.hpp"
#include "gammaflow/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gammaflow;

TEST_SUITE("metrics") {
  TEST_CASE("default metric on a path") {
    const auto g = testutil::family("path:10");
    const auto m = default_intrinsic_metric(g, 0);
    CHECK(m.base == 0);
    CHECK(m.provenance == MetricProvenance::default_path_metric);
    for (Eigen::Index k = 0; k < 10; ++k) CHECK(m.dist[k] == doctest::Approx(k / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(default_intrinsic_metric(testutil::k2(), 0).dist[1] == 1.0);
  }

  TEST_CASE("metric invariants on the corpus") {
    for (const auto& g : oracle::family_corpus()) {
      double longest = 0.0;
      for (const auto& e : g.edges())
        if (e.u != e.v) longest = std::max(longest, default_edge_length(g, e.u, e.v));
      for (VertexIndex o = 0; o < g.size(); o += 3) {
        const auto m = default_intrinsic_metric(g, o);
        CHECK(m.dist[static_cast<Eigen::Index>(o)] == 0.0);
        for (const auto& e : g.edges()) {
          if (e.u == e.v) continue;
          const double gap = std::abs(m.dist[static_cast<Eigen::Index>(e.u)] - m.dist[static_cast<Eigen::Index>(e.v)]);
          CHECK(gap <= default_edge_length(g, e.u, e.v) * (1 + 1e-14));
        }
        const auto hops = hop_distances(g, o);
        for (VertexIndex x = 0; x < g.size(); ++x)
          CHECK(m.dist[static_cast<Eigen::Index>(x)] <= hops[x] * longest * (1 + 1e-14));
      }
    }
  }

  TEST_CASE("hop metric") {
    const auto g = testutil::family("tree:2:3");
    const auto h = hop_metric(g, 0);
    const auto hops = hop_distances(g, 0);
    CHECK(h.provenance == MetricProvenance::hop_metric);
    for (VertexIndex x = 0; x < g.size(); ++x) CHECK(h.dist[static_cast<Eigen::Index>(x)] == static_cast<double>(hops[x]));
  }

  TEST_CASE("intrinsic examples") {
    const auto path = testutil::family("path:10");
    const auto rep = verify_default_intrinsic(path);
    CHECK(rep.status == Status::pass);
    CHECK(std::abs(rep.worst_residual) <= 1e-14);
    CHECK(rep.parameters["slack"].get<double>() >= -1e-14);

    const auto k2 = testutil::k2();
    CHECK(verify_default_intrinsic(k2).status == Status::pass);

    const auto star = testutil::family("star:25");
    const auto hop = all_base_metrics(star, MetricProvenance::hop_metric);
    const auto bad = verify_intrinsic(star, hop);
    CHECK(bad.status == Status::fail);
    CHECK(bad.worst_residual == doctest::Approx(24.0));
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->vertex == VertexIndex{0});
  }

  TEST_CASE("default metric is intrinsic on every family") {
    for (const auto& g : oracle::family_corpus()) {
      const auto edgewise = verify_default_intrinsic(g);
      CHECK(edgewise.status == Status::pass);
      const auto full = all_base_metrics(g, MetricProvenance::default_path_metric, 2);
      const auto via_metrics = verify_intrinsic(g, full);
      CHECK(via_metrics.status == Status::pass);
      CHECK(via_metrics.worst_residual <= 1e-12);
    }
    for (const auto* text : {"star:25", "lattice:3:2", "hypercube:5", "tree:3:4", "complete:9"}) {
      CHECK(verify_default_intrinsic(testutil::family(text)).status == Status::pass);
    }
  }

  TEST_CASE("all base metrics are independent of the worker count") {
    const auto g = testutil::family("lattice:2:3");
    const auto a = all_base_metrics(g, MetricProvenance::default_path_metric, 1);
    const auto b = all_base_metrics(g, MetricProvenance::default_path_metric, 3);
    REQUIRE(a.size() == g.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].dist == b[i].dist);
  }

  TEST_CASE("metric balls") {
    const auto g = testutil::family("path:10");
    const auto m = default_intrinsic_metric(g, 0);
    CHECK(metric_ball(m, 0.0).vertices == std::vector<VertexIndex>{0});
    CHECK(metric_ball(m, 3.0 / std::sqrt(2.0)).vertices == std::vector<VertexIndex>{0, 1, 2, 3});
    CHECK(metric_ball(m, 100.0).vertices.size() == 10);
    const std::vector<VertexIndex> boundary{9};
    CHECK_FALSE(metric_ball(m, 3.0, boundary).touches_boundary);
    CHECK(metric_ball(m, 100.0, boundary).touches_boundary);
  }

  TEST_CASE("cutoff values") {
    const auto g = testutil::family("path:10");
    const auto m = default_intrinsic_metric(g, 0);
    const double r = 1.0 / std::sqrt(2.0), R = 5.0 / std::sqrt(2.0);
    const auto eta = cutoff(m, r, R);
    CHECK(eta[0] == 1.0);
    CHECK(eta[1] == 1.0);
    CHECK(eta[3] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eta[5] == 0.0);
    CHECK(eta[9] == 0.0);
    CHECK_ERROR_CODE(cutoff(m, 2.0, 2.0), ErrorCode::BadRadii);
    CHECK_ERROR_CODE(cutoff(m, 0.0, 2.0), ErrorCode::BadRadii);
    CHECK_ERROR_CODE(cutoff(m, 3.0, 1.0), ErrorCode::BadRadii);
  }

  TEST_CASE("cutoff gradient bound on every family") {
    for (const auto& g : oracle::family_corpus()) {
      const auto m = default_intrinsic_metric(g, 0);
      const double span = m.dist.maxCoeff();
      for (double r : {0.1, 0.5, 1.0}) {
        for (double width : {0.3, 1.0, 2.5}) {
          const double R = r * span + width;
          const auto eta = cutoff(m, r * span + 1e-3, R);
          const double w = R - (r * span + 1e-3);
          CHECK(gamma(g, eta).maxCoeff() <= (1 + 1e-12) / (2 * w * w));
        }
      }
    }
  }

  TEST_CASE("completeness certificate on path(200)") {
    const auto g = testutil::family("path:200");
    const auto cert = completeness_certificate(g, 100, 7);
    CHECK(cert.report.status == Status::pass);
    REQUIRE(cert.sequence.gamma_sups.size() == 7);
    for (int k = 1; k <= 7; ++k) CHECK(cert.sequence.gamma_sups[k - 1] <= 1.0 / (2.0 * k * k) * (1 + 1e-12));
    const auto& fs = cert.sequence.functions;
    for (std::size_t k = 1; k < fs.size(); ++k) CHECK((fs[k] - fs[k - 1]).minCoeff() >= 0.0);
    CHECK((fs[3] - fs[2]).minCoeff() >= 0.0);
  }

  TEST_CASE("certificate saturates on a small graph") {
    const auto cert = completeness_certificate(testutil::family("cycle:6"), 0, 6);
    CHECK(cert.report.status == Status::pass);
    const auto& last = cert.sequence.functions.back();
    CHECK(last.minCoeff() == 1.0);
    CHECK(cert.sequence.gamma_sups.back() == 0.0);
  }

  TEST_CASE("certificate turns inconclusive at a truncation boundary") {
    const auto spec = parse_family_spec("lattice:1:10");
    const auto g = generate_family(spec);
    std::vector<VertexIndex> boundary;
    for (const auto& id : truncation_boundary(spec)) boundary.push_back(g.index_of(id));
    const auto o = g.index_of(family_origin(spec));
    const auto cert = completeness_certificate(g, o, 10, boundary);
    CHECK(cert.report.status == Status::inconclusive);
    REQUIRE(cert.sequence.first_boundary_k.has_value());
    const int k = *cert.sequence.first_boundary_k;
    CHECK(completeness_certificate(g, o, k - 1, boundary).report.status == Status::pass);
  }

  TEST_CASE("metric JSON round trip") {
    const auto g = testutil::family("tree:2:2");
    const auto m = default_intrinsic_metric(g, 1);
    const auto doc = metric_to_json(g, m);
    const auto back = metric_from_json(g, doc);
    CHECK(back.base == m.base);
    CHECK(back.dist == m.dist);
    CHECK(back.provenance == MetricProvenance::user_supplied);
    auto missing = doc;
    missing["dist"].erase("0");
    CHECK_ERROR_CODE(metric_from_json(g, missing), ErrorCode::ParseError);
  }
}
