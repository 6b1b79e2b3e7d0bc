#include <filesystem>

#include "doctest.h"
#include "gammaflow/gamma.hpp"
#include "gammaflow/graph_io.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gammaflow;

namespace {

void check_same_graph(const WeightedGraph& a, const WeightedGraph& b) {
  REQUIRE(a.ids() == b.ids());
  CHECK(a.measure() == b.measure());
  REQUIRE(a.edges().size() == b.edges().size());
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    CHECK(a.edges()[i].u == b.edges()[i].u);
    CHECK(a.edges()[i].v == b.edges()[i].v);
    CHECK(a.edges()[i].mu == b.edges()[i].mu);
  }
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("round trip is bit-exact on the corpus") {
    for (const auto& g : oracle::family_corpus()) check_same_graph(g, parse_graph(serialize_graph(g)));
  }

  TEST_CASE("round trip keeps self-loops and awkward weights") {
    const auto g = build_graph({{"x", 0.1}, {"y", 1.0 / 3.0}},
                               {{"x", "y", 0.7000000000000001}, {"y", "y", 1e-300}});
    check_same_graph(g, parse_graph(serialize_graph(g)));
  }

  TEST_CASE("file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "gammaflow_io_test.json";
    const auto g = testutil::family("tree:2:3");
    write_graph_file(g, path);
    check_same_graph(g, read_graph_file(path));
    std::filesystem::remove(path);
    CHECK_ERROR_CODE(read_graph_file(path), ErrorCode::ParseError);
  }

  TEST_CASE("canonical layout") {
    const auto doc = graph_to_json(build_graph({{"b", 1.0}, {"a", 2.0}}, {{"b", "a", 1.0}}));
    CHECK(doc["format"] == kGraphFormat);
    CHECK(doc["vertices"][0]["id"] == "b");
    CHECK(doc["edges"].size() == 1);
    CHECK(doc["edges"][0]["u"] == "a");
    CHECK(doc["edges"][0]["v"] == "b");
  }

  TEST_CASE("malformed documents") {
    CHECK_ERROR_CODE(parse_graph("{"), ErrorCode::ParseError);
    CHECK_ERROR_CODE(parse_graph("[]"), ErrorCode::ParseError);
    CHECK_ERROR_CODE(parse_graph(R"({"format": "other", "vertices": []})"), ErrorCode::ParseError);
    CHECK_ERROR_CODE(parse_graph(R"({"format": "gammaflow-graph-v1"})"), ErrorCode::ParseError);
    CHECK_ERROR_CODE(parse_graph(R"({"format": "gammaflow-graph-v1", "vertices": [{"id": "a"}]})"),
                     ErrorCode::ParseError);
    CHECK_ERROR_CODE(parse_graph(R"({"format": "gammaflow-graph-v1",
                                     "vertices": [{"id": "a", "m": 1}, {"id": "b", "m": 1}], "edges": []})"),
                     ErrorCode::Disconnected);
  }

  TEST_CASE("function maps") {
    const auto g = testutil::p3();
    VertexFunction f = VertexFunction::Zero(3);
    f[2] = -0.25;
    const auto doc = function_to_json(g, f);
    CHECK(doc.size() == 1);
    CHECK(doc["c"] == -0.25);
    CHECK(function_from_json(g, doc) == f);
    CHECK_ERROR_CODE(function_from_json(g, nlohmann::json{{"q", 1.0}}), ErrorCode::UnknownVertex);
    CHECK_ERROR_CODE(function_from_json(g, nlohmann::json{{"a", "x"}}), ErrorCode::ParseError);
  }

  TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 2.0, 1e-300, -123456.789, 0.43233235838169365}) {
      CHECK(std::stod(format_double(v)) == v);
    }
  }
}
