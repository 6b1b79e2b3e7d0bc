#include "gammaflow/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "gammaflow/error.hpp"

namespace gammaflow {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

json graph_to_json(const WeightedGraph& g) {
  json vertices = json::array();
  for (VertexIndex x = 0; x < g.size(); ++x) vertices.push_back({{"id", g.id(x)}, {"m", g.m(x)}});

  std::vector<std::tuple<std::string, std::string, double>> rows;
  rows.reserve(g.edges().size());
  for (const auto& e : g.edges()) {
    std::string a = g.id(e.u), b = g.id(e.v);
    if (b < a) std::swap(a, b);
    rows.emplace_back(std::move(a), std::move(b), e.mu);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) {
    return std::tie(std::get<0>(l), std::get<1>(l)) < std::tie(std::get<0>(r), std::get<1>(r));
  });
  json edges = json::array();
  for (const auto& [u, v, mu] : rows) edges.push_back({{"u", u}, {"v", v}, {"mu", mu}});

  return {{"format", kGraphFormat}, {"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

WeightedGraph graph_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "graph document must be a JSON object");
    const auto fmt = doc.value("format", std::string{});
    if (fmt != kGraphFormat)
      throw Error(ErrorCode::ParseError, "unsupported format '" + fmt + "', expected '" + kGraphFormat + "'");
    if (!doc.contains("vertices") || !doc.at("vertices").is_array())
      throw Error(ErrorCode::ParseError, "missing 'vertices' array");
    std::vector<VertexInput> vertices;
    for (const auto& v : doc.at("vertices")) vertices.push_back({v.at("id").get<std::string>(), v.at("m").get<double>()});
    std::vector<EdgeInput> edges;
    if (doc.contains("edges")) {
      if (!doc.at("edges").is_array()) throw Error(ErrorCode::ParseError, "'edges' must be an array");
      for (const auto& e : doc.at("edges"))
        edges.push_back({e.at("u").get<std::string>(), e.at("v").get<std::string>(), e.at("mu").get<double>()});
    }
    return build_graph(vertices, edges);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string serialize_graph(const WeightedGraph& g) { return graph_to_json(g).dump(2) + "\n"; }

WeightedGraph parse_graph(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return graph_from_json(doc);
}

WeightedGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

void write_graph_file(const WeightedGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  out << serialize_graph(g);
}

json function_to_json(const WeightedGraph& g, const VertexFunction& f) {
  json out = json::object();
  for (VertexIndex x = 0; x < g.size(); ++x) {
    const double v = f[static_cast<Eigen::Index>(x)];
    if (v != 0.0) out[g.id(x)] = v;
  }
  return out;
}

VertexFunction function_from_json(const WeightedGraph& g, const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "function must be a {vertex: value} object");
  VertexFunction f = VertexFunction::Zero(static_cast<Eigen::Index>(g.size()));
  for (const auto& [id, value] : doc.items()) {
    if (!value.is_number()) throw Error(ErrorCode::ParseError, "value for '" + id + "' is not a number");
    f[static_cast<Eigen::Index>(g.index_of(id))] = value.get<double>();
  }
  return f;
}

}  // namespace gammaflow
