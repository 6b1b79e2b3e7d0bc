#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "gammaflow/graph.hpp"

namespace gammaflow {

inline constexpr const char* kGraphFormat = "gammaflow-graph-v1";

/// Canonical document: vertices in index order, each undirected edge once
/// with u <= v as strings, edges sorted by (u, v).
nlohmann::json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const nlohmann::json& doc);

std::string serialize_graph(const WeightedGraph& g);
WeightedGraph parse_graph(const std::string& text);

WeightedGraph read_graph_file(const std::filesystem::path& path);
void write_graph_file(const WeightedGraph& g, const std::filesystem::path& path);

/// Sparse {id: value} map of the nonzero entries, the wire form of functions.
nlohmann::json function_to_json(const WeightedGraph& g, const VertexFunction& f);
VertexFunction function_from_json(const WeightedGraph& g, const nlohmann::json& doc);

/// 17 significant digits, round-trip safe.
std::string format_double(double v);

}  // namespace gammaflow
