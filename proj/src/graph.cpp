#include "gammaflow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <sstream>
#include <utility>

#include "gammaflow/error.hpp"

namespace gammaflow {

namespace {

bool positive_finite(double w) { return std::isfinite(w) && w > 0.0; }

std::string fmt_weight(double w) {
  std::ostringstream os;
  os.precision(17);
  os << w;
  return os.str();
}

}  // namespace

VertexIndex WeightedGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownVertex, "vertex '" + id + "'");
  return it->second;
}

std::optional<VertexIndex> WeightedGraph::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool WeightedGraph::has_self_loop(VertexIndex x) const {
  const auto& nb = adjacency_.at(x);
  return std::any_of(nb.begin(), nb.end(), [x](const Neighbor& n) { return n.index == x; });
}

WeightedGraph build_graph(std::vector<std::string> ids, std::vector<double> measure,
                          std::vector<IndexedEdge> edges) {
  const std::size_t n = ids.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "graph has no vertices");
  if (measure.size() != n) throw Error(ErrorCode::InvalidArgument, "measure size does not match vertex count");

  WeightedGraph g;
  g.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.index_.emplace(ids[i], i).second)
      throw Error(ErrorCode::DuplicateVertex, "vertex '" + ids[i] + "' listed twice");
    if (!positive_finite(measure[i]))
      throw Error(ErrorCode::NonPositiveWeight, "m('" + ids[i] + "') = " + fmt_weight(measure[i]));
  }

  // Directed record of what the caller said, to tell a repeated edge from a
  // reversed one when weights disagree.
  std::unordered_map<std::uint64_t, double> given;
  std::unordered_map<std::uint64_t, double> undirected;
  given.reserve(edges.size());
  auto key = [n](VertexIndex a, VertexIndex b) { return static_cast<std::uint64_t>(a) * n + b; };
  std::vector<Edge> unique;
  unique.reserve(edges.size());

  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw Error(ErrorCode::UnknownVertex, "edge endpoint index out of range");
    const std::string label = "('" + ids[e.u] + "', '" + ids[e.v] + "')";
    if (!positive_finite(e.mu)) throw Error(ErrorCode::NonPositiveWeight, "mu" + label + " = " + fmt_weight(e.mu));

    auto [it, fresh] = given.emplace(key(e.u, e.v), e.mu);
    if (!fresh && it->second != e.mu)
      throw Error(ErrorCode::DuplicateEdge, "edge " + label + " given with weights " + fmt_weight(it->second) +
                                                " and " + fmt_weight(e.mu));
    if (e.u != e.v) {
      auto rev = given.find(key(e.v, e.u));
      if (rev != given.end() && rev->second != e.mu)
        throw Error(ErrorCode::AsymmetricInput, "mu" + label + " = " + fmt_weight(e.mu) + " but reverse is " +
                                                    fmt_weight(rev->second));
    }
    const VertexIndex lo = std::min(e.u, e.v), hi = std::max(e.u, e.v);
    if (undirected.emplace(key(lo, hi), e.mu).second) unique.push_back({lo, hi, e.mu});
  }

  std::sort(unique.begin(), unique.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });

  g.adjacency_.assign(n, {});
  g.total_weight_.assign(n, 0.0);
  g.off_diagonal_weight_.assign(n, 0.0);
  for (const auto& e : unique) {
    g.adjacency_[e.u].push_back({e.v, e.mu});
    g.total_weight_[e.u] += e.mu;
    if (e.u != e.v) {
      g.adjacency_[e.v].push_back({e.u, e.mu});
      g.total_weight_[e.v] += e.mu;
      g.off_diagonal_weight_[e.u] += e.mu;
      g.off_diagonal_weight_[e.v] += e.mu;
    }
  }
  for (auto& nb : g.adjacency_)
    std::sort(nb.begin(), nb.end(), [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });

  // Connectivity.
  std::vector<char> seen(n, 0);
  std::queue<VertexIndex> queue;
  queue.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const VertexIndex x = queue.front();
    queue.pop();
    for (const auto& nb : g.adjacency_[x]) {
      if (!seen[nb.index]) {
        seen[nb.index] = 1;
        ++reached;
        queue.push(nb.index);
      }
    }
  }
  if (reached != n) {
    const auto missing = static_cast<std::size_t>(std::find(seen.begin(), seen.end(), 0) - seen.begin());
    throw Error(ErrorCode::Disconnected, "vertex '" + ids[missing] + "' is not reachable from '" + ids[0] + "'");
  }

  g.ids_ = std::move(ids);
  g.measure_ = Eigen::Map<const Eigen::VectorXd>(measure.data(), static_cast<Eigen::Index>(n));
  g.edges_ = std::move(unique);
  return g;
}

WeightedGraph build_graph(const std::vector<VertexInput>& vertices, const std::vector<EdgeInput>& edges) {
  std::vector<std::string> ids;
  std::vector<double> measure;
  ids.reserve(vertices.size());
  measure.reserve(vertices.size());
  std::unordered_map<std::string, VertexIndex> index;
  for (const auto& v : vertices) {
    index.emplace(v.id, ids.size());
    ids.push_back(v.id);
    measure.push_back(v.m);
  }
  std::vector<IndexedEdge> indexed;
  indexed.reserve(edges.size());
  for (const auto& e : edges) {
    auto iu = index.find(e.u), iv = index.find(e.v);
    if (iu == index.end()) throw Error(ErrorCode::UnknownVertex, "edge endpoint '" + e.u + "'");
    if (iv == index.end()) throw Error(ErrorCode::UnknownVertex, "edge endpoint '" + e.v + "'");
    indexed.push_back({iu->second, iv->second, e.mu});
  }
  return build_graph(std::move(ids), std::move(measure), std::move(indexed));
}

WeightedGraph build_graph(const std::vector<std::string>& vertices,
                          const std::unordered_map<std::string, double>& measure,
                          const std::vector<EdgeInput>& edges) {
  std::vector<VertexInput> input;
  input.reserve(vertices.size());
  for (const auto& id : vertices) {
    auto it = measure.find(id);
    if (it == measure.end()) throw Error(ErrorCode::InvalidArgument, "no measure given for vertex '" + id + "'");
    input.push_back({id, it->second});
  }
  return build_graph(input, edges);
}

double weighted_degree(const WeightedGraph& g, VertexIndex x) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  return g.total_weight(x) / g.m(x);
}

double weighted_degree(const WeightedGraph& g, const std::string& x) { return weighted_degree(g, g.index_of(x)); }

std::vector<std::size_t> hop_distances(const WeightedGraph& g, VertexIndex x) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.size(), kUnset);
  std::queue<VertexIndex> queue;
  dist[x] = 0;
  queue.push(x);
  while (!queue.empty()) {
    const VertexIndex u = queue.front();
    queue.pop();
    for (const auto& nb : g.neighbors(u)) {
      if (dist[nb.index] == kUnset) {
        dist[nb.index] = dist[u] + 1;
        queue.push(nb.index);
      }
    }
  }
  return dist;
}

std::vector<VertexIndex> combinatorial_ball(const WeightedGraph& g, VertexIndex x, std::size_t r) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  // Bounded BFS so that small balls in large hosts stay cheap.
  std::unordered_map<VertexIndex, std::size_t> depth{{x, 0}};
  std::vector<VertexIndex> frontier{x}, ball{x};
  for (std::size_t level = 0; level < r && !frontier.empty(); ++level) {
    std::vector<VertexIndex> next;
    for (VertexIndex u : frontier) {
      for (const auto& nb : g.neighbors(u)) {
        if (depth.emplace(nb.index, level + 1).second) {
          next.push_back(nb.index);
          ball.push_back(nb.index);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(ball.begin(), ball.end());
  return ball;
}

NonDegeneracy is_non_degenerate(const WeightedGraph& g) {
  const double delta = g.measure().minCoeff();
  return {delta > 0.0, delta};
}

}  // namespace gammaflow
