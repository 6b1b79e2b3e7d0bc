#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace gammaflow {

using VertexIndex = std::size_t;

// Functions on the vertex set, indexed by VertexIndex.  On a finite host
// every function is finitely supported, so a dense vector is exact.
using VertexFunction = Eigen::VectorXd;

struct Neighbor {
  VertexIndex index;
  double mu;
};

struct Edge {
  VertexIndex u;  // u <= v
  VertexIndex v;
  double mu;
};

struct VertexInput {
  std::string id;
  double m;
};

struct EdgeInput {
  std::string u;
  std::string v;
  double mu;
};

struct IndexedEdge {
  VertexIndex u;
  VertexIndex v;
  double mu;
};

/// Immutable weighted graph G = (V, E, m, mu).
///
/// Vertex ids are opaque strings mapped to dense indices in input order.
/// Adjacency is symmetric; a self-loop (x, x) is stored once in the
/// neighbor list of x.  Every stored weight is strictly positive and the
/// graph is connected.
class WeightedGraph {
 public:
  std::size_t size() const noexcept { return ids_.size(); }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(VertexIndex x) const { return ids_.at(x); }

  /// Throws Error(UnknownVertex) when absent.
  VertexIndex index_of(const std::string& id) const;
  std::optional<VertexIndex> find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id).has_value(); }

  const Eigen::VectorXd& measure() const noexcept { return measure_; }
  double m(VertexIndex x) const { return measure_[static_cast<Eigen::Index>(x)]; }

  std::span<const Neighbor> neighbors(VertexIndex x) const { return adjacency_.at(x); }

  /// Undirected edges, each once, ordered by (u, v) index.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// sum_y mu_xy, the self-loop included.
  double total_weight(VertexIndex x) const { return total_weight_.at(x); }

  /// sum_{y != x} mu_xy; the part of the weight seen by difference operators.
  double off_diagonal_weight(VertexIndex x) const { return off_diagonal_weight_.at(x); }

  bool has_self_loop(VertexIndex x) const;

 private:
  friend WeightedGraph build_graph(std::vector<std::string>, std::vector<double>,
                                   std::vector<IndexedEdge>);

  std::vector<std::string> ids_;
  std::unordered_map<std::string, VertexIndex> index_;
  Eigen::VectorXd measure_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<double> total_weight_;
  std::vector<double> off_diagonal_weight_;
};

/// Validating constructor on dense indices.  Edges given in both directions
/// must agree to the bit; repeated identical edges are merged.
WeightedGraph build_graph(std::vector<std::string> ids, std::vector<double> measure,
                          std::vector<IndexedEdge> edges);

WeightedGraph build_graph(const std::vector<VertexInput>& vertices,
                          const std::vector<EdgeInput>& edges);

WeightedGraph build_graph(const std::vector<std::string>& vertices,
                          const std::unordered_map<std::string, double>& measure,
                          const std::vector<EdgeInput>& edges);

/// Deg(x) = (1/m(x)) sum_y mu_xy, self-loops included.
double weighted_degree(const WeightedGraph& g, VertexIndex x);
double weighted_degree(const WeightedGraph& g, const std::string& x);

/// Hop distances from x; unreachable entries never occur on a valid graph.
std::vector<std::size_t> hop_distances(const WeightedGraph& g, VertexIndex x);

/// Vertices within r hops of x (x included), sorted by index.
std::vector<VertexIndex> combinatorial_ball(const WeightedGraph& g, VertexIndex x, std::size_t r);

struct NonDegeneracy {
  bool non_degenerate;
  double delta;  // inf_x m(x)
};

NonDegeneracy is_non_degenerate(const WeightedGraph& g);

}  // namespace gammaflow
