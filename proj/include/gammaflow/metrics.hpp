#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gammaflow/graph.hpp"
#include "gammaflow/report.hpp"

namespace gammaflow {

enum class MetricProvenance { default_path_metric, hop_metric, user_supplied };

std::string_view to_string(MetricProvenance p) noexcept;

/// Distances rho(., base) from one base point, indexed by vertex.
struct BaseMetric {
  VertexIndex base = 0;
  Eigen::VectorXd dist;
  MetricProvenance provenance = MetricProvenance::default_path_metric;
};

/// (Deg(u) v Deg(v))^{-1/2}.
double default_edge_length(const WeightedGraph& g, VertexIndex u, VertexIndex v);

/// Dijkstra with the default edge lengths.
BaseMetric default_intrinsic_metric(const WeightedGraph& g, VertexIndex o);
/// Combinatorial hop distance as a metric; intrinsic only for small degrees.
BaseMetric hop_metric(const WeightedGraph& g, VertexIndex o);
/// One metric per base point, computed on up to `jobs` threads.
std::vector<BaseMetric> all_base_metrics(const WeightedGraph& g, MetricProvenance kind, unsigned jobs = 1);

/// Checks sum_y mu_xy rho(x, y)^2 <= m(x) (1 + tol) at every x.
/// worst_residual is max_x (sum / m(x) - 1); slack is its negation.
/// `metrics` must hold the metric based at every vertex unless it is empty,
/// in which case the default metric's edge lengths are used directly.
VerificationReport verify_intrinsic(const WeightedGraph& g, std::span<const BaseMetric> metrics, double tol = 1e-12);
VerificationReport verify_default_intrinsic(const WeightedGraph& g, double tol = 1e-12);

struct MetricBall {
  std::vector<VertexIndex> vertices;  // sorted
  bool touches_boundary = false;      // some member lies on `boundary`
};

/// {x : dist(x) <= r}.  Distances within 1e-12 relative of r count as inside.
MetricBall metric_ball(const BaseMetric& metric, double r, std::span<const VertexIndex> boundary = {});

/// eta_{r,R}(x) = clamp((R - rho(x)) / (R - r), 0, 1).  BadRadii unless 0 < r < R.
VertexFunction cutoff(const BaseMetric& metric, double r, double R);

struct CutoffSequence {
  VertexIndex base = 0;
  std::vector<VertexFunction> functions;  // eta_k = eta_{k,2k}, k = 1..k_max
  std::vector<double> gamma_sups;         // sup_x Gamma(eta_k)(x)
  std::optional<int> first_boundary_k;    // least k whose support meets the boundary
};

struct CompletenessCertificate {
  CutoffSequence sequence;
  VerificationReport report;
};

/// Builds eta_k for k = 1..k_max from the default metric at o and checks
/// 0 <= eta_k <= 1, monotonicity in k, eta_k = 1 on B_k, eta_k = 0 off B_2k
/// and sup Gamma(eta_k) <= 1/(2k^2).  When the support of some eta_k reaches
/// `boundary`, the report is inconclusive unless a bound already failed.
CompletenessCertificate completeness_certificate(const WeightedGraph& g, VertexIndex o, int k_max,
                                                 std::span<const VertexIndex> boundary = {}, double tol = 1e-12);

nlohmann::json metric_to_json(const WeightedGraph& g, const BaseMetric& metric);
/// Accepts {"base": id, "dist": {id: value}}; missing vertices are an error.
BaseMetric metric_from_json(const WeightedGraph& g, const nlohmann::json& doc);

}  // namespace gammaflow
