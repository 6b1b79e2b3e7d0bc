#include "gammaflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "gammaflow/error.hpp"
#include "gammaflow/gamma.hpp"
#include "gammaflow/graph_io.hpp"
#include "gammaflow/numeric.hpp"

namespace gammaflow {

std::string_view to_string(MetricProvenance p) noexcept {
  switch (p) {
    case MetricProvenance::default_path_metric: return "default_path_metric";
    case MetricProvenance::hop_metric: return "hop_metric";
    case MetricProvenance::user_supplied: return "user_supplied";
  }
  return "?";
}

double default_edge_length(const WeightedGraph& g, VertexIndex u, VertexIndex v) {
  return 1.0 / std::sqrt(std::max(weighted_degree(g, u), weighted_degree(g, v)));
}

BaseMetric default_intrinsic_metric(const WeightedGraph& g, VertexIndex o) {
  if (o >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(o));
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, VertexIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[static_cast<Eigen::Index>(o)] = 0.0;
  queue.emplace(0.0, o);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[static_cast<Eigen::Index>(u)]) continue;
    for (const auto& nb : g.neighbors(u)) {
      if (nb.index == u) continue;
      const double nd = d + default_edge_length(g, u, nb.index);
      auto& cur = dist[static_cast<Eigen::Index>(nb.index)];
      if (nd < cur) {
        cur = nd;
        queue.emplace(nd, nb.index);
      }
    }
  }
  return {o, std::move(dist), MetricProvenance::default_path_metric};
}

BaseMetric hop_metric(const WeightedGraph& g, VertexIndex o) {
  if (o >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(o));
  const auto hops = hop_distances(g, o);
  Eigen::VectorXd dist(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < hops.size(); ++i) dist[static_cast<Eigen::Index>(i)] = static_cast<double>(hops[i]);
  return {o, std::move(dist), MetricProvenance::hop_metric};
}

std::vector<BaseMetric> all_base_metrics(const WeightedGraph& g, MetricProvenance kind, unsigned jobs) {
  if (kind == MetricProvenance::user_supplied)
    throw Error(ErrorCode::InvalidArgument, "user-supplied metrics cannot be generated");
  std::vector<BaseMetric> out(g.size());
  parallel_for(g.size(), jobs, [&](std::size_t i) {
    out[i] = kind == MetricProvenance::hop_metric ? hop_metric(g, i) : default_intrinsic_metric(g, i);
  });
  return out;
}

namespace {

VerificationReport intrinsic_report(const WeightedGraph& g, double tol,
                                    const std::function<double(VertexIndex, VertexIndex)>& rho, std::string_view kind) {
  VerificationReport report;
  report.check_name = "intrinsic";
  report.worst_residual = -std::numeric_limits<double>::infinity();
  report.parameters = {{"tol", tol}, {"metric", kind}};
  VertexIndex worst = 0;
  for (VertexIndex x = 0; x < g.size(); ++x) {
    double sum = 0.0;
    for (const auto& nb : g.neighbors(x)) {
      if (nb.index == x) continue;
      const double r = rho(x, nb.index);
      sum += nb.mu * r * r;
    }
    const double excess = sum / g.m(x) - 1.0;
    if (excess > report.worst_residual) {
      report.worst_residual = excess;
      worst = x;
    }
  }
  report.parameters["slack"] = -report.worst_residual;
  if (report.worst_residual > tol) {
    report.status = Status::fail;
    report.witness = Witness{worst, std::nullopt, std::nullopt};
  }
  return report;
}

}  // namespace

VerificationReport verify_intrinsic(const WeightedGraph& g, std::span<const BaseMetric> metrics, double tol) {
  if (metrics.empty()) return verify_default_intrinsic(g, tol);
  std::vector<const BaseMetric*> by_base(g.size(), nullptr);
  for (const auto& m : metrics) {
    if (m.base >= g.size() || m.dist.size() != static_cast<Eigen::Index>(g.size()))
      throw Error(ErrorCode::InvalidArgument, "metric does not match the graph");
    by_base[m.base] = &m;
  }
  for (VertexIndex x = 0; x < g.size(); ++x)
    if (!by_base[x]) throw Error(ErrorCode::InvalidArgument, "no metric based at '" + g.id(x) + "'");
  const auto kind = to_string(metrics.front().provenance);
  return intrinsic_report(
      g, tol, [&](VertexIndex x, VertexIndex y) { return by_base[x]->dist[static_cast<Eigen::Index>(y)]; }, kind);
}

VerificationReport verify_default_intrinsic(const WeightedGraph& g, double tol) {
  return intrinsic_report(
      g, tol, [&](VertexIndex x, VertexIndex y) { return default_edge_length(g, x, y); },
      to_string(MetricProvenance::default_path_metric));
}

MetricBall metric_ball(const BaseMetric& metric, double r, std::span<const VertexIndex> boundary) {
  if (!(r >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be nonnegative");
  MetricBall ball;
  const double limit = r + 1e-12 * std::max(1.0, r);
  for (Eigen::Index i = 0; i < metric.dist.size(); ++i)
    if (metric.dist[i] <= limit) ball.vertices.push_back(static_cast<VertexIndex>(i));
  for (VertexIndex b : boundary)
    if (std::binary_search(ball.vertices.begin(), ball.vertices.end(), b)) ball.touches_boundary = true;
  return ball;
}

VertexFunction cutoff(const BaseMetric& metric, double r, double R) {
  if (!(r > 0.0) || !(r < R) || !std::isfinite(R))
    throw Error(ErrorCode::BadRadii, "cutoff needs 0 < r < R, got r=" + format_double(r) + " R=" + format_double(R));
  VertexFunction eta(metric.dist.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta[i] = std::clamp((R - metric.dist[i]) / (R - r), 0.0, 1.0);
  return eta;
}

CompletenessCertificate completeness_certificate(const WeightedGraph& g, VertexIndex o, int k_max,
                                                 std::span<const VertexIndex> boundary, double tol) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 1");
  const BaseMetric metric = default_intrinsic_metric(g, o);

  CompletenessCertificate cert;
  auto& seq = cert.sequence;
  auto& report = cert.report;
  seq.base = o;
  report.check_name = "completeness-certificate";
  report.worst_residual = -std::numeric_limits<double>::infinity();
  report.parameters = {{"k_max", k_max}, {"tol", tol}, {"base", g.id(o)}};

  auto record = [&](double residual, int k, std::optional<VertexIndex> at) {
    if (residual > report.worst_residual) {
      report.worst_residual = residual;
      if (residual > tol) report.witness = Witness{at, seq.functions[static_cast<std::size_t>(k - 1)], std::nullopt};
    }
  };

  for (int k = 1; k <= k_max; ++k) {
    const double r = k;
    const double R = 2.0 * k;
    seq.functions.push_back(cutoff(metric, r, R));
    const VertexFunction& eta = seq.functions.back();
    const VertexFunction ge = gamma(g, eta);
    Eigen::Index arg = 0;
    const double sup = ge.maxCoeff(&arg);
    seq.gamma_sups.push_back(sup);
    const double bound = 1.0 / (2.0 * r * r);
    record((sup - bound) / bound, k, static_cast<VertexIndex>(arg));

    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const auto x = static_cast<VertexIndex>(i);
      record(-eta[i], k, x);
      record(eta[i] - 1.0, k, x);
      if (metric.dist[i] <= r) record(1.0 - eta[i], k, x);
      if (metric.dist[i] >= R) record(eta[i], k, x);
      if (k > 1) record(seq.functions[static_cast<std::size_t>(k - 2)][i] - eta[i], k, x);
    }
    if (!seq.first_boundary_k) {
      for (VertexIndex b : boundary)
        if (eta[static_cast<Eigen::Index>(b)] > 0.0) {
          seq.first_boundary_k = k;
          break;
        }
    }
  }

  report.parameters["gamma_sups"] = seq.gamma_sups;
  report.parameters["first_boundary_k"] =
      seq.first_boundary_k ? nlohmann::json(*seq.first_boundary_k) : nlohmann::json(nullptr);
  if (report.worst_residual > tol) {
    report.status = Status::fail;
  } else {
    report.witness.reset();
    report.status = seq.first_boundary_k ? Status::inconclusive : Status::pass;
  }
  return cert;
}

nlohmann::json metric_to_json(const WeightedGraph& g, const BaseMetric& metric) {
  nlohmann::json dist = nlohmann::json::object();
  for (Eigen::Index i = 0; i < metric.dist.size(); ++i) dist[g.id(static_cast<VertexIndex>(i))] = metric.dist[i];
  return {{"base", g.id(metric.base)}, {"dist", std::move(dist)}, {"provenance", to_string(metric.provenance)}};
}

BaseMetric metric_from_json(const WeightedGraph& g, const nlohmann::json& doc) {
  try {
    BaseMetric m;
    m.base = g.index_of(doc.at("base").get<std::string>());
    m.provenance = MetricProvenance::user_supplied;
    m.dist = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.size()), std::numeric_limits<double>::quiet_NaN());
    for (const auto& [id, value] : doc.at("dist").items()) {
      const double d = value.get<double>();
      if (!(d >= 0.0) || !std::isfinite(d))
        throw Error(ErrorCode::ParseError, "distance to '" + id + "' must be finite and nonnegative");
      m.dist[static_cast<Eigen::Index>(g.index_of(id))] = d;
    }
    for (Eigen::Index i = 0; i < m.dist.size(); ++i)
      if (std::isnan(m.dist[i]))
        throw Error(ErrorCode::ParseError, "metric lacks a distance for '" + g.id(static_cast<VertexIndex>(i)) + "'");
    if (m.dist[static_cast<Eigen::Index>(m.base)] != 0.0)
      throw Error(ErrorCode::ParseError, "metric distance at its base must be 0");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("metric document: ") + e.what());
  }
}

}  // namespace gammaflow
