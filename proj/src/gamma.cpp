#include "gammaflow/gamma.hpp"

#include <cmath>
#include <limits>

#include "gammaflow/error.hpp"

namespace gammaflow {

namespace {

void check_size(const WeightedGraph& g, const VertexFunction& f) {
  if (static_cast<std::size_t>(f.size()) != g.size())
    throw Error(ErrorCode::InvalidArgument, "function has " + std::to_string(f.size()) + " entries, graph has " +
                                                std::to_string(g.size()) + " vertices");
}

inline double at(const VertexFunction& f, VertexIndex x) { return f[static_cast<Eigen::Index>(x)]; }

}  // namespace

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f) {
  check_size(g, f);
  VertexFunction out(f.size());
  for (VertexIndex x = 0; x < g.size(); ++x) {
    double acc = 0.0;
    const double fx = at(f, x);
    for (const auto& nb : g.neighbors(x)) acc += nb.mu * (at(f, nb.index) - fx);
    out[static_cast<Eigen::Index>(x)] = acc / g.m(x);
  }
  return out;
}

VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
  check_size(g, f);
  check_size(g, h);
  VertexFunction out(f.size());
  for (VertexIndex x = 0; x < g.size(); ++x) {
    double acc = 0.0;
    const double fx = at(f, x), hx = at(h, x);
    for (const auto& nb : g.neighbors(x)) acc += nb.mu * (at(f, nb.index) - fx) * (at(h, nb.index) - hx);
    out[static_cast<Eigen::Index>(x)] = acc / (2.0 * g.m(x));
  }
  return out;
}

VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f) { return gamma(g, f, f); }

VertexFunction gamma2(const WeightedGraph& g, const VertexFunction& f) {
  return 0.5 * laplacian(g, gamma(g, f)) - gamma(g, f, laplacian(g, f));
}

VertexFunction gamma2(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
  return 0.5 * (laplacian(g, gamma(g, f, h)) - gamma(g, f, laplacian(g, h)) - gamma(g, h, laplacian(g, f)));
}

double dirichlet_energy(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
  check_size(g, f);
  check_size(g, h);
  // Each unordered pair appears twice in the double sum; the 1/2 cancels it.
  double acc = 0.0;
  for (const auto& e : g.edges()) acc += e.mu * (at(f, e.v) - at(f, e.u)) * (at(h, e.v) - at(h, e.u));
  return acc;
}

double dirichlet_energy(const WeightedGraph& g, const VertexFunction& f) { return dirichlet_energy(g, f, f); }

double inner_m(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
  check_size(g, f);
  check_size(g, h);
  return (f.array() * h.array() * g.measure().array()).sum();
}

double lp_norm(const WeightedGraph& g, const VertexFunction& f, double p) {
  check_size(g, f);
  if (std::isinf(p)) return f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "lp_norm needs p >= 1");
  return std::pow((f.cwiseAbs().array().pow(p) * g.measure().array()).sum(), 1.0 / p);
}

VertexFunction delta(const WeightedGraph& g, VertexIndex x) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  VertexFunction f = VertexFunction::Zero(static_cast<Eigen::Index>(g.size()));
  f[static_cast<Eigen::Index>(x)] = 1.0;
  return f;
}

VertexFunction delta(const WeightedGraph& g, const std::string& id) { return delta(g, g.index_of(id)); }

VertexFunction constant(const WeightedGraph& g, double c) {
  return VertexFunction::Constant(static_cast<Eigen::Index>(g.size()), c);
}

VertexFunction random_function(const WeightedGraph& g, std::mt19937_64& rng, double support_fraction) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(g.size());
  VertexFunction f(n);
  for (Eigen::Index i = 0; i < n; ++i) f[i] = normal(rng);
  if (support_fraction < 1.0) {
    bool any = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (unit(rng) >= support_fraction) f[i] = 0.0;
      else any = true;
    }
    if (!any) f[static_cast<Eigen::Index>(static_cast<std::size_t>(unit(rng) * static_cast<double>(n)) % g.size())] = 1.0;
  }
  return f;
}

std::vector<VertexIndex> support(const VertexFunction& f) {
  std::vector<VertexIndex> s;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (f[i] != 0.0) s.push_back(static_cast<VertexIndex>(i));
  return s;
}

}  // namespace gammaflow
