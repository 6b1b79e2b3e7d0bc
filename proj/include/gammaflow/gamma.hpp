#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gammaflow/graph.hpp"

namespace gammaflow {

// Difference operators of the graph.  Every function here is evaluated on
// the whole vertex set; missing entries of a shorter vector are an error.
// A self-loop has zero difference and therefore never contributes.

/// (Delta f)(x) = (1/m(x)) sum_y mu_xy (f(y) - f(x)).
VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f);

/// Gamma(f, h)(x) = (1/2m(x)) sum_y mu_xy (f(y) - f(x)) (h(y) - h(x)).
VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);
VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f);

/// Gamma_2(f) = 1/2 Delta Gamma(f) - Gamma(f, Delta f).
VertexFunction gamma2(const WeightedGraph& g, const VertexFunction& f);

/// Gamma_2(f, h) = 1/2 (Delta Gamma(f, h) - Gamma(f, Delta h) - Gamma(h, Delta f)).
VertexFunction gamma2(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);

/// Q(f, h) = 1/2 sum_{x,y} mu_xy (f(y) - f(x)) (h(y) - h(x)).
double dirichlet_energy(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);
double dirichlet_energy(const WeightedGraph& g, const VertexFunction& f);

/// <f, h>_m = sum_x f(x) h(x) m(x).
double inner_m(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);

/// ||f||_{l^p_m} for p >= 1; p = infinity gives the sup norm.
double lp_norm(const WeightedGraph& g, const VertexFunction& f, double p);

VertexFunction delta(const WeightedGraph& g, VertexIndex x);
VertexFunction delta(const WeightedGraph& g, const std::string& id);
VertexFunction constant(const WeightedGraph& g, double c);

/// Standard normal entries.  With `support_fraction` < 1 a random subset of
/// roughly that fraction of vertices is kept (at least one).
VertexFunction random_function(const WeightedGraph& g, std::mt19937_64& rng, double support_fraction = 1.0);

std::vector<VertexIndex> support(const VertexFunction& f);

}  // namespace gammaflow
