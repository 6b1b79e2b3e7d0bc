#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gammaflow/graph.hpp"
#include "gammaflow/report.hpp"

namespace gammaflow {

/// Gamma and Gamma_2 at `center` as quadratic forms.
///
/// Coordinates are the vertices of the 2-ball around the center, center
/// excluded, in index order.  For any f with f(center) = 0, extended by zero
/// off the ball, f^T gamma_matrix f = Gamma(f)(center) and
/// f^T gamma2_matrix f = Gamma_2(f)(center).  Both operators are invariant
/// under adding constants, so fixing f(center) = 0 loses nothing.
struct QuadraticFormPair {
  VertexIndex center = 0;
  std::vector<VertexIndex> basis;
  Eigen::MatrixXd gamma_matrix;
  Eigen::MatrixXd gamma2_matrix;

  /// Restricts a global function to the basis after subtracting f(center).
  Eigen::VectorXd local(const VertexFunction& f) const;
  /// Extends basis coordinates to a global function, zero elsewhere.
  VertexFunction global(const Eigen::VectorXd& coords, std::size_t n) const;
};

QuadraticFormPair curvature_forms(const WeightedGraph& g, VertexIndex x);

struct CurvatureOptions {
  double tol = 1e-8;       // final bracket width
  double psd_tol = 1e-10;  // lambda_min >= -psd_tol * ||Q2|| after diagonal scaling
  double floor = -1e6;     // NoLowerBound below this
};

struct CurvatureResult {
  VertexIndex vertex = 0;
  double curvature = 0.0;  // lower end of the final bracket: CD holds here
  VertexFunction minimizer;  // Gamma(minimizer)(vertex) = 1
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double tolerance = 0.0;
};

/// Largest K with Gamma_2 >= K Gamma at x, found by bisection on K with a
/// minimum-eigenvalue test of Q2 - K Q1.  Errors: UnknownVertex,
/// IsolatedVertex, NoLowerBound.
CurvatureResult bakry_emery_curvature(const WeightedGraph& g, VertexIndex x, const CurvatureOptions& opts = {});

/// True when Q2 - K Q1 passes the PSD test used by the bisection.
bool cd_holds_at(const QuadraticFormPair& forms, double K, double psd_tol);

struct CurvatureProfile {
  std::vector<CurvatureResult> vertices;  // sorted by vertex index
  double k_min = 0.0;
  VertexIndex argmin = 0;
};

CurvatureProfile curvature_profile(const WeightedGraph& g, const CurvatureOptions& opts = {}, unsigned jobs = 1);

/// Samples Gamma_2(f)(x) >= K Gamma(f)(x) with directly evaluated operators:
/// first delta_y for every edge (x, y), then `trials` random functions.
/// Residual per (f, x) is (K Gamma(f)(x) - Gamma_2(f)(x)) / max_y Gamma(f)(y).
VerificationReport verify_cd(const WeightedGraph& g, double K, int trials, std::uint64_t seed = 0, double tol = 1e-9);

}  // namespace gammaflow
