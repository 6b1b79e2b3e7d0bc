#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "gammaflow/families.hpp"
#include "gammaflow/graph.hpp"

namespace gammaflow {

/// Matrix of a generator (L f)(x) = (1/m(x)) [sum_y w_xy f(y) - d(x) f(x)]
/// on n points, stored as symmetric off-diagonal weights in CSR form.
/// For the full graph d(x) = sum_{y != x} mu_xy; a Dirichlet restriction
/// keeps the full host degree and drops off-domain columns.
struct Generator {
  Eigen::VectorXd measure;
  Eigen::VectorXd degree;
  std::vector<std::size_t> row_start;  // size n + 1
  std::vector<std::size_t> column;
  std::vector<double> weight;

  std::size_t size() const noexcept { return static_cast<std::size_t>(measure.size()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
  /// True when every off-diagonal entry is (i, i +- 1).
  bool is_tridiagonal() const;
  /// S = M^{1/2} L M^{-1/2}, dense and symmetric.
  Eigen::MatrixXd symmetrized() const;
};

Generator full_generator(const WeightedGraph& g);

enum class HeatMode { spectral, ode, automatic };

std::string_view to_string(HeatMode m) noexcept;
HeatMode parse_heat_mode(std::string_view text);

struct OdeSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double min_step = 1e-13;  // StepSizeUnderflow below this (relative to max(1, |t|))
};

inline constexpr std::size_t kMaxSpectralVertices = 3000;

/// P_t = e^{tL} for a finite generator.  Spectral mode diagonalizes S once;
/// ode mode integrates du/dt = Lu with adaptive Dormand-Prince steps.
class SemigroupOperator {
 public:
  /// automatic picks spectral up to kMaxSpectralVertices, ode above.
  /// TooLargeForSpectral when spectral is forced on a larger generator.
  explicit SemigroupOperator(Generator gen, HeatMode mode = HeatMode::automatic, OdeSettings ode = {});

  HeatMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return gen_.size(); }
  const Generator& generator() const noexcept { return gen_; }
  const OdeSettings& ode_settings() const noexcept { return ode_; }
  /// Eigenvalues of S in ascending order; empty in ode mode.
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  /// Orthonormal eigenvectors of S as columns; empty in ode mode.
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }

  /// P_t f.  NegativeTime for t < 0; t = 0 returns f unchanged.
  Eigen::VectorXd apply(double t, const Eigen::VectorXd& f) const;
  /// e^{tL} f for any real t.  Negative t is only meaningful for the small
  /// steps used by centered differences.
  Eigen::VectorXd evolve(double t, const Eigen::VectorXd& f) const;
  /// L f.
  Eigen::VectorXd generate(const Eigen::VectorXd& f) const { return gen_.apply(f); }

 private:
  Eigen::VectorXd evolve_spectral(double t, const Eigen::VectorXd& f) const;
  Eigen::VectorXd evolve_ode(double t, const Eigen::VectorXd& f) const;

  Generator gen_;
  HeatMode mode_;
  OdeSettings ode_;
  Eigen::VectorXd sqrt_m_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

SemigroupOperator build_semigroup(const WeightedGraph& g, HeatMode mode = HeatMode::automatic, OdeSettings ode = {});

/// Generator on a finite domain with killing at the boundary.
struct DirichletRestriction {
  std::vector<VertexIndex> domain;          // host indices, sorted
  std::vector<std::ptrdiff_t> local_index;  // host index -> position in domain, -1 outside
  Generator generator;

  /// Position of a host vertex in the domain; VertexOutsideDomain otherwise.
  std::size_t local(VertexIndex host_vertex) const;
};

/// EmptyDomain for an empty set; DisconnectedDomain when the induced
/// subgraph is disconnected, unless allow_disconnected is set.
DirichletRestriction dirichlet_restriction(const WeightedGraph& g, std::span<const VertexIndex> domain,
                                           bool allow_disconnected = false);

/// (P_t^{(D)} 1_Omega)(x).  NegativeTime; VertexOutsideDomain.
double heat_mass(const DirichletRestriction& r, double t, VertexIndex host_vertex, HeatMode mode = HeatMode::automatic);

enum class BallKind { combinatorial, intrinsic };

std::string_view to_string(BallKind b) noexcept;
BallKind parse_ball_kind(std::string_view text);

struct MassCurve {
  std::string base;
  double t = 0.0;
  BallKind balls = BallKind::combinatorial;
  std::vector<double> radii;
  std::vector<std::size_t> ball_sizes;
  std::vector<double> masses;
  std::vector<double> deficits;  // 1 - mass
  std::vector<bool> touches_boundary;
};

struct MassCurveOptions {
  BallKind balls = BallKind::combinatorial;
  HeatMode mode = HeatMode::automatic;
  unsigned jobs = 1;
};

/// Masses over the exhaustion by balls of the given radii around o.  Radii
/// must be nonnegative and strictly increasing.  `boundary` marks host
/// vertices where a truncated host stops representing the infinite family.
MassCurve exhaustion_mass_curve(const WeightedGraph& host, VertexIndex o, double t, std::span<const double> radii,
                                const MassCurveOptions& opts = {}, std::span<const VertexIndex> boundary = {});
/// Family form: the family is grown so the largest ball stays interior,
/// and based at family_origin.
MassCurve exhaustion_mass_curve(const FamilySpec& family, double t, std::span<const double> radii,
                                const MassCurveOptions& opts = {});

nlohmann::json mass_curve_to_json(const MassCurve& c);
std::string mass_curve_to_csv(const MassCurve& c);

}  // namespace gammaflow
