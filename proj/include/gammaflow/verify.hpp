#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gammaflow/families.hpp"
#include "gammaflow/graph.hpp"
#include "gammaflow/heat.hpp"
#include "gammaflow/report.hpp"

namespace gammaflow {

// Numerical checks of the heat-semigroup gradient estimates.  Every check
// returns a report; a failing report carries a witness (vertex, function,
// time) that reproduces the worst residual.  Derivatives use the centered
// differences of numeric.hpp.

/// Gamma(P_t f)(x) <= e^{-2Kt} P_t(Gamma f)(x) + tol (1 + |P_t Gamma f(x)|)
/// for every t and x.  Residual: (lhs - rhs) / (1 + |P_t Gamma f(x)|).
VerificationReport check_gradient_bound(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                        std::span<const VertexFunction> fs, std::span<const double> times,
                                        double tol = 1e-9);
VerificationReport check_gradient_bound(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                        const VertexFunction& f, std::span<const double> times, double tol = 1e-9);

/// F(t) = e^{-2Kt} P_t Gamma(f)(x) - Gamma(P_t f)(x) has
/// F'(0) = 2 (Gamma_2(f)(x) - K Gamma(f)(x)).  Passes when the exact and
/// finite-difference values agree within 1e-4 relative and F'(0) >= -tol.
/// worst_residual is -F'(0).
VerificationReport check_cd_from_gradient_bound(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                                const VertexFunction& f, VertexIndex x, double tol = 1e-9);

/// Largest K (bisected to `resolution`) for which every probe passes
/// check_cd_from_gradient_bound at every vertex.  Probes are the given
/// functions; the search bracket is [lo, hi].
double max_k_from_gradient_bound(const WeightedGraph& g, const SemigroupOperator& op,
                                 std::span<const VertexFunction> probes, double lo, double hi,
                                 double resolution = 1e-4, double tol = 1e-9);

/// d/dt Gamma(P_t f) <= Delta Gamma(P_t f) - 2K Gamma(P_t f) + tol at every
/// x, the derivative taken by finite differences and cross-checked against
/// 2 Gamma(P_t f, Delta P_t f).
VerificationReport check_heat_subsolution(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                          const VertexFunction& f, double t, double tol = 1e-9);

/// G(s) = sum_x Gamma(P_{t-s} f)(x) (P_s zeta)(x) m(x) satisfies G' >= 2K G
/// on the grid and e^{-2Ks} G(s) is nondecreasing.
VerificationReport check_monotone_G(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                    const VertexFunction& f, const VertexFunction& zeta, double t,
                                    std::span<const double> s_grid, double tol = 1e-9);

/// Exact G(s) and G'(s) for check_monotone_G.
struct MonotoneG {
  double value;
  double derivative;
};
MonotoneG monotone_G(const WeightedGraph& g, const SemigroupOperator& op, const VertexFunction& f,
                     const VertexFunction& zeta, double t, double s);

inline constexpr double kCaccioppoliConstant = 4.0;

/// ||Gamma(g) eta^2||_1 <= C (||Gamma(eta) g^2||_1 + ||g h eta^2||_1) in
/// l^1_m.  Inconclusive when Delta g >= h fails somewhere.
VerificationReport check_caccioppoli(const WeightedGraph& g, const VertexFunction& gf, const VertexFunction& hf,
                                     const VertexFunction& eta, double C = kCaccioppoliConstant, double tol = 1e-12);

/// Looks for y with Gamma(Gamma(d))(y) > 4 Gamma(d)(y) [Gamma_2(d)(y) - K Gamma(d)(y)]
/// for d = delta_x.  Passes when such a y exists; the witness then names it.
VerificationReport check_strong_condition_fails(const WeightedGraph& g, VertexIndex x, double K, double tol = 1e-12);

// Semigroup properties.

/// sum_x f Delta h m = -Q(f, h) and <Delta f, h>_m = <f, Delta h>_m for
/// consecutive pairs of `fs`.
VerificationReport check_green(const WeightedGraph& g, std::span<const VertexFunction> fs, double tol = 1e-10);
/// ||P_t f||_p <= ||f||_p for p in {1, 2, inf}.
VerificationReport check_contraction(const WeightedGraph& g, const SemigroupOperator& op,
                                     std::span<const VertexFunction> fs, std::span<const double> times,
                                     double tol = 1e-9);
/// ||Delta P_t f - P_t Delta f|| <= tol ||f|| in l^2_m.
VerificationReport check_commutation(const WeightedGraph& g, const SemigroupOperator& op,
                                     std::span<const VertexFunction> fs, std::span<const double> times,
                                     double tol = 1e-8);
/// P_t |f| >= -tol ||f||_inf pointwise.
VerificationReport check_positivity(const WeightedGraph& g, const SemigroupOperator& op,
                                    std::span<const VertexFunction> fs, std::span<const double> times,
                                    double tol = 1e-12);
/// P_{t+s} f = P_t P_s f and P_eps f -> f as eps -> 0.
VerificationReport check_semigroup_law(const WeightedGraph& g, const SemigroupOperator& op,
                                       std::span<const VertexFunction> fs, std::span<const double> times,
                                       double tol = 1e-8);
/// Q(P_t f) nonincreasing on the sorted grid and
/// d/dt Q(P_t f) = -2 ||Delta P_t f||^2 within 1e-4 relative.
VerificationReport check_energy_decay(const WeightedGraph& g, const SemigroupOperator& op,
                                      std::span<const VertexFunction> fs, std::span<const double> times,
                                      double tol = 1e-9);

// Stochastic completeness.

enum class TailModel { polynomial, exponential, automatic };
std::string_view to_string(TailModel m) noexcept;

struct SeriesOracleOptions {
  std::int64_t horizon = 10000;
  TailModel model = TailModel::automatic;
  double margin = 0.1;  // polynomial: decay exponent must clear 1 by this much
};

struct SeriesOracleResult {
  bool complete = false;
  TailModel model_used = TailModel::polynomial;
  double tail_rate = 0.0;  // fitted exponent p (a_n ~ n^-p) or log ratio (a_n ~ r^n)
  double fit_rms = 0.0;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> partial_sums;  // sum_{n <= N} a_n at each checkpoint
};

/// Birth-death chain with measure m_k and weights b_k on the edge (k, k+1):
/// incomplete iff sum_n (1/b_n) sum_{k <= n} m_k converges.  Convergence is
/// judged from a fit of the terms' tail; InconclusiveTail when the fitted
/// rate sits within the margin of the borderline.
SeriesOracleResult birth_death_completeness_oracle(const Sequence& m_seq, const Sequence& b_seq,
                                                   const SeriesOracleOptions& opts = {});

/// Measure the generated birth_death family actually carries, per flavor.
Sequence birth_death_measure(const FamilySpec& family);

enum class Verdict { complete, incomplete, inconclusive };
std::string_view to_string(Verdict v) noexcept;

struct CompletenessOptions {
  double plateau_threshold = 1e-6;
  MassCurveOptions curve;
  SeriesOracleOptions oracle;
};

struct CompletenessAnalysis {
  MassCurve curve;
  Verdict verdict = Verdict::inconclusive;
  std::optional<SeriesOracleResult> oracle;
  VerificationReport report;  // pass on a verdict agreeing with the oracle, fail on disagreement
};

/// Heuristic verdict from the exhaustion deficits.  complete: last deficit
/// below the threshold and deficits nonincreasing.  incomplete: relative
/// change under 1% across the last three radii and last deficit above ten
/// times the threshold.  Otherwise inconclusive.  For birth_death families
/// the series oracle is consulted and must agree.
CompletenessAnalysis check_stochastic_completeness(const FamilySpec& family, double t, std::span<const double> radii,
                                                   const CompletenessOptions& opts = {});

/// The plateau rule above applied to a bare deficit sequence.
Verdict deficit_verdict(std::span<const double> deficits, double plateau_threshold);

// Suite runner used by the command line and the bindings.

struct SuiteConfig {
  std::optional<double> K;  // default: curvature_profile K_min
  std::uint64_t seed = 0;
  int trials = 20;
  std::vector<double> times{0.01, 0.1, 1.0, 10.0};
  double tol = 1e-9;
  double curvature_tol = 1e-8;
  double psd_tol = 1e-10;
  HeatMode mode = HeatMode::automatic;
  unsigned jobs = 1;
};

const std::vector<std::string>& check_names();
bool is_check_name(std::string_view name);

/// Runs the named checks on g, in the given order.  Results are independent
/// of `jobs`.
std::vector<VerificationReport> run_checks(const WeightedGraph& g, std::span<const std::string> names,
                                           const SuiteConfig& config);

}  // namespace gammaflow
