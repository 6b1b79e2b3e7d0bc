#include "gammaflow/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "gammaflow/error.hpp"
#include "gammaflow/graph_io.hpp"
#include "gammaflow/metrics.hpp"
#include "gammaflow/numeric.hpp"

namespace gammaflow {

Eigen::VectorXd Generator::apply(const Eigen::VectorXd& f) const {
  const std::size_t n = size();
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double acc = -degree[ii] * f[ii];
    for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e) acc += weight[e] * f[static_cast<Eigen::Index>(column[e])];
    out[ii] = acc / measure[ii];
  }
  return out;
}

bool Generator::is_tridiagonal() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e) {
      const std::size_t j = column[e];
      if (j + 1 != i && i + 1 != j) return false;
    }
  return true;
}

Eigen::MatrixXd Generator::symmetrized() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    S(i, i) = -degree[i] / measure[i];
    const auto iu = static_cast<std::size_t>(i);
    for (std::size_t e = row_start[iu]; e < row_start[iu + 1]; ++e) {
      const auto j = static_cast<Eigen::Index>(column[e]);
      S(i, j) = weight[e] / std::sqrt(measure[i] * measure[j]);
    }
  }
  return S;
}

Generator full_generator(const WeightedGraph& g) {
  Generator gen;
  const std::size_t n = g.size();
  gen.measure = g.measure();
  gen.degree.resize(static_cast<Eigen::Index>(n));
  gen.row_start.assign(1, 0);
  for (VertexIndex x = 0; x < n; ++x) {
    gen.degree[static_cast<Eigen::Index>(x)] = g.off_diagonal_weight(x);
    for (const auto& nb : g.neighbors(x)) {
      if (nb.index == x) continue;
      gen.column.push_back(nb.index);
      gen.weight.push_back(nb.mu);
    }
    gen.row_start.push_back(gen.column.size());
  }
  return gen;
}

std::string_view to_string(HeatMode m) noexcept {
  switch (m) {
    case HeatMode::spectral: return "spectral";
    case HeatMode::ode: return "ode";
    case HeatMode::automatic: return "auto";
  }
  return "?";
}

HeatMode parse_heat_mode(std::string_view text) {
  if (text == "spectral") return HeatMode::spectral;
  if (text == "ode") return HeatMode::ode;
  if (text == "auto") return HeatMode::automatic;
  throw Error(ErrorCode::InvalidArgument, "unknown heat mode '" + std::string(text) + "' (spectral, ode, auto)");
}

SemigroupOperator::SemigroupOperator(Generator gen, HeatMode mode, OdeSettings ode)
    : gen_(std::move(gen)), mode_(mode), ode_(ode) {
  const std::size_t n = gen_.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "generator has no vertices");
  if (mode_ == HeatMode::automatic) mode_ = n <= kMaxSpectralVertices ? HeatMode::spectral : HeatMode::ode;
  if (mode_ == HeatMode::spectral && n > kMaxSpectralVertices)
    throw Error(ErrorCode::TooLargeForSpectral, std::to_string(n) + " vertices exceed the dense limit of " +
                                                   std::to_string(kMaxSpectralVertices) + "; use ode mode");
  if (mode_ != HeatMode::spectral) return;

  sqrt_m_ = gen_.measure.cwiseSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (gen_.is_tridiagonal() && n > 1) {
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::VectorXd diag(nn);
    Eigen::VectorXd sub = Eigen::VectorXd::Zero(nn - 1);
    for (Eigen::Index i = 0; i < nn; ++i) {
      diag[i] = -gen_.degree[i] / gen_.measure[i];
      const auto iu = static_cast<std::size_t>(i);
      for (std::size_t e = gen_.row_start[iu]; e < gen_.row_start[iu + 1]; ++e)
        if (gen_.column[e] == iu + 1) sub[i] = gen_.weight[e] / (sqrt_m_[i] * sqrt_m_[i + 1]);
    }
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  } else {
    es.compute(gen_.symmetrized());
  }
  if (es.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eigendecomposition did not converge");
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

Eigen::VectorXd SemigroupOperator::apply(double t, const Eigen::VectorXd& f) const {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "t = " + format_double(t));
  return evolve(t, f);
}

Eigen::VectorXd SemigroupOperator::evolve(double t, const Eigen::VectorXd& f) const {
  if (f.size() != static_cast<Eigen::Index>(size()))
    throw Error(ErrorCode::InvalidArgument, "function has " + std::to_string(f.size()) + " entries, expected " +
                                                std::to_string(size()));
  if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "time must be finite");
  if (t == 0.0) return f;
  return mode_ == HeatMode::spectral ? evolve_spectral(t, f) : evolve_ode(t, f);
}

Eigen::VectorXd SemigroupOperator::evolve_spectral(double t, const Eigen::VectorXd& f) const {
  Eigen::VectorXd coeff = eigenvectors_.transpose() * sqrt_m_.cwiseProduct(f);
  coeff.array() *= (t * eigenvalues_.array()).exp();
  return (eigenvectors_ * coeff).cwiseQuotient(sqrt_m_);
}

Eigen::VectorXd SemigroupOperator::evolve_ode(double t, const Eigen::VectorXd& f) const {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  const std::size_t n = size();
  State x(f.data(), f.data() + n);
  auto system = [this, n](const State& u, State& du, double) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      double acc = -gen_.degree[ii] * u[i];
      for (std::size_t e = gen_.row_start[i]; e < gen_.row_start[i + 1]; ++e) acc += gen_.weight[e] * u[gen_.column[e]];
      du[i] = acc / gen_.measure[ii];
    }
  };
  auto stepper = odeint::make_controlled(ode_.abs_tol, ode_.rel_tol, odeint::runge_kutta_dopri5<State>());

  double rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    rate = std::max(rate, gen_.degree[ii] / gen_.measure[ii]);
  }
  const double sign = t > 0 ? 1.0 : -1.0;
  const double span = std::abs(t);
  const double floor = ode_.min_step * std::max(1.0, span);
  double dt = sign * std::min(span, rate > 0 ? 0.5 / rate : span);
  double now = 0.0;
  while (sign * (t - now) > 0.0) {
    if (std::abs(dt) > std::abs(t - now)) dt = t - now;
    const auto result = stepper.try_step(system, x, now, dt);
    if (result == odeint::fail && std::abs(dt) < floor)
      throw Error(ErrorCode::StepSizeUnderflow,
                  "adaptive step fell below " + format_double(floor) + " at t = " + format_double(now) +
                      "; the problem is too stiff for ode mode");
  }
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(n));
}

SemigroupOperator build_semigroup(const WeightedGraph& g, HeatMode mode, OdeSettings ode) {
  return SemigroupOperator(full_generator(g), mode, ode);
}

std::size_t DirichletRestriction::local(VertexIndex host_vertex) const {
  if (host_vertex >= local_index.size() || local_index[host_vertex] < 0)
    throw Error(ErrorCode::VertexOutsideDomain, "vertex index " + std::to_string(host_vertex) + " is not in the domain");
  return static_cast<std::size_t>(local_index[host_vertex]);
}

DirichletRestriction dirichlet_restriction(const WeightedGraph& g, std::span<const VertexIndex> domain,
                                           bool allow_disconnected) {
  if (domain.empty()) throw Error(ErrorCode::EmptyDomain, "Dirichlet domain is empty");
  DirichletRestriction r;
  r.domain.assign(domain.begin(), domain.end());
  std::sort(r.domain.begin(), r.domain.end());
  r.domain.erase(std::unique(r.domain.begin(), r.domain.end()), r.domain.end());
  r.local_index.assign(g.size(), -1);
  for (std::size_t i = 0; i < r.domain.size(); ++i) {
    if (r.domain[i] >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(r.domain[i]));
    r.local_index[r.domain[i]] = static_cast<std::ptrdiff_t>(i);
  }

  auto& gen = r.generator;
  const auto n = static_cast<Eigen::Index>(r.domain.size());
  gen.measure.resize(n);
  gen.degree.resize(n);
  gen.row_start.assign(1, 0);
  for (std::size_t i = 0; i < r.domain.size(); ++i) {
    const VertexIndex x = r.domain[i];
    gen.measure[static_cast<Eigen::Index>(i)] = g.m(x);
    gen.degree[static_cast<Eigen::Index>(i)] = g.off_diagonal_weight(x);
    for (const auto& nb : g.neighbors(x)) {
      if (nb.index == x || r.local_index[nb.index] < 0) continue;
      gen.column.push_back(static_cast<std::size_t>(r.local_index[nb.index]));
      gen.weight.push_back(nb.mu);
    }
    gen.row_start.push_back(gen.column.size());
  }

  if (!allow_disconnected) {
    std::vector<bool> seen(r.domain.size(), false);
    std::queue<std::size_t> queue;
    seen[0] = true;
    queue.push(0);
    std::size_t reached = 1;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop();
      for (std::size_t e = gen.row_start[i]; e < gen.row_start[i + 1]; ++e)
        if (!seen[gen.column[e]]) {
          seen[gen.column[e]] = true;
          ++reached;
          queue.push(gen.column[e]);
        }
    }
    if (reached != r.domain.size()) {
      const auto it = std::find(seen.begin(), seen.end(), false);
      throw Error(ErrorCode::DisconnectedDomain,
                  "domain vertex '" + g.id(r.domain[static_cast<std::size_t>(it - seen.begin())]) +
                      "' is not connected to '" + g.id(r.domain[0]) + "' inside the domain");
    }
  }
  return r;
}

double heat_mass(const DirichletRestriction& r, double t, VertexIndex host_vertex, HeatMode mode) {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "t = " + format_double(t));
  const std::size_t i = r.local(host_vertex);
  if (t == 0.0) return 1.0;
  SemigroupOperator op(r.generator, mode);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(r.domain.size()));
  return op.apply(t, ones)[static_cast<Eigen::Index>(i)];
}

std::string_view to_string(BallKind b) noexcept {
  return b == BallKind::combinatorial ? "combinatorial" : "intrinsic";
}

BallKind parse_ball_kind(std::string_view text) {
  if (text == "combinatorial" || text == "hop") return BallKind::combinatorial;
  if (text == "intrinsic") return BallKind::intrinsic;
  throw Error(ErrorCode::InvalidArgument, "unknown ball kind '" + std::string(text) + "' (combinatorial, intrinsic)");
}

namespace {

void check_radii(std::span<const double> radii) {
  if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "radii list is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0) || !std::isfinite(radii[i]))
      throw Error(ErrorCode::InvalidArgument, "radii must be finite and nonnegative");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw Error(ErrorCode::InvalidArgument, "radii must increase");
  }
}

}  // namespace

MassCurve exhaustion_mass_curve(const WeightedGraph& host, VertexIndex o, double t, std::span<const double> radii,
                                const MassCurveOptions& opts, std::span<const VertexIndex> boundary) {
  check_radii(radii);
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "t = " + format_double(t));
  const BaseMetric metric = opts.balls == BallKind::combinatorial ? hop_metric(host, o) : default_intrinsic_metric(host, o);

  MassCurve curve;
  curve.base = host.id(o);
  curve.t = t;
  curve.balls = opts.balls;
  curve.radii.assign(radii.begin(), radii.end());
  const std::size_t k = radii.size();
  curve.ball_sizes.resize(k);
  curve.masses.resize(k);
  curve.deficits.resize(k);
  std::vector<char> touches(k, 0);
  parallel_for(k, opts.jobs, [&](std::size_t i) {
    // Hop radii are integral; a fractional radius means its floor.
    const double r = opts.balls == BallKind::combinatorial ? std::floor(radii[i]) : radii[i];
    const MetricBall ball = metric_ball(metric, r, boundary);
    const DirichletRestriction dr = dirichlet_restriction(host, ball.vertices);
    curve.ball_sizes[i] = ball.vertices.size();
    curve.masses[i] = heat_mass(dr, t, o, opts.mode);
    curve.deficits[i] = 1.0 - curve.masses[i];
    touches[i] = ball.touches_boundary ? 1 : 0;
  });
  curve.touches_boundary.assign(touches.begin(), touches.end());
  return curve;
}

MassCurve exhaustion_mass_curve(const FamilySpec& family, double t, std::span<const double> radii,
                                const MassCurveOptions& opts) {
  check_radii(radii);
  const double r_max = radii.back();
  auto hop_radius = static_cast<std::int64_t>(std::ceil(r_max));
  // Intrinsic balls may reach much further in hops than their radius; grow
  // the host until the largest ball is interior or the host gets large.
  constexpr std::size_t kHostLimit = 4096;
  for (;;) {
    const FamilySpec grown = grow_for_exhaustion(family, hop_radius);
    const WeightedGraph host = generate_family(grown);
    const VertexIndex o = host.index_of(family_origin(grown));
    std::vector<VertexIndex> boundary;
    for (const auto& id : truncation_boundary(grown)) boundary.push_back(host.index_of(id));
    if (opts.balls == BallKind::intrinsic && host.size() < kHostLimit) {
      const MetricBall ball = metric_ball(default_intrinsic_metric(host, o), r_max, boundary);
      if (ball.touches_boundary) {
        hop_radius *= 2;
        continue;
      }
    }
    return exhaustion_mass_curve(host, o, t, radii, opts, boundary);
  }
}

nlohmann::json mass_curve_to_json(const MassCurve& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < c.radii.size(); ++i)
    rows.push_back({{"radius", c.radii[i]},
                    {"ball_size", c.ball_sizes[i]},
                    {"mass", c.masses[i]},
                    {"deficit", c.deficits[i]},
                    {"touches_boundary", static_cast<bool>(c.touches_boundary[i])}});
  return {{"base", c.base}, {"t", c.t}, {"balls", to_string(c.balls)}, {"curve", std::move(rows)}};
}

std::string mass_curve_to_csv(const MassCurve& c) {
  std::ostringstream out;
  out << "radius,mass,deficit\n";
  for (std::size_t i = 0; i < c.radii.size(); ++i)
    out << format_double(c.radii[i]) << ',' << format_double(c.masses[i]) << ',' << format_double(c.deficits[i]) << '\n';
  return out.str();
}

}  // namespace gammaflow
