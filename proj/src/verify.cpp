#include "gammaflow/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "gammaflow/curvature.hpp"
#include "gammaflow/error.hpp"
#include "gammaflow/gamma.hpp"
#include "gammaflow/graph_io.hpp"
#include "gammaflow/metrics.hpp"
#include "gammaflow/numeric.hpp"

namespace gammaflow {

namespace {

constexpr double kFdAgreement = 1e-4;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Keeps the first strictly worst residual and its witness.
class Tracker {
 public:
  Tracker(std::string name, nlohmann::json params) {
    report_.check_name = std::move(name);
    report_.worst_residual = kNegInf;
    report_.parameters = std::move(params);
  }

  void offer(double residual, std::optional<VertexIndex> x, const VertexFunction* f, std::optional<double> t) {
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    if (residual > report_.worst_residual) {
      report_.worst_residual = residual;
      worst_ = Witness{x, f ? std::optional<VertexFunction>(*f) : std::nullopt, t};
    }
  }

  // Marks a failure that is not captured by the residual itself.
  void flag(std::optional<VertexIndex> x, const VertexFunction* f, std::optional<double> t, std::string why) {
    if (!flagged_) {
      flagged_ = Witness{x, f ? std::optional<VertexFunction>(*f) : std::nullopt, t};
      report_.parameters["failure"] = std::move(why);
    }
  }

  nlohmann::json& params() { return report_.parameters; }

  VerificationReport finish(double tol) {
    if (report_.worst_residual == kNegInf) report_.worst_residual = 0.0;
    if (report_.worst_residual > tol) {
      report_.status = Status::fail;
      report_.witness = worst_;
    } else if (flagged_) {
      report_.status = Status::fail;
      report_.witness = flagged_;
    } else {
      report_.status = Status::pass;
    }
    return std::move(report_);
  }

 private:
  VerificationReport report_;
  std::optional<Witness> worst_;
  std::optional<Witness> flagged_;
};

double max_degree(const WeightedGraph& g) {
  double d = 0.0;
  for (VertexIndex x = 0; x < g.size(); ++x) d = std::max(d, g.off_diagonal_weight(x) / g.m(x));
  return d;
}

nlohmann::json times_json(std::span<const double> times) { return std::vector<double>(times.begin(), times.end()); }

// Exact and finite-difference F'(0) at every vertex, plus the magnitude
// scale of the terms making up the exact value.
struct CdDerivative {
  Eigen::VectorXd exact;
  Eigen::VectorXd fd;
  Eigen::VectorXd scale;
};

struct CdSamples {
  VertexFunction gf;
  Eigen::VectorXd g2;
  Eigen::VectorXd lap_gamma;
  Eigen::VectorXd mixed;
  std::array<Eigen::VectorXd, 4> heat_gamma;  // P_s Gamma(f) at s = h, -h, h/2, -h/2
  std::array<Eigen::VectorXd, 4> gamma_heat;  // Gamma(P_s f)
  double h = 0.0;
  // Terms below this are at the finite-difference noise level.
  double noise_floor = 0.0;
};

CdSamples cd_samples(const WeightedGraph& g, const SemigroupOperator& op, const VertexFunction& f) {
  CdSamples s;
  s.gf = gamma(g, f);
  s.g2 = gamma2(g, f);
  s.lap_gamma = laplacian(g, s.gf);
  s.mixed = gamma(g, f, laplacian(g, f));
  s.h = 1e-5;
  s.noise_floor = std::max(1e-6 * s.gf.cwiseAbs().maxCoeff() * (1.0 + max_degree(g)), 1e-300);
  const double steps[4] = {s.h, -s.h, s.h / 2, -s.h / 2};
  for (int i = 0; i < 4; ++i) {
    s.heat_gamma[static_cast<std::size_t>(i)] = op.evolve(steps[i], s.gf);
    s.gamma_heat[static_cast<std::size_t>(i)] = gamma(g, op.evolve(steps[i], f));
  }
  return s;
}

CdDerivative cd_derivative(const CdSamples& s, double K) {
  const double h = s.h;
  auto F = [&](int i, double t) {
    return (std::exp(-2.0 * K * t) * s.heat_gamma[static_cast<std::size_t>(i)] - s.gamma_heat[static_cast<std::size_t>(i)]).eval();
  };
  const Eigen::VectorXd coarse = (F(0, h) - F(1, -h)) / (2.0 * h);
  const Eigen::VectorXd fine = (F(2, h / 2) - F(3, -h / 2)) / h;
  CdDerivative d;
  d.fd = fine;
  for (Eigen::Index i = 0; i < fine.size(); ++i) {
    const double sc = std::max({std::abs(coarse[i]), std::abs(fine[i]), 1e-300});
    if (std::abs(coarse[i] - fine[i]) > 1e-6 * sc) d.fd[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  }
  d.exact = 2.0 * (s.g2 - K * s.gf);
  d.scale.resize(s.gf.size());
  for (Eigen::Index i = 0; i < s.gf.size(); ++i)
    d.scale[i] = std::max({std::abs(s.lap_gamma[i]), 2.0 * std::abs(K) * s.gf[i], 2.0 * std::abs(s.mixed[i]),
                           std::abs(d.exact[i]), s.noise_floor});
  return d;
}

}  // namespace

VerificationReport check_gradient_bound(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                        std::span<const VertexFunction> fs, std::span<const double> times,
                                        double tol) {
  Tracker tr("gradient-bound", {{"K", K}, {"times", times_json(times)}, {"tol", tol}, {"functions", fs.size()}});
  for (const auto& f : fs) {
    const VertexFunction gf = gamma(g, f);
    for (double t : times) {
      const VertexFunction lhs = gamma(g, op.apply(t, f));
      const VertexFunction pg = op.apply(t, gf);
      const double decay = std::exp(-2.0 * K * t);
      for (Eigen::Index i = 0; i < lhs.size(); ++i) {
        const double rhs = pg[i] == 0.0 ? 0.0 : decay * pg[i];
        tr.offer((lhs[i] - rhs) / (1.0 + std::abs(pg[i])), static_cast<VertexIndex>(i), &f, t);
      }
    }
  }
  return tr.finish(tol);
}

VerificationReport check_gradient_bound(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                        const VertexFunction& f, std::span<const double> times, double tol) {
  return check_gradient_bound(g, op, K, std::span<const VertexFunction>(&f, 1), times, tol);
}

VerificationReport check_cd_from_gradient_bound(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                                const VertexFunction& f, VertexIndex x, double tol) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  const CdDerivative d = cd_derivative(cd_samples(g, op, f), K);
  const auto i = static_cast<Eigen::Index>(x);
  const double fd_error = std::abs(d.fd[i] - d.exact[i]) / d.scale[i];
  Tracker tr("cd-derivative", {{"K", K},
                               {"tol", tol},
                               {"vertex", g.id(x)},
                               {"exact", d.exact[i]},
                               {"finite_difference", d.fd[i]},
                               {"fd_relative_error", fd_error}});
  tr.offer(-d.exact[i] / d.scale[i], x, &f, 0.0);
  if (fd_error > kFdAgreement) tr.flag(x, &f, 0.0, "finite difference disagrees with the exact derivative");
  return tr.finish(tol);
}

double max_k_from_gradient_bound(const WeightedGraph& g, const SemigroupOperator& op,
                                 std::span<const VertexFunction> probes, double lo, double hi, double resolution,
                                 double tol) {
  if (!(lo < hi) || !(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "need lo < hi and resolution > 0");
  std::vector<CdSamples> samples;
  samples.reserve(probes.size());
  for (const auto& f : probes) samples.push_back(cd_samples(g, op, f));
  auto passes = [&](double K) {
    for (const auto& s : samples) {
      const CdDerivative d = cd_derivative(s, K);
      for (Eigen::Index i = 0; i < d.exact.size(); ++i) {
        if (-d.exact[i] / d.scale[i] > tol) return false;
        if (std::abs(d.fd[i] - d.exact[i]) / d.scale[i] > kFdAgreement) return false;
      }
    }
    return true;
  };
  if (!passes(lo)) throw Error(ErrorCode::InvalidArgument, "lower end of the K bracket already fails");
  if (passes(hi)) return hi;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return lo;
}

VerificationReport check_heat_subsolution(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                          const VertexFunction& f, double t, double tol) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "subsolution check needs t > 0");
  const VertexFunction u = op.apply(t, f);
  const VertexFunction gu = gamma(g, u);
  const VertexFunction lap_gu = laplacian(g, gu);
  const VertexFunction exact = 2.0 * gamma(g, u, laplacian(g, u));
  const VertexFunction fd = centered_derivative_vec([&](double s) { return gamma(g, op.evolve(s, f)); }, t);
  const double floor = 1e-9 * (1.0 + gu.cwiseAbs().maxCoeff() * (1.0 + max_degree(g)));

  Tracker tr("subsolution", {{"K", K}, {"t", t}, {"tol", tol}});
  double worst_fd = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double rhs = lap_gu[i] - 2.0 * K * gu[i];
    tr.offer((fd[i] - rhs) / (1.0 + std::abs(lap_gu[i]) + 2.0 * std::abs(K) * gu[i]), static_cast<VertexIndex>(i), &f,
             t);
    const double err = std::abs(fd[i] - exact[i]) / (std::max(std::abs(exact[i]), std::abs(fd[i])) + floor);
    worst_fd = std::max(worst_fd, err);
    if (err > kFdAgreement)
      tr.flag(static_cast<VertexIndex>(i), &f, t, "finite difference disagrees with 2 Gamma(u, Delta u)");
  }
  tr.params()["fd_relative_error"] = worst_fd;
  return tr.finish(tol);
}

MonotoneG monotone_G(const WeightedGraph& g, const SemigroupOperator& op, const VertexFunction& f,
                     const VertexFunction& zeta, double t, double s) {
  const VertexFunction u = op.evolve(t - s, f);
  const VertexFunction z = op.evolve(s, zeta);
  const VertexFunction gu = gamma(g, u);
  const VertexFunction dgu = -2.0 * gamma(g, u, laplacian(g, u));
  const VertexFunction dz = laplacian(g, z);
  const auto& m = g.measure();
  return {(gu.array() * z.array() * m.array()).sum(), ((dgu.array() * z.array() + gu.array() * dz.array()) * m.array()).sum()};
}

VerificationReport check_monotone_G(const WeightedGraph& g, const SemigroupOperator& op, double K,
                                    const VertexFunction& f, const VertexFunction& zeta, double t,
                                    std::span<const double> s_grid, double tol) {
  for (double s : s_grid)
    if (!(s > 0.0 && s < t)) throw Error(ErrorCode::InvalidArgument, "grid points must lie in (0, t)");
  for (Eigen::Index i = 0; i < zeta.size(); ++i)
    if (zeta[i] < 0.0) throw Error(ErrorCode::InvalidArgument, "zeta must be nonnegative");
  std::vector<double> grid(s_grid.begin(), s_grid.end());
  std::sort(grid.begin(), grid.end());

  Tracker tr("monotone-G", {{"K", K}, {"t", t}, {"tol", tol}, {"s_grid", grid}});
  std::vector<double> H;
  double worst_fd = 0.0;
  for (double s : grid) {
    const MonotoneG exact = monotone_G(g, op, f, zeta, t, s);
    const double fd = centered_derivative([&](double r) { return monotone_G(g, op, f, zeta, t, r).value; }, s).value;
    const double scale = 1.0 + std::abs(exact.derivative) + 2.0 * std::abs(K * exact.value);
    tr.offer((2.0 * K * exact.value - fd) / scale, std::nullopt, &f, s);
    const double err = std::abs(fd - exact.derivative) / (std::max(std::abs(fd), std::abs(exact.derivative)) + 1e-9 * scale);
    worst_fd = std::max(worst_fd, err);
    if (err > kFdAgreement) tr.flag(std::nullopt, &f, s, "finite difference disagrees with the exact G'");
    H.push_back(std::exp(-2.0 * K * s) * exact.value);
  }
  for (std::size_t i = 0; i + 1 < H.size(); ++i)
    tr.offer((H[i] - H[i + 1]) / (1.0 + std::abs(H[i])), std::nullopt, &f, grid[i + 1]);
  tr.params()["fd_relative_error"] = worst_fd;
  return tr.finish(tol);
}

VerificationReport check_caccioppoli(const WeightedGraph& g, const VertexFunction& gf, const VertexFunction& hf,
                                     const VertexFunction& eta, double C, double tol) {
  const VertexFunction lap = laplacian(g, gf);
  const auto& m = g.measure();
  const Eigen::ArrayXd eta2 = eta.array().square();
  const double lhs = (gamma(g, gf).array() * eta2 * m.array()).sum();
  const double cut = (gamma(g, eta).array() * gf.array().square() * m.array()).sum();
  const double source = ((gf.array() * hf.array()).abs() * eta2 * m.array()).sum();
  const double rhs = C * (cut + source);

  VerificationReport r;
  r.check_name = "caccioppoli";
  r.parameters = {{"C", C}, {"tol", tol}, {"lhs", lhs}, {"rhs", rhs}, {"cutoff_term", cut}, {"source_term", source}};
  for (Eigen::Index i = 0; i < lap.size(); ++i)
    if (lap[i] < hf[i] - 1e-12 * (1.0 + std::abs(lap[i]))) {
      r.status = Status::inconclusive;
      r.worst_residual = 0.0;
      r.witness = Witness{static_cast<VertexIndex>(i), gf, std::nullopt};
      r.parameters["failure"] = "Delta g >= h does not hold; g is not a subsolution";
      return r;
    }
  const double denom = std::max(lhs, rhs);
  r.worst_residual = denom > 0.0 ? (lhs - rhs) / denom : 0.0;
  if (r.worst_residual > tol) {
    r.status = Status::fail;
    r.witness = Witness{std::nullopt, gf, std::nullopt};
  }
  return r;
}

VerificationReport check_strong_condition_fails(const WeightedGraph& g, VertexIndex x, double K, double tol) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  if (g.off_diagonal_weight(x) <= 0.0) throw Error(ErrorCode::IsolatedVertex, "vertex '" + g.id(x) + "' has no neighbor");
  const VertexFunction d = delta(g, x);
  const VertexFunction gd = gamma(g, d);
  const VertexFunction g2d = gamma2(g, d);
  const VertexFunction ggd = gamma(g, gd);

  VerificationReport r;
  r.check_name = "strong-condition";
  r.parameters = {{"K", K}, {"tol", tol}, {"delta_at", g.id(x)}};
  r.worst_residual = kNegInf;
  VertexIndex best = 0;
  for (Eigen::Index i = 0; i < gd.size(); ++i) {
    const double rhs = 4.0 * gd[i] * (g2d[i] - K * gd[i]);
    const double margin = (ggd[i] - rhs) / (1.0 + std::abs(ggd[i]) + std::abs(rhs));
    if (margin > r.worst_residual) {
      r.worst_residual = margin;
      best = static_cast<VertexIndex>(i);
    }
  }
  // The residual is the largest violation margin; the remark's claim holds
  // when it is positive.
  r.status = r.worst_residual > tol ? Status::pass : Status::fail;
  r.witness = Witness{best, d, std::nullopt};
  return r;
}

VerificationReport check_green(const WeightedGraph& g, std::span<const VertexFunction> fs, double tol) {
  Tracker tr("green", {{"tol", tol}, {"functions", fs.size()}});
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const VertexFunction& f = fs[k];
    const VertexFunction& h = fs[(k + 1) % fs.size()];
    const double a = inner_m(g, f, laplacian(g, h));
    const double b = -dirichlet_energy(g, f, h);
    const double c = inner_m(g, laplacian(g, f), h);
    double mag = 0.0;
    for (const auto& e : g.edges()) {
      const auto u = static_cast<Eigen::Index>(e.u), v = static_cast<Eigen::Index>(e.v);
      mag += e.mu * std::abs(f[v] - f[u]) * std::abs(h[v] - h[u]);
    }
    const double denom = std::max({std::abs(a), std::abs(b), mag, 1e-300});
    tr.offer(std::max(std::abs(a - b), std::abs(a - c)) / denom, std::nullopt, &f, std::nullopt);
  }
  return tr.finish(tol);
}

VerificationReport check_contraction(const WeightedGraph& g, const SemigroupOperator& op,
                                     std::span<const VertexFunction> fs, std::span<const double> times, double tol) {
  Tracker tr("contraction", {{"tol", tol}, {"times", times_json(times)}, {"p", {"1", "2", "inf"}}});
  const double ps[3] = {1.0, 2.0, std::numeric_limits<double>::infinity()};
  for (const auto& f : fs)
    for (double t : times) {
      const VertexFunction u = op.apply(t, f);
      for (double p : ps) {
        const double nf = lp_norm(g, f, p);
        if (nf == 0.0) continue;
        tr.offer((lp_norm(g, u, p) - nf) / nf, std::nullopt, &f, t);
      }
    }
  return tr.finish(tol);
}

VerificationReport check_commutation(const WeightedGraph& g, const SemigroupOperator& op,
                                     std::span<const VertexFunction> fs, std::span<const double> times, double tol) {
  Tracker tr("commutation", {{"tol", tol}, {"times", times_json(times)}});
  for (const auto& f : fs) {
    const double nf = lp_norm(g, f, 2.0);
    if (nf == 0.0) continue;
    const VertexFunction lf = laplacian(g, f);
    for (double t : times) {
      const VertexFunction diff = laplacian(g, op.apply(t, f)) - op.apply(t, lf);
      tr.offer(lp_norm(g, diff, 2.0) / nf, std::nullopt, &f, t);
    }
  }
  return tr.finish(tol);
}

VerificationReport check_positivity(const WeightedGraph& g, const SemigroupOperator& op,
                                    std::span<const VertexFunction> fs, std::span<const double> times, double tol) {
  Tracker tr("positivity", {{"tol", tol}, {"times", times_json(times)}});
  for (const auto& f0 : fs) {
    const VertexFunction f = f0.cwiseAbs();
    const double nf = f.maxCoeff();
    if (nf == 0.0) continue;
    for (double t : times) {
      const VertexFunction u = op.apply(t, f);
      Eigen::Index arg = 0;
      const double lo = u.minCoeff(&arg);
      tr.offer(-lo / nf, static_cast<VertexIndex>(arg), &f, t);
    }
  }
  (void)g;
  return tr.finish(tol);
}

VerificationReport check_semigroup_law(const WeightedGraph& g, const SemigroupOperator& op,
                                       std::span<const VertexFunction> fs, std::span<const double> times, double tol) {
  Tracker tr("semigroup-law", {{"tol", tol}, {"times", times_json(times)}});
  const double eps = 1e-9;
  const double deg = max_degree(g);
  for (const auto& f : fs) {
    const double nf = f.cwiseAbs().maxCoeff();
    if (nf == 0.0) continue;
    for (double t : times)
      for (double s : times) {
        const VertexFunction a = op.apply(t + s, f);
        const VertexFunction b = op.apply(t, op.apply(s, f));
        tr.offer((a - b).cwiseAbs().maxCoeff() / nf, std::nullopt, &f, t + s);
      }
    // ||P_eps f - f|| <= eps ||Delta f|| <= 2 eps Deg ||f|| in the sup norm.
    const double jump = (op.apply(eps, f) - f).cwiseAbs().maxCoeff() / nf;
    tr.offer(jump - 2.0 * eps * deg, std::nullopt, &f, eps);
  }
  return tr.finish(tol);
}

VerificationReport check_energy_decay(const WeightedGraph& g, const SemigroupOperator& op,
                                      std::span<const VertexFunction> fs, std::span<const double> times, double tol) {
  std::vector<double> grid(times.begin(), times.end());
  std::sort(grid.begin(), grid.end());
  Tracker tr("energy-decay", {{"tol", tol}, {"times", grid}});
  const double deg = max_degree(g);
  double worst_fd = 0.0;
  for (const auto& f : fs) {
    const double q0 = dirichlet_energy(g, f);
    if (q0 == 0.0) continue;
    double prev = q0;
    for (double t : grid) {
      const VertexFunction u = op.apply(t, f);
      const double q = dirichlet_energy(g, u);
      tr.offer((q - prev) / q0, std::nullopt, &f, t);
      prev = q;
      if (t <= 0.0) continue;
      const VertexFunction lu = laplacian(g, u);
      const double exact = -2.0 * inner_m(g, lu, lu);
      const double fd = centered_derivative([&](double s) { return dirichlet_energy(g, op.evolve(s, f)); }, t).value;
      // Relative agreement, with a noise floor for states that have decayed
      // to rounding level.
      const double err = std::abs(fd - exact) / (std::max(std::abs(exact), std::abs(fd)) + 1e-9 * q0 * (1.0 + deg));
      worst_fd = std::max(worst_fd, err);
      if (err > kFdAgreement) tr.flag(std::nullopt, &f, t, "d/dt Q(P_t f) disagrees with -2 ||Delta P_t f||^2");
    }
  }
  tr.params()["fd_relative_error"] = worst_fd;
  return tr.finish(tol);
}

// ---------------------------------------------------------------------------
// Stochastic completeness.

std::string_view to_string(TailModel m) noexcept {
  switch (m) {
    case TailModel::polynomial: return "polynomial";
    case TailModel::exponential: return "exponential";
    case TailModel::automatic: return "auto";
  }
  return "?";
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::complete: return "complete";
    case Verdict::incomplete: return "incomplete";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

struct LineFit {
  double slope;
  double rms;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    ss += r * r;
  }
  return {slope, std::sqrt(ss / n)};
}

}  // namespace

SeriesOracleResult birth_death_completeness_oracle(const Sequence& m_seq, const Sequence& b_seq,
                                                   const SeriesOracleOptions& opts) {
  const std::int64_t N = opts.horizon;
  if (N < 100) throw Error(ErrorCode::InvalidArgument, "oracle horizon must be at least 100");
  // log a_n with a_n = (1/b_n) sum_{k <= n} m_k, accumulated in logs.
  std::vector<double> log_a(static_cast<std::size_t>(N + 1));
  double log_mass = -std::numeric_limits<double>::infinity();
  for (std::int64_t n = 0; n <= N; ++n) {
    const double m = m_seq(n), b = b_seq(n);
    if (!(m > 0.0) || !(b > 0.0) || !std::isfinite(m) || !std::isfinite(b))
      throw Error(ErrorCode::InvalidArgument, "sequences must be finite and positive up to the horizon (index " +
                                                  std::to_string(n) + ")");
    const double lm = std::log(m);
    log_mass = log_mass == -std::numeric_limits<double>::infinity()
                   ? lm
                   : std::max(log_mass, lm) + std::log1p(std::exp(-std::abs(log_mass - lm)));
    log_a[static_cast<std::size_t>(n)] = log_mass - std::log(b);
  }

  SeriesOracleResult res;
  for (std::int64_t c : {N / 8, N / 4, N / 2, N}) {
    double s = 0.0;
    for (std::int64_t n = 0; n <= c; ++n) s += std::exp(log_a[static_cast<std::size_t>(n)]);
    res.checkpoints.push_back(c);
    res.partial_sums.push_back(s);
  }

  // Tail fit over the last nine tenths of the horizon, on log-spaced samples.
  std::vector<double> ln_n, n_lin, ya;
  const double lo = std::log(static_cast<double>(N / 10)), hi = std::log(static_cast<double>(N));
  std::int64_t last = -1;
  for (int i = 0; i <= 400; ++i) {
    const auto n = static_cast<std::int64_t>(std::llround(std::exp(lo + (hi - lo) * i / 400.0)));
    if (n == last) continue;
    last = n;
    ln_n.push_back(std::log(static_cast<double>(n)));
    n_lin.push_back(static_cast<double>(n));
    ya.push_back(log_a[static_cast<std::size_t>(n)]);
  }
  const LineFit poly = fit_line(ln_n, ya);
  const LineFit expo = fit_line(n_lin, ya);

  TailModel model = opts.model;
  if (model == TailModel::automatic) {
    // An exponential rate only counts when it changes the terms by more than
    // a factor e across the horizon.
    const bool exp_meaningful = std::abs(expo.slope) * static_cast<double>(N) > 1.0;
    model = (exp_meaningful && expo.rms < poly.rms) ? TailModel::exponential : TailModel::polynomial;
  }
  res.model_used = model;
  if (model == TailModel::exponential) {
    res.tail_rate = expo.slope;
    res.fit_rms = expo.rms;
    if (std::abs(expo.slope) * static_cast<double>(N) <= 1.0)
      throw Error(ErrorCode::InconclusiveTail, "exponential tail rate " + format_double(expo.slope) +
                                                   " is indistinguishable from zero at this horizon");
    res.complete = expo.slope > 0.0;
    return res;
  }
  res.tail_rate = -poly.slope;
  res.fit_rms = poly.rms;
  if (res.tail_rate > 1.0 + opts.margin) {
    res.complete = false;
  } else if (res.tail_rate < 1.0 - opts.margin) {
    res.complete = true;
  } else {
    throw Error(ErrorCode::InconclusiveTail, "terms decay like n^-" + format_double(res.tail_rate) +
                                                 ", too close to the borderline exponent 1");
  }
  return res;
}

Sequence birth_death_measure(const FamilySpec& family) {
  if (family.kind != FamilyKind::birth_death) throw Error(ErrorCode::InvalidSpec, "not a birth_death family");
  switch (family.flavor) {
    case Flavor::combinatorial: return [](std::int64_t) { return 1.0; };
    case Flavor::normalized: {
      const Sequence b = family.b_sequence ? family.b_sequence->as_sequence() : Sequence([](std::int64_t) { return 1.0; });
      return [b](std::int64_t k) { return (k > 0 ? b(k - 1) : 0.0) + b(k); };
    }
    case Flavor::custom:
      return family.m_sequence ? family.m_sequence->as_sequence() : Sequence([](std::int64_t) { return 1.0; });
  }
  return [](std::int64_t) { return 1.0; };
}

Verdict deficit_verdict(std::span<const double> deficits, double plateau_threshold) {
  if (deficits.empty()) return Verdict::inconclusive;
  const double last = deficits.back();
  bool nonincreasing = true;
  for (std::size_t i = 0; i + 1 < deficits.size(); ++i)
    if (deficits[i + 1] > deficits[i] + 1e-12) nonincreasing = false;
  if (last < plateau_threshold && nonincreasing) return Verdict::complete;
  if (deficits.size() >= 3 && last > 10.0 * plateau_threshold) {
    const std::size_t k = deficits.size();
    const double spread = std::max({std::abs(deficits[k - 3] - last), std::abs(deficits[k - 2] - last),
                                    std::abs(deficits[k - 3] - deficits[k - 2])});
    if (spread < 0.01 * last) return Verdict::incomplete;
  }
  return Verdict::inconclusive;
}

CompletenessAnalysis check_stochastic_completeness(const FamilySpec& family, double t, std::span<const double> radii,
                                                   const CompletenessOptions& opts) {
  CompletenessAnalysis out;
  out.curve = exhaustion_mass_curve(family, t, radii, opts.curve);
  out.verdict = deficit_verdict(out.curve.deficits, opts.plateau_threshold);

  auto& r = out.report;
  r.check_name = "stochastic-completeness";
  r.worst_residual = out.curve.deficits.back();
  r.parameters = {{"family", family.describe()},
                  {"t", t},
                  {"radii", std::vector<double>(radii.begin(), radii.end())},
                  {"plateau_threshold", opts.plateau_threshold},
                  {"verdict", to_string(out.verdict)},
                  {"deficits", out.curve.deficits}};
  r.status = out.verdict == Verdict::inconclusive ? Status::inconclusive : Status::pass;

  if (family.kind == FamilyKind::birth_death) {
    SeriesOracleOptions oo = opts.oracle;
    oo.horizon = std::max<std::int64_t>(oo.horizon, static_cast<std::int64_t>(10.0 * radii.back()));
    const Sequence b = family.b_sequence ? family.b_sequence->as_sequence() : Sequence([](std::int64_t) { return 1.0; });
    try {
      out.oracle = birth_death_completeness_oracle(birth_death_measure(family), b, oo);
      const Verdict expected = out.oracle->complete ? Verdict::complete : Verdict::incomplete;
      r.parameters["oracle"] = {{"verdict", to_string(expected)},
                                {"model", to_string(out.oracle->model_used)},
                                {"tail_rate", out.oracle->tail_rate},
                                {"horizon", oo.horizon},
                                {"checkpoints", out.oracle->checkpoints},
                                {"partial_sums", out.oracle->partial_sums}};
      if (out.verdict != Verdict::inconclusive && out.verdict != expected) {
        r.status = Status::fail;
        r.witness = Witness{std::nullopt, std::nullopt, t};
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InconclusiveTail) throw;
      r.parameters["oracle"] = {{"verdict", "inconclusive"}, {"detail", e.what()}};
      if (r.status == Status::pass) r.status = Status::inconclusive;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suite runner.

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "cd",          "gradient-bound", "cd-derivative", "subsolution",  "monotone-G",
      "caccioppoli", "strong-condition", "green",       "contraction",  "commutation",
      "energy-decay", "positivity",    "semigroup-law", "intrinsic"};
  return names;
}

bool is_check_name(std::string_view name) {
  const auto& n = check_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

namespace {

VerificationReport merge(std::string name, std::vector<VerificationReport> parts, nlohmann::json params) {
  VerificationReport out;
  out.check_name = std::move(name);
  out.parameters = std::move(params);
  out.worst_residual = kNegInf;
  out.status = aggregate_status(parts);
  const VerificationReport* chosen = nullptr;
  for (const auto& p : parts) {
    out.worst_residual = std::max(out.worst_residual, p.worst_residual);
    if (!chosen && p.status == out.status && p.status != Status::pass) chosen = &p;
  }
  if (chosen) {
    out.witness = chosen->witness;
    if (chosen->parameters.contains("failure")) out.parameters["failure"] = chosen->parameters["failure"];
    out.parameters["failing_case"] = chosen->parameters;
  }
  if (out.worst_residual == kNegInf) out.worst_residual = 0.0;
  return out;
}

std::vector<VertexFunction> sample_functions(const WeightedGraph& g, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<VertexFunction> fs;
  for (int i = 0; i < count; ++i) fs.push_back(random_function(g, rng, (i % 3 == 2) ? 0.3 : 1.0));
  return fs;
}

}  // namespace

std::vector<VerificationReport> run_checks(const WeightedGraph& g, std::span<const std::string> names,
                                           const SuiteConfig& config) {
  for (const auto& n : names)
    if (!is_check_name(n)) throw Error(ErrorCode::InvalidArgument, "unknown check '" + n + "'");

  CurvatureOptions copts{config.curvature_tol, config.psd_tol};
  std::optional<CurvatureProfile> profile;
  bool wants_profile = !config.K.has_value();
  for (const auto& n : names)
    if (n == "cd-derivative") wants_profile = true;
  if (wants_profile) profile = curvature_profile(g, copts, config.jobs);
  const double K = config.K ? *config.K : profile->k_min;
  const SemigroupOperator op = build_semigroup(g, config.mode);
  std::vector<double> positive_times;
  for (double t : config.times)
    if (t > 0.0) positive_times.push_back(t);
  if (positive_times.empty()) throw Error(ErrorCode::InvalidArgument, "time grid needs a positive time");

  std::vector<VerificationReport> out(names.size());
  parallel_for(names.size(), config.jobs, [&](std::size_t idx) {
    const std::string& name = names[idx];
    const auto pos = static_cast<std::uint64_t>(
        std::find(check_names().begin(), check_names().end(), name) - check_names().begin());
    const std::uint64_t seed = config.seed * 0x9E3779B97F4A7C15ULL + pos;
    const auto fs = sample_functions(g, seed, config.trials);
    nlohmann::json params{{"K", K}, {"seed", config.seed}, {"trials", config.trials}, {"tol", config.tol},
                          {"times", config.times}};
    VerificationReport rep;
    if (name == "cd") {
      rep = verify_cd(g, K, config.trials, seed, config.tol);
    } else if (name == "gradient-bound") {
      rep = check_gradient_bound(g, op, K, fs, config.times, config.tol);
    } else if (name == "cd-derivative") {
      std::vector<VerificationReport> parts;
      for (VertexIndex x = 0; x < g.size(); ++x) {
        parts.push_back(check_cd_from_gradient_bound(g, op, K, profile->vertices[x].minimizer, x, config.tol));
        for (const auto& f : fs) parts.push_back(check_cd_from_gradient_bound(g, op, K, f, x, config.tol));
      }
      rep = merge(name, std::move(parts), params);
    } else if (name == "subsolution") {
      std::vector<VerificationReport> parts;
      for (const auto& f : fs)
        for (double t : positive_times) parts.push_back(check_heat_subsolution(g, op, K, f, t, config.tol));
      rep = merge(name, std::move(parts), params);
    } else if (name == "monotone-G") {
      const double t = 1.0;
      std::vector<double> grid;
      for (int i = 1; i <= 20; ++i) grid.push_back(t * i / 21.0);
      std::vector<VerificationReport> parts;
      const VertexFunction point = delta(g, VertexIndex{0});
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const VertexFunction zeta = (i % 2 == 0) ? point : VertexFunction(fs[(i + 1) % fs.size()].cwiseAbs());
        parts.push_back(check_monotone_G(g, op, K, fs[i], zeta, t, grid, config.tol));
      }
      params["t"] = t;
      params["s_grid"] = grid;
      rep = merge(name, std::move(parts), params);
    } else if (name == "caccioppoli") {
      const BaseMetric metric = default_intrinsic_metric(g, 0);
      const double reach = metric.dist.maxCoeff();
      std::vector<VerificationReport> parts;
      for (const auto& f : fs)
        for (double t : positive_times) {
          const VertexFunction u = op.apply(t, f);
          const VertexFunction lu = laplacian(g, u);
          for (double frac : {0.25, 0.4}) {
            const double r = frac * reach;
            parts.push_back(check_caccioppoli(g, u, lu, cutoff(metric, r, 2.0 * r)));
          }
        }
      rep = merge(name, std::move(parts), params);
    } else if (name == "strong-condition") {
      std::vector<VerificationReport> parts;
      double least = std::numeric_limits<double>::infinity();
      for (VertexIndex x = 0; x < g.size(); ++x) {
        parts.push_back(check_strong_condition_fails(g, x, K));
        least = std::min(least, parts.back().worst_residual);
      }
      rep = merge(name, std::move(parts), params);
      // Here the binding quantity is the smallest violation margin.
      rep.worst_residual = least;
    } else if (name == "green") {
      rep = check_green(g, fs);
    } else if (name == "contraction") {
      rep = check_contraction(g, op, fs, config.times);
    } else if (name == "commutation") {
      rep = check_commutation(g, op, fs, config.times);
    } else if (name == "energy-decay") {
      rep = check_energy_decay(g, op, fs, config.times);
    } else if (name == "positivity") {
      rep = check_positivity(g, op, fs, config.times);
    } else if (name == "semigroup-law") {
      rep = check_semigroup_law(g, op, fs, config.times);
    } else if (name == "intrinsic") {
      rep = verify_default_intrinsic(g);
    }
    out[idx] = std::move(rep);
  });
  return out;
}

}  // namespace gammaflow
