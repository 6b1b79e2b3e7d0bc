#include "gammaflow/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "gammaflow/error.hpp"
#include "gammaflow/gamma.hpp"
#include "gammaflow/numeric.hpp"

namespace gammaflow {

Eigen::VectorXd QuadraticFormPair::local(const VertexFunction& f) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
  const double fc = f[static_cast<Eigen::Index>(center)];
  for (std::size_t i = 0; i < basis.size(); ++i) v[static_cast<Eigen::Index>(i)] = f[static_cast<Eigen::Index>(basis[i])] - fc;
  return v;
}

VertexFunction QuadraticFormPair::global(const Eigen::VectorXd& coords, std::size_t n) const {
  VertexFunction f = VertexFunction::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < basis.size(); ++i) f[static_cast<Eigen::Index>(basis[i])] = coords[static_cast<Eigen::Index>(i)];
  return f;
}

QuadraticFormPair curvature_forms(const WeightedGraph& g, VertexIndex x) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));

  // Local coordinates over the whole 2-ball, center included; the center
  // row and column are dropped at the end.
  const auto ball = combinatorial_ball(g, x, 2);
  const auto N = static_cast<Eigen::Index>(ball.size());
  std::unordered_map<VertexIndex, Eigen::Index> local;
  local.reserve(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) local.emplace(ball[i], static_cast<Eigen::Index>(i));
  const Eigen::Index cx = local.at(x);

  // Gamma(.)(z) as a matrix: (1/2m(z)) sum_w mu_zw (e_w - e_z)(e_w - e_z)^T.
  auto add_gamma_form = [&](Eigen::MatrixXd& M, VertexIndex z, double scale) {
    const Eigen::Index cz = local.at(z);
    const double c0 = scale / (2.0 * g.m(z));
    for (const auto& nb : g.neighbors(z)) {
      if (nb.index == z) continue;
      const Eigen::Index cw = local.at(nb.index);
      const double c = c0 * nb.mu;
      M(cw, cw) += c;
      M(cz, cz) += c;
      M(cw, cz) -= c;
      M(cz, cw) -= c;
    }
  };
  // Row of Delta at z.
  auto laplacian_row = [&](VertexIndex z) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(N);
    const Eigen::Index cz = local.at(z);
    for (const auto& nb : g.neighbors(z)) {
      if (nb.index == z) continue;
      row[local.at(nb.index)] += nb.mu / g.m(z);
      row[cz] -= nb.mu / g.m(z);
    }
    return row;
  };

  Eigen::MatrixXd q1 = Eigen::MatrixXd::Zero(N, N);
  add_gamma_form(q1, x, 1.0);

  // 1/2 Delta Gamma(f)(x) = (1/2m(x)) sum_y mu_xy (Gamma(f)(y) - Gamma(f)(x)).
  Eigen::MatrixXd half_lap_gamma = Eigen::MatrixXd::Zero(N, N);
  // Gamma(f, Delta f)(x) = (1/2m(x)) sum_y mu_xy (e_y - e_x)^T f (L_y - L_x) f.
  Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(N, N);
  const Eigen::RowVectorXd lx = laplacian_row(x);
  for (const auto& nb : g.neighbors(x)) {
    if (nb.index == x) continue;
    const double c = nb.mu / (2.0 * g.m(x));
    add_gamma_form(half_lap_gamma, nb.index, c);
    half_lap_gamma -= c * q1;
    const Eigen::RowVectorXd diff = laplacian_row(nb.index) - lx;
    const Eigen::Index cy = local.at(nb.index);
    mixed.row(cy) += c * diff;
    mixed.row(cx) -= c * diff;
  }
  Eigen::MatrixXd q2 = half_lap_gamma - 0.5 * (mixed + mixed.transpose());

  QuadraticFormPair out;
  out.center = x;
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (ball[i] != x) {
      out.basis.push_back(ball[i]);
      keep.push_back(static_cast<Eigen::Index>(i));
    }
  const auto d = static_cast<Eigen::Index>(keep.size());
  out.gamma_matrix.resize(d, d);
  out.gamma2_matrix.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      out.gamma_matrix(i, j) = q1(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
      out.gamma2_matrix(i, j) = q2(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
    }
  return out;
}

namespace {

double min_eigenvalue(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

// Symmetric diagonal scaling fixed per form pair. A congruence keeps the PSD
// verdict, and the tolerance then acts on comparable coordinates even when the
// measure spans several orders of magnitude.
Eigen::VectorXd jacobi_scale(const QuadraticFormPair& forms) {
  Eigen::VectorXd d(forms.gamma_matrix.rows());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double s = std::abs(forms.gamma2_matrix(i, i)) + forms.gamma_matrix(i, i);
    d[i] = s > 0.0 ? 1.0 / std::sqrt(s) : 1.0;
  }
  return d;
}

}  // namespace

bool cd_holds_at(const QuadraticFormPair& forms, double K, double psd_tol) {
  if (forms.basis.empty()) return true;
  const Eigen::VectorXd d = jacobi_scale(forms);
  const Eigen::MatrixXd q2 = d.asDiagonal() * forms.gamma2_matrix * d.asDiagonal();
  const Eigen::MatrixXd q1 = d.asDiagonal() * forms.gamma_matrix * d.asDiagonal();
  const double threshold = -psd_tol * std::max(q2.norm(), std::numeric_limits<double>::min());
  return min_eigenvalue(q2 - K * q1) >= threshold;
}

namespace {

// Exact minimizer of Gamma2 / Gamma at the center. Gamma only sees the
// neighbors, so the outer coordinates are eliminated by minimizing Q2 over
// them and the rest is a generalized eigenproblem against Q1.
Eigen::VectorXd minimizing_coords(const QuadraticFormPair& forms) {
  const auto& q1 = forms.gamma_matrix;
  const auto& q2 = forms.gamma2_matrix;
  std::vector<Eigen::Index> near, far;
  for (Eigen::Index i = 0; i < q1.rows(); ++i) (q1(i, i) > 0.0 ? near : far).push_back(i);
  const auto nn = static_cast<Eigen::Index>(near.size()), nf = static_cast<Eigen::Index>(far.size());
  Eigen::MatrixXd a(nn, nn), b(nn, nn), anf(nn, nf), aff(nf, nf);
  for (Eigen::Index i = 0; i < nn; ++i) {
    for (Eigen::Index j = 0; j < nn; ++j) {
      a(i, j) = q2(near[i], near[j]);
      b(i, j) = q1(near[i], near[j]);
    }
    for (Eigen::Index j = 0; j < nf; ++j) anf(i, j) = q2(near[i], far[j]);
  }
  for (Eigen::Index i = 0; i < nf; ++i)
    for (Eigen::Index j = 0; j < nf; ++j) aff(i, j) = q2(far[i], far[j]);
  Eigen::MatrixXd elim = Eigen::MatrixXd::Zero(nf, nn);
  if (nf > 0) {
    elim = aff.completeOrthogonalDecomposition().solve(anf.transpose());
    a -= anf * elim;
  }
  a = 0.5 * (a + a.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  Eigen::VectorXd vn = es.eigenvectors().col(0);
  vn /= std::sqrt(vn.dot(b * vn));
  const Eigen::VectorXd vf = -elim * vn;
  Eigen::VectorXd v(q1.rows());
  for (Eigen::Index i = 0; i < nn; ++i) v[near[i]] = vn[i];
  for (Eigen::Index i = 0; i < nf; ++i) v[far[i]] = vf[i];
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;
  return v;
}

}  // namespace

CurvatureResult bakry_emery_curvature(const WeightedGraph& g, VertexIndex x, const CurvatureOptions& opts) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "curvature tolerance must be positive");
  if (g.off_diagonal_weight(x) <= 0.0)
    throw Error(ErrorCode::IsolatedVertex, "vertex '" + g.id(x) + "' has no neighbor; Gamma vanishes there");

  const QuadraticFormPair forms = curvature_forms(g, x);
  const auto& q1 = forms.gamma_matrix;
  const auto& q2 = forms.gamma2_matrix;

  // Rayleigh quotients of delta_y, y ~ x, bound K(x) from above.
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < forms.basis.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (q1(ii, ii) > 0.0) hi = std::min(hi, q2(ii, ii) / q1(ii, ii));
  }

  double lo = hi;
  if (!cd_holds_at(forms, hi, opts.psd_tol)) {
    double step = std::max(1.0, std::abs(hi));
    lo = std::max(hi - step, opts.floor);
    while (!cd_holds_at(forms, lo, opts.psd_tol)) {
      if (lo <= opts.floor)
        throw Error(ErrorCode::NoLowerBound, "vertex '" + g.id(x) + "': no K above floor " + std::to_string(opts.floor) +
                                                 " passes the PSD test");
      step *= 2.0;
      lo = std::max(hi - step, opts.floor);
    }
    while (hi - lo > opts.tol) {
      const double mid = 0.5 * (lo + hi);
      if (cd_holds_at(forms, mid, opts.psd_tol)) lo = mid;
      else hi = mid;
    }
  }

  CurvatureResult r;
  r.vertex = x;
  r.curvature = lo;
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.tolerance = opts.tol;
  r.minimizer = forms.global(minimizing_coords(forms), g.size());
  return r;
}

CurvatureProfile curvature_profile(const WeightedGraph& g, const CurvatureOptions& opts, unsigned jobs) {
  CurvatureProfile p;
  p.vertices.resize(g.size());
  parallel_for(g.size(), jobs, [&](std::size_t i) { p.vertices[i] = bakry_emery_curvature(g, i, opts); });
  p.k_min = std::numeric_limits<double>::infinity();
  for (const auto& r : p.vertices)
    if (r.curvature < p.k_min) {
      p.k_min = r.curvature;
      p.argmin = r.vertex;
    }
  return p;
}

VerificationReport verify_cd(const WeightedGraph& g, double K, int trials, std::uint64_t seed, double tol) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "verify_cd needs trials >= 1");
  VerificationReport report;
  report.check_name = "cd";
  report.worst_residual = -std::numeric_limits<double>::infinity();
  report.parameters = {{"K", K}, {"trials", trials}, {"seed", seed}, {"tol", tol}};

  auto examine = [&](const VertexFunction& f, std::span<const VertexIndex> at) {
    const VertexFunction gf = gamma(g, f);
    const double scale = gf.maxCoeff();
    if (!(scale > 0.0)) return;
    const VertexFunction g2 = gamma2(g, f);
    for (VertexIndex x : at) {
      const auto i = static_cast<Eigen::Index>(x);
      const double r = (K * gf[i] - g2[i]) / scale;
      // Ties keep the earliest probe so delta functions win over random ones.
      const double w = report.worst_residual;
      if (r > (std::isfinite(w) ? w + 1e-12 * std::max(1.0, std::abs(w)) : w)) {
        report.worst_residual = r;
        report.witness = Witness{x, f, std::nullopt};
      }
    }
  };

  for (VertexIndex x = 0; x < g.size(); ++x) {
    const VertexIndex only[] = {x};
    for (const auto& nb : g.neighbors(x))
      if (nb.index != x) examine(delta(g, nb.index), only);
  }
  std::vector<VertexIndex> all(g.size());
  for (VertexIndex x = 0; x < g.size(); ++x) all[x] = x;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) examine(random_function(g, rng, (t % 2 == 0) ? 1.0 : 0.3), all);

  if (report.worst_residual > tol) {
    report.status = Status::fail;
  } else {
    report.status = Status::pass;
    report.witness.reset();
  }
  return report;
}

}  // namespace gammaflow
