#include "lindcorr/correlation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lindcorr/error.hpp"
#include "lindcorr/evolution.hpp"
#include "lindcorr/sylvester.hpp"

namespace lindcorr {

namespace {

constexpr double kModeTol = 1e-9;
constexpr double kZeroMode = 1e-6;
constexpr double kClusterTol = 1e-5;

RMatrix kron(const RMatrix& A, const RMatrix& B) {
  RMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

RVector row_major_vec(const RMatrix& g) {
  RVector v(g.size());
  for (Eigen::Index p = 0; p < g.rows(); ++p)
    for (Eigen::Index q = 0; q < g.cols(); ++q) v(p * g.cols() + q) = g(p, q);
  return v;
}

// Groups eigenvalues into decay modes: drops (near) zeros and anything outside
// the closed unit disc, then clusters repeated values.
void classify(DecayModes& dm) {
  std::vector<cd> kept;
  for (Eigen::Index i = 0; i < dm.eigenvalues.size(); ++i) {
    const cd b = dm.eigenvalues(i);
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag())) continue;
    const double a = std::abs(b);
    if (a <= kZeroMode || a > 1.0 + kModeTol) continue;
    kept.push_back(b);
    if (std::abs(a - 1.0) <= kModeTol) dm.marginal.push_back(b);
  }
  std::sort(kept.begin(), kept.end(), [](cd a, cd b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return a.imag() > b.imag();
  });
  for (const cd b : kept) {
    bool merged = false;
    for (std::size_t j = 0; j < dm.modes.size(); ++j)
      if (std::abs(dm.modes[j] - b) <= kClusterTol * std::max(1.0, std::abs(b))) {
        ++dm.multiplicity[j];
        merged = true;
        break;
      }
    if (!merged) {
      dm.modes.push_back(b);
      dm.multiplicity.push_back(1);
    }
  }
}

}  // namespace

DifferenceStencil build_difference_stencil(const CouplingStencil& stencil) {
  if (stencil.lattice.dims != 1)
    throw Error(ErrorKind::NotOneDimensional, "difference equation needs a one-dimensional lattice");
  const EvolutionStencil ev = build_evolution_stencil(stencil);
  const int nb = ev.block();
  DifferenceStencil ds;
  ds.bands = ev.bands;
  ds.d = 1;
  for (const auto& [r, m] : ev.x) ds.d = std::max(ds.d, std::abs(r[0]));
  for (const auto& [r, m] : ev.y)
    if (m.cwiseAbs().maxCoeff() > 0) ds.inhomogeneous_range = std::max(ds.inhomogeneous_range, std::abs(r[0]));
  for (const auto& zu : ev.z)
    for (const auto& [rr, m] : zu)
      ds.inhomogeneous_range =
          std::max(ds.inhomogeneous_range, std::abs(rr.first[0]) + std::abs(rr.second[0]));

  auto x_at = [&](int r) -> RMatrix {
    auto it = ev.x.find({r});
    return it == ev.x.end() ? RMatrix::Zero(nb, nb) : it->second;
  };
  const RMatrix I = RMatrix::Identity(nb, nb);
  const int R = 2 * ds.d;
  for (int n = 0; n <= R; ++n) ds.C.push_back(kron(x_at(ds.d - n), I) + kron(I, x_at(n - ds.d)));
  return ds;
}

double difference_residual(const DifferenceStencil& ds, const CovarianceField& field, int r_min,
                           int r_max) {
  if (!field.has_real()) throw Error(ErrorKind::MissingRepresentation, "needs real-space data");
  double worst = 0.0;
  for (int r = r_min; r <= r_max; ++r) {
    RVector acc = RVector::Zero(ds.size());
    for (int n = 0; n <= ds.R(); ++n) acc += ds.C[static_cast<std::size_t>(n)] * row_major_vec(field.gamma({r + n}));
    worst = std::max(worst, acc.cwiseAbs().maxCoeff());
  }
  return worst;
}

DecayModes transfer_matrix(const DifferenceStencil& ds) {
  const int s = ds.size();
  const int R = ds.R();
  const RMatrix& CR = ds.C.back();
  Eigen::JacobiSVD<RMatrix> svd(CR);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond < 1e12)) throw Error(ErrorKind::SingularLeadingBlock, "leading block C_R is singular");
  Eigen::PartialPivLU<RMatrix> lu(CR);
  DecayModes dm;
  dm.matrix = RMatrix::Zero(s * R, s * R);
  for (int m = 0; m < R; ++m)
    dm.matrix.block(0, (R - 1 - m) * s, s, s) = -lu.solve(ds.C[static_cast<std::size_t>(m)]);
  for (int i = 1; i < R; ++i) dm.matrix.block(i * s, (i - 1) * s, s, s).setIdentity();
  Eigen::EigenSolver<RMatrix> es(dm.matrix, false);
  dm.eigenvalues = es.eigenvalues();
  classify(dm);
  return dm;
}

DecayModes pencil_poles(const DifferenceStencil& ds) {
  const int s = ds.size();
  const int R = ds.R();
  const int deg = s * R;
  auto L = [&](cd z) {
    CMatrix M = CMatrix::Zero(s, s);
    cd p = 1.0;
    for (int n = R; n >= 0; --n) {
      M += p * ds.C[static_cast<std::size_t>(n)].cast<cd>();
      p *= z;
    }
    return M;
  };

  // regularity: det L must not vanish at every probe point
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> rad(0.5, 1.5), ang(0.0, 2.0 * M_PI);
  bool regular = false;
  for (int i = 0; i < deg + 1 && !regular; ++i) {
    const cd z = std::polar(rad(rng), ang(rng));
    Eigen::JacobiSVD<CMatrix> svd(L(z));
    const auto& sv = svd.singularValues();
    if (sv(0) > 0 && sv(sv.size() - 1) > 1e-12 * sv(0)) regular = true;
  }
  if (!regular) throw Error(ErrorKind::IrregularPencil, "det L(z) vanishes identically");

  // beta = 1/z are the eigenvalues of sum_n beta^n C_n; companion pencil A - beta B
  // with unknowns (v, beta v, ..., beta^{R-1} v). Infinite eigenvalues come from a
  // singular C_R and correspond to z = 0.
  const int m = s * R;
  RMatrix A = RMatrix::Zero(m, m), B = RMatrix::Identity(m, m);
  for (int i = 0; i + 1 < R; ++i) A.block(i * s, (i + 1) * s, s, s).setIdentity();
  for (int n = 0; n < R; ++n) A.block((R - 1) * s, n * s, s, s) = -ds.C[static_cast<std::size_t>(n)];
  B.block((R - 1) * s, (R - 1) * s, s, s) = ds.C[static_cast<std::size_t>(R)];
  Eigen::GeneralizedEigenSolver<RMatrix> ges(A, B, false);
  DecayModes dm;
  std::vector<cd> finite;
  for (Eigen::Index i = 0; i < m; ++i) {
    const cd al = ges.alphas()(i);
    const double be = ges.betas()(i);
    if (std::abs(be) <= 1e-14 * std::abs(al)) continue;
    finite.push_back(al / be);
  }
  dm.eigenvalues = Eigen::Map<const CVector>(finite.data(), static_cast<Eigen::Index>(finite.size()));
  classify(dm);
  return dm;
}

DecayModes decay_modes(const DifferenceStencil& ds, std::string* route) {
  try {
    DecayModes dm = transfer_matrix(ds);
    if (route) *route = "transfer_matrix";
    return dm;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularLeadingBlock) throw;
  }
  if (route) *route = "pencil";
  return pencil_poles(ds);
}

namespace {

struct LineScan {
  std::vector<RationalPole> poles;
  double inner = 0.0;
  double outer = std::numeric_limits<double>::infinity();
  double fit_error = 0.0;
};

LineScan scan_line(const EvolutionStencil& ev, int axis, const std::vector<double>& k,
                   const PoleOptions& opts) {
  const int nb = ev.block();
  std::vector<cd> pts;
  std::vector<CVector> rows;
  for (double rho : opts.radii)
    for (int j = 0; j < opts.samples_per_circle; ++j) {
      const cd z = std::polar(rho, 2.0 * M_PI * (j + 0.5) / opts.samples_per_circle);
      std::vector<cd> zz(static_cast<std::size_t>(ev.dims));
      for (int a = 0; a < ev.dims; ++a)
        zz[static_cast<std::size_t>(a)] = a == axis ? z : std::polar(1.0, k[static_cast<std::size_t>(a)]);
      const MomentumBlock mb = momentum_block_z(ev, zz);
      const SmallLyapunovResult res = solve_lyapunov_small(mb.x, mb.x_minus, -mb.y, 1e-12, 2.0 * stencil_norm(ev));
      if (res.singular || !res.G.allFinite()) continue;
      pts.push_back(z);
      rows.push_back(Eigen::Map<const CVector>(res.G.data(), nb * nb));
    }
  CMatrix F(static_cast<Eigen::Index>(pts.size()), nb * nb);
  for (std::size_t i = 0; i < rows.size(); ++i) F.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  const RationalFit fit = aaa_fit(pts, F);
  LineScan out;
  out.fit_error = fit.scale > 0 ? fit.max_error / fit.scale : 0.0;
  for (const auto& p : rational_poles(fit)) {
    if (p.residue <= opts.residue_tol * std::max(fit.scale, 1e-300)) continue;
    const double a = std::abs(p.location);
    if (std::abs(a - 1.0) <= opts.unit_circle_tol)
      throw Error(ErrorKind::PoleOnUnitCircle, "gamma~ has a pole on the unit circle");
    out.poles.push_back(p);
    if (a < 1.0)
      out.inner = std::max(out.inner, a);
    else
      out.outer = std::min(out.outer, a);
  }
  return out;
}

double xi_of(double inner) { return inner > 0.0 ? -1.0 / std::log(inner) : 0.0; }

}  // namespace

PoleScan momentum_poles(const CouplingStencil& stencil, int axis, const PoleOptions& opts) {
  if (!stencil.quasifree())
    throw Error(ErrorKind::QuadraticNotSupported, "pole scan needs a quasifree stencil");
  const int D = stencil.lattice.dims;
  if (axis < 0 || axis >= D) throw Error(ErrorKind::InvalidArgument, "axis out of range");
  const EvolutionStencil ev = build_evolution_stencil(stencil);
  PoleScan out;
  if (D == 1) {
    const LineScan ls = scan_line(ev, 0, {0.0}, opts);
    out.poles = ls.poles;
    out.zeta_inner = ls.inner;
    out.zeta_outer = ls.outer;
    out.fit_error = ls.fit_error;
  } else {
    const int G = opts.transverse_grid > 0 ? opts.transverse_grid : (D == 2 ? 256 : 32);
    std::vector<int> sizes(static_cast<std::size_t>(D - 1), G);
    const GridShape tgrid(sizes);
    const std::size_t P = tgrid.points();
    std::vector<LineScan> scans(P);
    auto full_k = [&](std::size_t i) {
      const std::vector<double> kt = tgrid.momentum(i);
      std::vector<double> k(static_cast<std::size_t>(D), 0.0);
      for (int a = 0, t = 0; a < D; ++a)
        if (a != axis) k[static_cast<std::size_t>(a)] = kt[static_cast<std::size_t>(t++)];
      return k;
    };
    parallel_for(P, [&](std::size_t i) { scans[i] = scan_line(ev, axis, full_k(i), opts); });
    std::size_t arg = 0;
    double coarse_inner = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
      if (scans[i].inner > scans[arg].inner) arg = i;
      out.zeta_outer = std::min(out.zeta_outer, scans[i].outer);
      out.fit_error = std::max(out.fit_error, scans[i].fit_error);
      // the half-resolution grid is the subset of even indices
      bool even = true;
      for (int m : tgrid.at(i)) even = even && (m % 2 == 0);
      if (even) coarse_inner = std::max(coarse_inner, scans[i].inner);
    }
    out.poles = scans[arg].poles;
    out.zeta_inner = scans[arg].inner;
    out.argmax_k = tgrid.momentum(arg);
    if (opts.check_refinement) out.refinement_delta = std::abs(xi_of(out.zeta_inner) - xi_of(coarse_inner));
  }
  out.xi = xi_of(out.zeta_inner);
  out.xi_negative = std::isfinite(out.zeta_outer) ? 1.0 / std::log(out.zeta_outer) : 0.0;
  return out;
}

FitResult fit_exponential_decay(const std::vector<double>& r, const std::vector<double>& v,
                                const FitOptions& opts) {
  if (r.size() != v.size()) throw Error(ErrorKind::InvalidArgument, "r and value lengths differ");
  std::vector<std::pair<double, double>> s;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= opts.burn_in && std::abs(v[i]) > opts.floor && std::isfinite(v[i])) s.emplace_back(r[i], v[i]);
  std::sort(s.begin(), s.end());
  if (s.size() < 6) throw Error(ErrorKind::InsufficientData, "need at least six usable samples");

  FitResult out;
  bool same = true, alternating = true;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const bool flip = (s[i].second > 0) != (s[i - 1].second > 0);
    same = same && !flip;
    alternating = alternating && flip && s[i].first - s[i - 1].first == 1.0;
  }
  std::vector<double> xs, ys;
  if (same || alternating) {
    for (const auto& [x, y] : s) {
      xs.push_back(x);
      ys.push_back(std::log(std::abs(y)));
    }
    out.sign = (alternating && !same) ? -1.0 : 1.0;
  } else {
    out.oscillatory = true;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i].first - s[i - 1].first != 1.0 || s[i + 1].first - s[i].first != 1.0) continue;
      const double c = std::abs(s[i].second * s[i].second - s[i - 1].second * s[i + 1].second);
      if (c <= opts.floor * opts.floor) continue;
      xs.push_back(s[i].first);
      ys.push_back(0.5 * std::log(c));
    }
    if (xs.size() < 3) throw Error(ErrorKind::InsufficientData, "envelope needs consecutive samples");
  }
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  const double icpt = my - slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (icpt + slope * xs[i]);
    ss += e * e;
  }
  out.rate = std::exp(slope);
  out.prefactor = std::exp(icpt);
  out.rms = std::sqrt(ss / n);
  out.exponential = out.rms <= opts.rms_threshold;
  out.samples = n;
  return out;
}

}  // namespace lindcorr
