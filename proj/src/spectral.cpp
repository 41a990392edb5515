#include "lindcorr/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "lindcorr/error.hpp"

namespace lindcorr {

namespace {

constexpr double kDegeneracyTol = 1e-9;
constexpr double kClusterTol = 1e-7;

// A Jordan block splits into eigenvalues about sqrt(eps) apart; the cluster mean stays accurate.
CVector merge_clusters(const CVector& e) {
  const Eigen::Index n = e.size();
  const double tol = kClusterTol * std::max(1.0, e.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> root(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) root[i] = i;
  auto find = [&](Eigen::Index i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(e(i) - e(j)) < tol) root[find(j)] = find(i);
  std::vector<cd> sum(static_cast<std::size_t>(n), cd(0.0));
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    sum[find(i)] += e(i);
    ++count[find(i)];
  }
  CVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = sum[find(i)] / static_cast<double>(count[find(i)]);
  return out;
}

GapPoint gap_from_spectrum(const CVector& ev) {
  GapPoint gp;
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i).real() > best) {
      best = ev(i).real();
      gp.top_eigenvalue = ev(i);
    }
  int count = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i).real() > best - kDegeneracyTol) ++count;
  gp.degenerate = count > 1;
  gp.gap = -best + 0.0;
  return gp;
}

}  // namespace

double GapCurve::min_gap() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : points) m = std::min(m, p.gap);
  return m;
}

std::vector<std::size_t> GapCurve::closed(double tol) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].gap <= tol) out.push_back(i);
  return out;
}

GapPoint dissipative_gap_momentum(const CouplingStencil& stencil, const std::vector<int>& grid) {
  if (!stencil.quasifree())
    throw Error(ErrorKind::QuadraticNotSupported, "momentum gap needs a quasifree stencil");
  const EvolutionStencil ev = build_evolution_stencil(stencil);
  const GridShape shape(grid);
  const std::size_t P = shape.points();
  std::vector<double> top(P);
  std::vector<cd> top_ev(P);
  parallel_for(P, [&](std::size_t i) {
    const MomentumBlock mb = momentum_block(ev, shape.momentum(i));
    Eigen::ComplexEigenSolver<CMatrix> es(mb.x, false);
    const CVector e = merge_clusters(es.eigenvalues());
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < e.size(); ++j)
      if (e(j).real() > e(arg).real()) arg = j;
    top[i] = e(arg).real();
    top_ev[i] = e(arg);
  });
  const std::size_t arg = static_cast<std::size_t>(std::max_element(top.begin(), top.end()) - top.begin());
  GapPoint gp;
  gp.gap = -top[arg] + 0.0;
  gp.top_eigenvalue = top_ev[arg];
  gp.argmax_k = shape.momentum(arg);
  for (auto& k : gp.argmax_k)
    if (k >= 2.0 * M_PI - 1e-12) k = 0.0;
  int count = 0;
  for (double v : top)
    if (v > top[arg] - kDegeneracyTol) ++count;
  gp.degenerate = count > 1;
  return gp;
}

GapPoint dissipative_gap_dense(const DenseEvolution& ev) {
  Eigen::EigenSolver<RMatrix> es(ev.X, false);
  return gap_from_spectrum(merge_clusters(es.eigenvalues()));
}

GapPoint dissipative_gap(const CouplingStencil& stencil, const std::vector<int>& grid) {
  if (stencil.quasifree()) return dissipative_gap_momentum(stencil, grid);
  return dissipative_gap_dense(build_dense(stencil, LatticeSpec::finite(grid, stencil.lattice.bands)));
}

CouplingStencil append_aux_dissipator(const CouplingStencil& stencil, double kappa) {
  if (kappa < 0) throw Error(ErrorKind::NegativeRate, "kappa must be >= 0");
  CouplingStencil out = stencil;
  if (kappa == 0.0) return out;
  const int n = stencil.block();
  const double a = std::sqrt(kappa);
  const Displacement o = stencil.origin();
  for (int c = 0; c < stencil.lattice.bands; ++c) {
    if (stencil.statistics == Statistics::Fermion) {
      for (int mu = 0; mu < 2; ++mu) {
        CVector v = CVector::Zero(n);
        v(2 * c + mu) = a;
        out.ell.push_back({{o, v}});
      }
    } else {
      CVector v = CVector::Zero(n);
      v(2 * c) = a;
      v(2 * c + 1) = cd(0, -a);
      out.ell.push_back({{o, v}});
    }
  }
  return out;
}

CouplingStencil convex_combination(const CouplingStencil& a, const CouplingStencil& b, double g) {
  if (a.statistics != b.statistics || a.lattice.dims != b.lattice.dims ||
      a.lattice.bands != b.lattice.bands)
    throw Error(ErrorKind::InvalidArgument, "path endpoints must share statistics and lattice");
  CouplingStencil out = empty_stencil(a.statistics, a.lattice);
  for (const auto& [r, m] : a.h) out.h[r] = (1.0 - g) * m;
  for (const auto& [r, m] : b.h) {
    auto it = out.h.find(r);
    if (it == out.h.end())
      out.h[r] = g * m;
    else
      it->second += g * m;
  }
  const double sa = std::sqrt(std::max(0.0, 1.0 - g)), sb = std::sqrt(std::max(0.0, g));
  auto add_families = [&](const CouplingStencil& src, double s) {
    if (s == 0.0) return;
    for (auto es : src.ell) {
      for (auto& [r, v] : es) v *= s;
      out.ell.push_back(std::move(es));
    }
    for (auto mu : src.m) {
      for (auto& [rr, m] : mu) m *= s;
      out.m.push_back(std::move(mu));
    }
  };
  add_families(a, sa);
  add_families(b, sb);
  return out;
}

void PathSpec::check() const {
  if (schedule.size() < 2) throw Error(ErrorKind::InvalidArgument, "path schedule needs two waypoints");
  const auto& f = schedule.front();
  const auto& l = schedule.back();
  if (f.g != 0.0 || f.kappa != 0.0 || l.g != 1.0 || l.kappa != 0.0)
    throw Error(ErrorKind::InvalidArgument, "path schedule must run from (0,0) to (1,0)");
  for (const auto& w : schedule)
    if (w.kappa < 0) throw Error(ErrorKind::NegativeRate, "path kappa must be >= 0");
  if (!family) {
    if (!validate_stencil(start).pass || !validate_stencil(end).pass)
      throw Error(ErrorKind::InvalidArgument, "path endpoints fail validation");
  }
}

CouplingStencil PathSpec::at(double g) const {
  return family ? family(g) : convex_combination(start, end, g);
}

GapCurve gap_along_path(const PathSpec& path, std::size_t samples_per_leg,
                        const std::vector<int>& grid) {
  path.check();
  if (samples_per_leg < 2) samples_per_leg = 2;
  struct Sample {
    double s, g, kappa;
  };
  std::vector<Sample> samples;
  const std::size_t legs = path.schedule.size() - 1;
  for (std::size_t leg = 0; leg < legs; ++leg) {
    const auto& a = path.schedule[leg];
    const auto& b = path.schedule[leg + 1];
    for (std::size_t i = (leg == 0 ? 0 : 1); i < samples_per_leg; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(samples_per_leg - 1);
      samples.push_back({leg + t, a.g + t * (b.g - a.g), a.kappa + t * (b.kappa - a.kappa)});
    }
  }
  GapCurve curve;
  curve.parameter_name = "path";
  curve.points.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    GapPoint gp = dissipative_gap(append_aux_dissipator(path.at(s.g), s.kappa), grid);
    gp.parameter = s.s;
    gp.g = s.g;
    gp.kappa = s.kappa;
    curve.points[i] = gp;
  }
  return curve;
}

LiouvillianSpectrum dense_liouvillian_fermion(const CouplingStencil& input,
                                              const LatticeSpec& lattice, double zero_tol) {
  if (input.statistics != Statistics::Fermion)
    throw Error(ErrorKind::InvalidArgument, "dense Liouvillian oracle is fermion-only");
  if (!lattice.is_finite()) throw Error(ErrorKind::InvalidArgument, "needs a finite lattice");
  const std::size_t N = lattice.modes();
  if (N > 5) throw Error(ErrorKind::TooLarge, "dense Liouvillian limited to N <= 5 modes");
  const CouplingStencil st = canonicalize(input);
  const int nb = st.block();
  const std::size_t cells = lattice.cells();
  const std::size_t d = std::size_t{1} << N;
  const cd I(0, 1);

  // Jordan-Wigner annihilators; bit j of a basis index is the occupation of mode j
  std::vector<CMatrix> W(2 * N);
  for (std::size_t j = 0; j < N; ++j) {
    CMatrix a = CMatrix::Zero(d, d);
    for (std::size_t s = 0; s < d; ++s) {
      if (!(s >> j & 1)) continue;
      int parity = 0;
      for (std::size_t l = 0; l < j; ++l) parity += (s >> l) & 1;
      a(s ^ (std::size_t{1} << j), s) = (parity % 2) ? -1.0 : 1.0;
    }
    const CMatrix ad = a.adjoint();
    W[2 * j] = (a + ad) / std::sqrt(2.0);
    W[2 * j + 1] = I * (a - ad) / std::sqrt(2.0);
  }
  auto quad = [&](const CMatrix& M) {
    CMatrix op = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j = 0; j < M.cols(); ++j)
        if (M(i, j) != cd(0)) op += M(i, j) * W[i] * W[j];
    return op;
  };

  const std::size_t dim = 2 * N;
  CMatrix H = CMatrix::Zero(dim, dim);
  std::vector<CVector> Ls;
  std::vector<CMatrix> Ms;
  for (std::size_t n = 0; n < cells; ++n) {
    const Displacement cn = lattice.cell_at(n);
    for (const auto& [r, hr] : st.h) {
      const std::size_t i = lattice.cell_index(add(cn, r));
      H.block(i * nb, n * nb, nb, nb) += hr;
    }
    for (const auto& es : st.ell) {
      CVector L = CVector::Zero(dim);
      for (const auto& [r, v] : es) L.segment(lattice.cell_index(add(cn, r)) * nb, nb) += v;
      Ls.push_back(L);
    }
    for (const auto& mu : st.m) {
      CMatrix M = CMatrix::Zero(dim, dim);
      for (const auto& [rr, m] : mu)
        M.block(lattice.cell_index(add(cn, rr.first)) * nb, lattice.cell_index(add(cn, rr.second)) * nb,
                nb, nb) += m;
      Ms.push_back(M);
    }
  }

  const CMatrix Id = CMatrix::Identity(d, d);
  auto kron = [](const CMatrix& A, const CMatrix& B) {
    CMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      for (Eigen::Index j = 0; j < A.cols(); ++j)
        K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
  };
  const CMatrix Hop = quad(H);
  CMatrix Lv = -I * (kron(Id, Hop) - kron(Hop.transpose(), Id));
  auto dissipate = [&](const CMatrix& L) {
    const CMatrix LdL = L.adjoint() * L;
    Lv += kron(L.conjugate(), L) - 0.5 * kron(Id, LdL) - 0.5 * kron(LdL.transpose(), Id);
  };
  for (const auto& l : Ls) {
    CMatrix op = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < l.size(); ++i)
      if (l(i) != cd(0)) op += l(i) * W[i];
    dissipate(op);
  }
  for (const auto& M : Ms) dissipate(quad(M));

  LiouvillianSpectrum out;
  Eigen::ComplexEigenSolver<CMatrix> es(Lv, false);
  out.eigenvalues = es.eigenvalues();
  out.matrix = std::move(Lv);
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i)
    if (std::abs(out.eigenvalues(i)) > zero_tol) best = std::max(best, out.eigenvalues(i).real());
  out.gap = std::isfinite(best) ? -best + 0.0 : 0.0;
  return out;
}

}  // namespace lindcorr
