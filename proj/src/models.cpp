#include "lindcorr/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lindcorr/error.hpp"
#include "lindcorr/special_functions.hpp"

namespace lindcorr {

namespace {

const cd I(0, 1);

CMatrix pauli_x() {
  CMatrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

CMatrix pauli_y() {
  CMatrix s(2, 2);
  s << 0, -I, I, 0;
  return s;
}

CVector vec2(cd a, cd b) {
  CVector v(2);
  v << a, b;
  return v;
}

LatticeSpec lattice_for(int D, const std::vector<int>& extent) {
  if (extent.empty()) return LatticeSpec::infinite(D, 1);
  if (static_cast<int>(extent.size()) != D)
    throw Error(ErrorKind::InvalidArgument, "extent length does not match the dimension");
  return LatticeSpec::finite(extent, 1);
}

}  // namespace

CouplingStencil critical_boson_stencil(const CriticalBosonParams& p) {
  if (p.D < 1) throw Error(ErrorKind::InvalidArgument, "critical boson model needs D >= 1");
  if (p.eta < 0) throw Error(ErrorKind::NegativeRate, "eta must be >= 0");
  CouplingStencil st = empty_stencil(Statistics::Boson, lattice_for(p.D, p.extent));
  const Displacement o(p.D, 0);
  st.ell.push_back({{o, std::sqrt(2.0 * p.D * p.eta) * vec2(1.0, -I)}});
  for (int a = 0; a < p.D; ++a)
    for (int sgn : {1, -1}) {
      Displacement e(p.D, 0);
      e[a] = sgn;
      st.ell.push_back({{o, vec2(1.0, 0.0)}, {e, vec2(0.0, I)}});
    }
  for (int a = 0; a < p.D; ++a)
    for (int sgn : {1, -1}) {
      Displacement e(p.D, 0);
      e[a] = sgn;
      st.ell.push_back({{o, vec2(1.0, 0.0)}, {e, vec2(0.0, static_cast<double>(sgn))}});
    }
  return st;
}

MomentumBlock critical_boson_momentum(const CriticalBosonParams& p, const std::vector<double>& k) {
  double c = 0.0, s = 0.0;
  for (double ka : k) {
    c += std::cos(ka);
    s += std::sin(ka);
  }
  c /= p.D;
  s /= p.D;
  const double D2 = 2.0 * p.D;
  MomentumBlock mb;
  mb.x = D2 * (c - p.eta) * CMatrix::Identity(2, 2);
  mb.x_minus = mb.x;
  mb.y.resize(2, 2);
  mb.y << D2 * (p.eta + 2.0), D2 * I * s, -D2 * I * s, D2 * (p.eta + 2.0);
  return mb;
}

CMatrix critical_boson_gamma_k(const CriticalBosonParams& p, const std::vector<double>& k) {
  double c = 0.0, s = 0.0;
  for (double ka : k) {
    c += std::cos(ka);
    s += std::sin(ka);
  }
  c /= p.D;
  s /= p.D;
  const double den = 2.0 * (p.eta - c);
  CMatrix g(2, 2);
  g << (p.eta + 2.0) / den, I * s / den, -I * s / den, (p.eta + 2.0) / den;
  return g;
}

CriticalBoson1D critical_boson_exact_1d(int r, double eta) {
  CriticalBoson1D out;
  if (eta < 1.0)
    throw Error(ErrorKind::GaplessInput, "critical boson model is unstable for eta < 1");
  const int ar = std::abs(r);
  const int sgn = r > 0 ? 1 : (r < 0 ? -1 : 0);
  if (eta == 1.0) {
    out.gapless_limit = true;
    out.gpp = std::numeric_limits<double>::infinity();
    out.gpm = -0.5 * sgn;
    return out;
  }
  const double root = std::sqrt(eta * eta - 1.0);
  const double zm = eta - root;
  out.gpp = (eta + 2.0) * std::pow(zm, ar) / (2.0 * root);
  // the (+,-) integrand is odd in k, so r = 0 vanishes
  out.gpm = ar == 0 ? 0.0 : -sgn * std::pow(zm, ar - 1) * (1.0 - zm * zm) / (4.0 * root);
  return out;
}

D2Constant critical_boson_d2_constant() {
  D2Constant c;
  const double x = 1.0 / std::sqrt(M_PI);
  c.fresnel_integral = 2.0 * std::sin(0.5) + 2.0 * std::cos(0.5) +
                       2.0 * std::sqrt(M_PI) * (special::fresnel_s(x) - special::fresnel_c(x));
  c.value = -2.0 * std::log(2.0) + std::sqrt(2.0 / M_PI) * c.fresnel_integral;
  return c;
}

CriticalBosonAsymptotic critical_boson_asymptotics(int D, double eta, const std::vector<double>& r,
                                                   double K) {
  if (D != 2 && D != 3)
    throw Error(ErrorKind::UnsupportedDimension, "asymptotic laws exist for D = 2 and D = 3");
  if (static_cast<int>(r.size()) != D)
    throw Error(ErrorKind::InvalidArgument, "position has the wrong dimension");
  double rn = 0.0;
  for (double v : r) rn += v * v;
  rn = std::sqrt(rn);
  if (rn == 0.0) throw Error(ErrorKind::InvalidArgument, "asymptotic laws need r != 0");
  CriticalBosonAsymptotic out;
  if (D == 2) {
    const double phi = std::atan2(r[1], r[0]);
    out.gpp = eta > 1.0 ? (eta + 2.0) / M_PI *
                              (-std::log(std::sqrt(eta - 1.0)) + critical_boson_d2_constant().value -
                               std::log(rn))
                        : std::numeric_limits<double>::quiet_NaN();
    out.gpm = -std::sin(phi + M_PI_4) / (std::sqrt(2.0) * M_PI * rn) *
              (1.0 - special::bessel_j0(K * rn));
  } else {
    out.gpp = 9.0 / (2.0 * M_PI * M_PI * rn) * special::sine_integral(K * rn);
    const double proj = (r[0] + r[1] + r[2]) / rn;
    out.gpm = -proj / (2.0 * M_PI * M_PI * rn * rn) * (M_PI_2 - std::sin(K * rn));
  }
  return out;
}

CouplingStencil xy_chain_stencil(const XYChainParams& p) {
  if (p.eta < 0) throw Error(ErrorKind::NegativeRate, "eta must be >= 0");
  if (p.zeta < 0) throw Error(ErrorKind::NegativeRate, "zeta must be >= 0");
  CouplingStencil st = empty_stencil(Statistics::Fermion, lattice_for(1, p.extent));
  const CMatrix sx = pauli_x(), sy = pauli_y();
  if (p.mu != 0.0) st.h[{0}] = -0.5 * p.mu * sy;
  st.h[{1}] = 0.5 * (sy - I * p.alpha * sx);
  st.h[{-1}] = 0.5 * (sy + I * p.alpha * sx);
  if (p.eta > 0.0) {
    const double se = std::sqrt(p.eta);
    st.ell.push_back({{{0}, vec2(se, 0.0)}, {{1}, vec2(se * std::exp(I * p.phi), 0.0)}});
  }
  if (p.zeta > 0.0) st.m.push_back({{{{0}, {0}}, std::sqrt(p.zeta) * sy}});
  return st;
}

CouplingStencil xy_chain_raw_stencil(const XYChainParams& p) {
  CouplingStencil st = xy_chain_stencil(p);
  st.h.clear();
  const CMatrix sx = pauli_x(), sy = pauli_y();
  if (p.mu != 0.0) st.h[{0}] = -0.5 * p.mu * sy;
  st.h[{-1}] = sy + I * p.alpha * sx;
  return st;
}

std::pair<cd, cd> xy_chain_xi(const XYChainParams& p, double k) {
  const double f = -2.0 * p.eta * (1.0 + std::cos(p.phi) * std::cos(k));
  const cd c(p.mu - 2.0 * std::cos(k), 2.0 * p.alpha * std::sin(k));
  const cd root = std::sqrt(cd(f * f - 4.0 * std::norm(c), 0.0));
  return {0.5 * (f + root), 0.5 * (f - root)};
}

XYGap xy_chain_gap(const XYChainParams& p, int grid) {
  auto top = [&](double k) {
    const auto [a, b] = xy_chain_xi(p, k);
    return std::max(a.real(), b.real());
  };
  double best = -std::numeric_limits<double>::infinity();
  int arg = 0;
  for (int i = 0; i < grid; ++i) {
    const double v = top(2.0 * M_PI * i / grid);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  // golden-section refinement inside the neighbouring grid cells
  const double h = 2.0 * M_PI / grid;
  double lo = (arg - 1) * h, hi = (arg + 1) * h;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = top(a), fb = top(b);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = top(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = top(b);
    }
  }
  const double kr = 0.5 * (lo + hi);
  XYGap out;
  out.argmax_k = arg * h;
  const double vr = top(kr);
  if (vr > best) {
    best = vr;
    out.argmax_k = std::fmod(kr + 2.0 * M_PI, 2.0 * M_PI);
  }
  out.gap = -best + 0.0;
  return out;
}

XYExactGamma xy_chain_exact_gamma(int r, double phi, double eta) {
  if (!(eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "exact correlator needs eta > 0");
  XYExactGamma out;
  const double s = std::sin(phi), c = std::cos(phi);
  const int ar = std::abs(r);
  const int sgn = r > 0 ? 1 : (r < 0 ? -1 : 0);
  if (std::abs(c) < 1e-14) {
    out.phase_singular = true;
    out.z_minus = 0.0;
    out.value = ar == 1 ? sgn * 0.5 * s / (1.0 + std::abs(s)) : 0.0;
    return out;
  }
  out.z_minus = -(1.0 - std::abs(s)) / c;
  out.value = ar == 0 ? 0.0 : sgn * 0.5 * s / (1.0 + std::abs(s)) * std::pow(out.z_minus, ar - 1);
  return out;
}

}  // namespace lindcorr
