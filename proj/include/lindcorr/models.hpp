#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "lindcorr/evolution.hpp"

namespace lindcorr {

/// Purely dissipative boson model with one mode per site and 4D+1 Lindblad
/// families per site. Stable for eta >= 1, gapless at eta = 1.
struct CriticalBosonParams {
  int D = 1;
  double eta = 1.0;
  std::vector<int> extent;  // empty: infinite lattice
};

CouplingStencil critical_boson_stencil(const CriticalBosonParams& p);

/// Closed forms of the momentum blocks:
///   x~(k) = 2D (c_k - eta) 1,  y~(k) = 2D [[eta+2, i s_k], [-i s_k, eta+2]].
MomentumBlock critical_boson_momentum(const CriticalBosonParams& p, const std::vector<double>& k);

/// gamma~(k): diagonal (eta+2) / (2(eta - c_k)), (+,-) entry i s_k / (2(eta - c_k)).
CMatrix critical_boson_gamma_k(const CriticalBosonParams& p, const std::vector<double>& k);

struct CriticalBoson1D {
  double gpp = 0.0;  // gamma_{+,+}(r) = gamma_{-,-}(r)
  double gpm = 0.0;  // gamma_{+,-}(r) = -gamma_{-,+}(r)
  bool gapless_limit = false;
};

/// Exact thermodynamic-limit correlators in one dimension, any integer r.
/// eta = 1 returns the limit (gpp = +inf, gpm = -1/2 sign(r)) flagged;
/// eta < 1 throws GaplessInput.
CriticalBoson1D critical_boson_exact_1d(int r, double eta);

struct CriticalBosonAsymptotic {
  double gpp = 0.0;
  double gpm = 0.0;
};

/// Large-r asymptotic laws with momentum cutoff K.
///   D = 2: gpp = (eta+2)/pi (-ln sqrt(eta-1) + c2 - ln r)  (needs eta > 1)
///          gpm = -sin(phi_r + pi/4) / (sqrt2 pi r) (1 - J0(K r))
///   D = 3 (eta = 1 forms): gpp = 9/(2 pi^2 r) Si(K r)
///          gpm = -(rhat . (1,1,1)) / (2 pi^2 r^2) (pi/2 - sin(K r))
CriticalBosonAsymptotic critical_boson_asymptotics(int D, double eta, const std::vector<double>& r,
                                                   double K = M_PI);

/// Constant c2 = -2 ln 2 + sqrt(2/pi) I with
/// I = 2 sin(1/2) + 2 cos(1/2) + 2 sqrt(pi) [S(pi^{-1/2}) - C(pi^{-1/2})].
struct D2Constant {
  double fresnel_integral = 0.0;  // I ~ 1.0909
  double value = 0.0;             // ~ -0.5159
};
D2Constant critical_boson_d2_constant();

/// Dissipative fermion chain with pairing and optional on-site dephasing.
struct XYChainParams {
  double mu = 0.0;
  double alpha = 0.2;
  double eta = 1.0;
  double phi = 0.0;
  double zeta = 0.0;
  std::vector<int> extent;  // empty: infinite chain
};

/// h(0) = -(mu/2) sigma_y, h(+-1) = (sigma_y -+ i alpha sigma_x)/2,
/// ell(0) = sqrt(eta) e_+, ell(1) = sqrt(eta) e^{i phi} e_+, m(0,0) = sqrt(zeta) sigma_y.
CouplingStencil xy_chain_stencil(const XYChainParams& p);

/// The Hamiltonian in the raw two-site form w_j^T (sigma_y + i alpha sigma_x) w_{j+1}
/// - (mu/2) w_j^T sigma_y w_j, i.e. h(-1) = sigma_y + i alpha sigma_x and h(0) = -(mu/2) sigma_y.
CouplingStencil xy_chain_raw_stencil(const XYChainParams& p);

/// Eigenvalues xi_+(k), xi_-(k) of x~(k) for zeta = 0.
std::pair<std::complex<double>, std::complex<double>> xy_chain_xi(const XYChainParams& p, double k);

struct XYGap {
  double gap = 0.0;
  double argmax_k = 0.0;
};

/// Delta = -max_k Re xi_+(k) on a dense grid with golden-section refinement.
XYGap xy_chain_gap(const XYChainParams& p, int grid = 4096);

struct XYExactGamma {
  double value = 0.0;  // gamma(r) = value * 1
  double z_minus = 0.0;
  bool phase_singular = false;  // cos(phi) = 0: continuity limit returned
};

/// Exact quasifree correlator, independent of mu and alpha.
XYExactGamma xy_chain_exact_gamma(int r, double phi, double eta = 1.0);

}  // namespace lindcorr
