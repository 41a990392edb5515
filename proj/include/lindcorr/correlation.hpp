#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lindcorr/covariance_field.hpp"
#include "lindcorr/rational.hpp"
#include "lindcorr/stencil.hpp"

namespace lindcorr {

/// sum_n C_n vec gamma(r + n) = 0 away from the inhomogeneous support, with
/// C_n = x(d - n) (x) 1 + 1 (x) x(n - d), n = 0..R = 2d, and row-major vec
/// (entry p * 2b + q holds gamma_{pq}).
struct DifferenceStencil {
  int bands = 1;
  int d = 1;
  std::vector<RMatrix> C;
  /// Largest |r| with y(r) or a Z term nonzero.
  int inhomogeneous_range = 0;

  int R() const { return static_cast<int>(C.size()) - 1; }
  int size() const { return 4 * bands * bands; }
};

/// Throws NotOneDimensional for D != 1.
DifferenceStencil build_difference_stencil(const CouplingStencil& stencil);

/// Max-entry norm of sum_n C_n vec gamma(r + n) over r in [r_min, r_max].
double difference_residual(const DifferenceStencil& ds, const CovarianceField& field, int r_min,
                           int r_max);

struct DecayModes {
  RMatrix matrix;             // transfer matrix (empty for the pencil route)
  CVector eigenvalues;        // all eigenvalues / all beta = 1/z
  std::vector<cd> modes;      // nonzero eigenvalues with |beta| <= 1 + 1e-9
  std::vector<int> multiplicity;
  std::vector<cd> marginal;   // modes with | |beta| - 1 | <= 1e-9
};

/// Companion-block transfer matrix with first block row [A_{R-1} ... A_0],
/// A_m = -C_R^{-1} C_m. Throws SingularLeadingBlock when cond(C_R) >= 1e12.
DecayModes transfer_matrix(const DifferenceStencil& ds);

/// Roots of det L(z), L(z) = sum_n z^{R-n} C_n, as generalized eigenvalues of
/// the companion pencil in beta = 1/z; decay modes are the finite beta with
/// |beta| <= 1 + 1e-9.
/// Throws IrregularPencil when det L vanishes at all random probe points.
DecayModes pencil_poles(const DifferenceStencil& ds);

/// Transfer matrix, falling back to the pencil when C_R is singular.
DecayModes decay_modes(const DifferenceStencil& ds, std::string* route = nullptr);

struct PoleScan {
  std::vector<RationalPole> poles;  // 1D: all poles; D >= 2: poles at the maximizing transverse k
  double zeta_inner = 0.0;          // max |zeta| over poles inside the unit circle
  double zeta_outer = std::numeric_limits<double>::infinity();  // min |zeta| over poles outside
  double xi = 0.0;                  // -1 / ln zeta_inner (0 when no interior pole)
  double xi_negative = 0.0;         // 1 / ln zeta_outer
  std::vector<double> argmax_k;     // transverse momenta of the maximum
  double refinement_delta = 0.0;    // change of xi under transverse grid doubling
  double fit_error = 0.0;
};

struct PoleOptions {
  std::vector<double> radii{0.90, 0.95, 0.99, 1.0, 1.0 / 0.99, 1.0 / 0.95, 1.0 / 0.90};
  int samples_per_circle = 64;
  double residue_tol = 1e-9;   // relative to the sample scale
  double unit_circle_tol = 1e-6;
  int transverse_grid = 0;     // 0: 256 for D = 2, 32 per axis for D = 3
  bool check_refinement = true;
};

/// Poles of gamma~ as a function of z = e^{i k_a}, others fixed on a real grid.
/// Throws PoleOnUnitCircle when a pole lies on |z| = 1.
PoleScan momentum_poles(const CouplingStencil& stencil, int axis = 0, const PoleOptions& opts = {});

struct FitResult {
  double rate = 0.0;       // decay modulus per site
  double sign = 1.0;       // -1 for alternating data
  double prefactor = 0.0;
  double rms = 0.0;        // rms of the log residual
  bool oscillatory = false;
  bool exponential = true;  // rms below threshold
  std::size_t samples = 0;
};

struct FitOptions {
  double burn_in = 0.0;  // samples with r < burn_in are dropped
  double floor = 1e-14;
  double rms_threshold = 0.05;
};

/// Least squares on log|v| against r. Data with mixed sign pattern is fitted
/// through the envelope sqrt|v(r)^2 - v(r-1) v(r+1)| (needs consecutive r).
/// Throws InsufficientData below six usable samples.
FitResult fit_exponential_decay(const std::vector<double>& r, const std::vector<double>& v,
                                const FitOptions& opts = {});

struct DecayReport {
  std::string route;
  DecayModes modes;
  std::optional<PoleScan> poles;
  std::vector<double> xi_bound;  // one per direction
  std::optional<FitResult> fit;
  double difference_residual = 0.0;
};

}  // namespace lindcorr
