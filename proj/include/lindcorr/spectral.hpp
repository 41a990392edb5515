#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lindcorr/evolution.hpp"

namespace lindcorr {

struct GapPoint {
  double parameter = 0.0;
  double gap = 0.0;  // negative values flag instability
  std::vector<double> argmax_k;  // empty for the dense route
  cd top_eigenvalue = 0.0;
  bool degenerate = false;  // more than one eigenvalue attains the maximum real part
  double g = 0.0;
  double kappa = 0.0;
};

struct GapCurve {
  std::string parameter_name = "parameter";
  std::vector<GapPoint> points;

  double min_gap() const;
  /// Samples with gap <= tol.
  std::vector<std::size_t> closed(double tol = 0.0) const;
};

/// Momentum route for quasifree stencils on the given grid, dense route on the
/// finite lattice with extent = grid otherwise.
GapPoint dissipative_gap(const CouplingStencil& stencil, const std::vector<int>& grid);

GapPoint dissipative_gap_momentum(const CouplingStencil& stencil, const std::vector<int>& grid);
GapPoint dissipative_gap_dense(const DenseEvolution& ev);

/// Adds on-site Lindblad operators sqrt(kappa) w_{i,+-} (fermions) or
/// sqrt(kappa) (w_{i+} - i w_{i-}) (bosons) for every band. kappa = 0 returns
/// the stencil unchanged.
CouplingStencil append_aux_dissipator(const CouplingStencil& stencil, double kappa);

struct PathWaypoint {
  double g = 0.0;
  double kappa = 0.0;
};

struct PathSpec {
  CouplingStencil start;
  CouplingStencil end;
  std::vector<PathWaypoint> schedule{{0.0, 0.0}, {1.0, 0.0}};
  /// Optional stencil family; the default is the convex combination of the endpoints.
  std::function<CouplingStencil(double)> family;

  CouplingStencil at(double g) const;
  void check() const;
};

/// (1-g) L_1 + g L_2 at the Liouvillian level: h scales with (1-g), g; every
/// Lindblad family of an endpoint keeps its shape with amplitude sqrt(1-g) or sqrt(g).
CouplingStencil convex_combination(const CouplingStencil& a, const CouplingStencil& b, double g);

/// Gap at samples_per_leg points per schedule leg (end points shared). The
/// curve parameter is the leg index plus the fraction along the leg.
GapCurve gap_along_path(const PathSpec& path, std::size_t samples_per_leg,
                        const std::vector<int>& grid);

struct LiouvillianSpectrum {
  CMatrix matrix;
  CVector eigenvalues;
  double gap = 0.0;  // -max Re over eigenvalues with |lambda| > zero_tol
};

/// Full 4^N x 4^N Liouvillian of a fermionic model on a finite lattice with
/// N <= 5 modes, built from Jordan-Wigner Majoranas w+ = (a + a^dag)/sqrt2,
/// w- = i(a - a^dag)/sqrt2 and column-stacked density matrices.
LiouvillianSpectrum dense_liouvillian_fermion(const CouplingStencil& stencil,
                                              const LatticeSpec& lattice, double zero_tol = 1e-9);

}  // namespace lindcorr
