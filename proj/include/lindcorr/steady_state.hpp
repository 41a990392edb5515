#pragma once

#include <vector>

#include "lindcorr/covariance_field.hpp"
#include "lindcorr/evolution.hpp"

namespace lindcorr {

struct DenseSolveOptions {
  double residual_factor = 1e-9;  // accept ||R|| <= factor * (||X|| + ||Y||), max-entry norms
  std::size_t kron_limit = 64;    // explicit vectorized system when 2N <= this and Z terms exist
};

struct DenseSteadyState {
  RMatrix Gamma;
  CovarianceField field;
};

/// Steady state of X G + G X^T + sum_u Z_u G Z_u^T = -Y on the finite lattice.
///   no Z terms:          Schur-form Lyapunov solve
///   Z terms, 2N small:   sparse LU of the 4N^2 vectorized system
///   Z terms, 2N large:   sparse LU of the translation-reduced system (unknowns gamma(r))
/// The full residual is recomputed in every case.
DenseSteadyState solve_steady_dense_full(const DenseEvolution& ev,
                                         const DenseSolveOptions& opts = {});

CovarianceField solve_steady_dense(const DenseEvolution& ev, const DenseSolveOptions& opts = {});

/// Max-entry norm of X G + G X^T + sum Z G Z^T + Y.
double steady_residual(const DenseEvolution& ev, const RMatrix& Gamma);

/// Translation average gamma(r) = (1/cells) sum_j Gamma_{j+r, j}.
CovarianceField extract_translation_average(const DenseEvolution& ev, const RMatrix& Gamma);

/// Assembles the block-circulant Gamma from gamma(r).
RMatrix assemble_gamma(const CovarianceField& field, const LatticeSpec& lattice);

/// Solves x~ G + G x~^T(-k) = -y~ for one momentum. Throws SingularAtK.
/// `scale` is the reference size for the singularity test (see solve_lyapunov_small).
CMatrix solve_lyapunov_k(const MomentumBlock& blk, const std::vector<double>& k,
                         double* residual = nullptr, double scale = 0.0);

struct MomentumSolveOptions {
  bool skip_singular = false;  // drop singular k points (gamma~ set to 0) instead of throwing
  /// Adds the finite-box correction of an isotropic A/|k|^2 singularity at k = 0 to
  /// gamma(r) (D = 3 only, requires skip_singular).
  bool zero_mode_correction = false;
  double correction_delta = 1e-3;
};

/// Lyapunov solve on every point of the uniform grid, then inverse FFT.
CovarianceField solve_steady_momentum(const CouplingStencil& stencil, const std::vector<int>& grid,
                                      const MomentumSolveOptions& opts = {});

/// Largest change of the listed gamma(r) entries between the grid and the grid
/// with every size halved.
double grid_refinement_delta(const CouplingStencil& stencil, const std::vector<int>& grid,
                             const std::vector<Displacement>& displacements,
                             const MomentumSolveOptions& opts = {});

struct EvolveOptions {
  double dt = 0.0;  // 0 selects 0.1 / ||X||_inf
  double t_max = 1e4;
  double stop_tol = 1e-10;
  double divergence_bound = 1e8;
  std::size_t sample_every = 100;
};

struct TrajectorySample {
  double t = 0.0;
  double gamma_max = 0.0;
  double derivative_max = 0.0;
};

struct EvolveResult {
  RMatrix Gamma;
  std::vector<TrajectorySample> trajectory;
  double dt = 0.0;
  double t = 0.0;
  std::size_t steps = 0;
  bool converged = false;
  double derivative_max = 0.0;
};

/// Classical RK4 for dG/dt = X G + G X^T + Y + sum Z G Z^T. Throws Diverged when
/// max|G| exceeds the bound.
EvolveResult evolve_covariance(const DenseEvolution& ev, const RMatrix& Gamma0,
                               const EvolveOptions& opts = {});

}  // namespace lindcorr
