#pragma once

#include "lindcorr/lattice.hpp"

namespace lindcorr {

struct SylvesterResult {
  RMatrix G;
  double min_separation = 0.0;  // min |lambda_i + lambda_j| over eigenvalues of X
};

/// Solves X G + G X^T = C for real X, C via the complex Schur form of X
/// (Bartels-Stewart). Throws SingularSteadyState when some lambda_i + lambda_j
/// vanishes to within sep_tol * ||X||.
SylvesterResult solve_lyapunov_schur(const RMatrix& X, const RMatrix& C, double sep_tol = 1e-13);

/// Kronecker form of G -> A G + G B^T with column-major vec:  I (x) A + B (x) I.
CMatrix lyapunov_kron(const CMatrix& A, const CMatrix& B);

struct SmallLyapunovResult {
  CMatrix G;
  double sigma_ratio = 1.0;  // sigma_min / sigma_max when computed, else rcond estimate
  bool singular = false;
};

/// Solves A G + G B^T = C by LU of the vectorized system. Near-singular
/// systems are re-examined with an SVD and flagged singular when
/// sigma_min < singular_tol * max(sigma_max, scale). `scale` is the size of the
/// operator family the system belongs to, so that a block that is tiny only
/// through cancellation is not mistaken for a well-conditioned one.
SmallLyapunovResult solve_lyapunov_small(const CMatrix& A, const CMatrix& B, const CMatrix& C,
                                         double singular_tol = 1e-12, double scale = 0.0);

}  // namespace lindcorr
