#pragma once

#include <vector>

#include "lindcorr/lattice.hpp"

namespace lindcorr {

/// Barycentric rational approximant with a denominator shared by all entries:
///   r_e(z) = sum_j w_j f_{j,e} / (z - z_j)  /  sum_j w_j / (z - z_j).
struct RationalFit {
  std::vector<cd> support;
  CMatrix support_values;  // support point x entry
  CVector weights;
  double max_error = 0.0;  // over the sample set
  double scale = 0.0;      // max |F|

  CVector eval(cd z) const;
};

/// AAA fit of the samples F (sample x entry) taken at the points z. Support
/// points are added greedily until the max error drops to tol * max|F|, the
/// error stops improving, or max_terms is reached.
RationalFit aaa_fit(const std::vector<cd>& z, const CMatrix& F, double tol = 1e-13,
                    int max_terms = 100);

struct RationalPole {
  cd location;
  double residue = 0.0;  // largest entry modulus of the residue
};

/// Finite zeros of the denominator, from the arrowhead pencil reduced with a
/// shift, and their residues.
std::vector<RationalPole> rational_poles(const RationalFit& fit);

}  // namespace lindcorr
