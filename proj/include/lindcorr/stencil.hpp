#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lindcorr/lattice.hpp"

namespace lindcorr {

using DisplacementPair = std::pair<Displacement, Displacement>;

/// Translation-invariant quadratic model. Blocks are 2b x 2b in the in-cell
/// Majorana order (band 0: +,-, band 1: +,-, ...).
///
///   H block (i,j)        = h(i - j)
///   L_{n,s} entry i      = ell[s](i - n)
///   M_{n,u} block (i,j)  = m[u](i - n, j - n)
struct CouplingStencil {
  Statistics statistics = Statistics::Fermion;
  LatticeSpec lattice;
  std::map<Displacement, CMatrix> h;
  std::vector<std::map<Displacement, CVector>> ell;
  std::vector<std::map<DisplacementPair, CMatrix>> m;

  int block() const { return lattice.block(); }
  bool quasifree() const;
  /// Largest |r_a| over all stored couplings.
  int range() const;
  Displacement origin() const { return Displacement(static_cast<std::size_t>(lattice.dims), 0); }
};

CouplingStencil empty_stencil(Statistics s, const LatticeSpec& lattice);

struct RuleCheck {
  std::string rule;
  bool pass = true;
  double max_violation = 0.0;
  std::string where;  // offending displacement, empty on pass
};

struct ValidationReport {
  bool pass = true;
  std::vector<RuleCheck> rules;
  std::string summary() const;
};

constexpr double kSymmetryTolerance = 1e-12;

/// Checks shapes, Hermiticity and the statistics symmetry of h and m as given
/// (no canonicalization).
ValidationReport validate_stencil(const CouplingStencil& stencil);

/// Antisymmetrizes (fermions) or symmetrizes (bosons) h and m:
///   h(r) <- (h(r) -+ h^T(-r)) / 2,  m(r,r') <- (m(r,r') -+ m^T(r',r)) / 2.
/// Entries that become exactly zero are dropped.
CouplingStencil canonicalize(const CouplingStencil& stencil);

/// b(r) = sum_{n,s} ell_s(r - n) ell_s^dag(-n).
std::map<Displacement, CMatrix> build_b_stencil(const CouplingStencil& stencil);

/// Real-space stencils of X, Y, Z_u on the infinite lattice:
///   X block (i,j) = x(i - j), Y block (i,j) = y(i - j),
///   Z_{n,u} block (i,j) = z[u](i - n, j - n).
struct EvolutionStencil {
  Statistics statistics = Statistics::Fermion;
  int dims = 1;
  int bands = 1;
  std::map<Displacement, RMatrix> x;
  std::map<Displacement, RMatrix> y;
  std::vector<std::map<DisplacementPair, RMatrix>> z;

  int block() const { return 2 * bands; }
  int range() const;
};

/// Canonicalizes the stencil first. Throws NonRealResult when a block keeps an
/// imaginary part above tolerance (non-Hermitian input).
EvolutionStencil build_evolution_stencil(const CouplingStencil& stencil);

/// tau~ = 1_b (x) sigma_y in the in-cell order.
CMatrix tau_block(int bands);

/// Applies a single-particle basis change w -> O w with O real orthogonal
/// (fermions) or real symplectic (bosons), cell by cell.
CouplingStencil transform_basis(const CouplingStencil& stencil, const RMatrix& O);

}  // namespace lindcorr
