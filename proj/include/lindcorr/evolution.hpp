#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "lindcorr/stencil.hpp"

namespace lindcorr {

using SparseR = Eigen::SparseMatrix<double>;

/// Real 2N x 2N evolution data of a finite periodic lattice.
struct DenseEvolution {
  Statistics statistics = Statistics::Fermion;
  LatticeSpec lattice;
  RMatrix X;
  RMatrix Y;
  std::vector<SparseR> Zs;  // one per (center, u)
  double max_imag_residue = 0.0;
};

/// Assembles X, Y and Z_{n,u} from the periodically wrapped couplings
/// H, L_{n,s} and M_{n,u}. Throws NonRealResult when an imaginary part above
/// 1e-12 survives.
DenseEvolution build_dense(const CouplingStencil& stencil, const LatticeSpec& lattice);

/// Uses stencil.lattice, which must be finite.
DenseEvolution build_dense(const CouplingStencil& stencil);

struct MomentumBlock {
  CMatrix x;        // x~(k)
  CMatrix x_minus;  // x~(-k)
  CMatrix y;        // y~(k)
};

/// x~(k), y~(k) for a quasifree stencil. Throws QuadraticNotSupported when m
/// is present.
MomentumBlock build_momentum(const CouplingStencil& stencil, const std::vector<double>& k);

/// Same from a precomputed evolution stencil; k may be any real vector.
MomentumBlock momentum_block(const EvolutionStencil& ev, const std::vector<double>& k);

/// Analytic continuation e^{i k_a} -> z_a:
///   x~(z) = sum_r z^{-r} x(r),  x~_minus(z) = sum_r z^{r} x(r),  y~(z) = sum_r z^{-r} y(r).
MomentumBlock momentum_block_z(const EvolutionStencil& ev, const std::vector<cd>& z);

/// sum_r ||x(r)||_1, an upper bound for ||x~(k)||_1 on the real axis.
double stencil_norm(const EvolutionStencil& ev);

/// The 2b x 2b block (i,j) of a dense matrix.
RMatrix dense_block(const RMatrix& M, int block, std::size_t i, std::size_t j);

}  // namespace lindcorr
