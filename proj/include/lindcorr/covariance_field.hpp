#pragma once

#include <string>
#include <vector>

#include "lindcorr/lattice.hpp"

namespace lindcorr {

/// Steady-state covariance of a translation-invariant state on a periodic
/// grid. Real-space blocks gamma(r) are indexed by wrapped r, momentum blocks
/// by k_a = 2 pi m_a / L_a. Blocks are stored flat, column-major, 2b x 2b.
struct CovarianceField {
  Statistics statistics = Statistics::Fermion;
  int bands = 1;
  GridShape grid;
  std::vector<double> real_data;
  std::vector<cd> momentum_data;

  // certificates
  std::string method;
  double residual = 0.0;
  double residual_tolerance = 0.0;
  double translation_spread = 0.0;
  double imag_residue = 0.0;
  std::vector<std::size_t> skipped_k;

  int block() const { return 2 * bands; }
  std::size_t block_size() const { return static_cast<std::size_t>(block() * block()); }
  bool has_real() const { return !real_data.empty(); }
  bool has_momentum() const { return !momentum_data.empty(); }

  void allocate_real();
  void allocate_momentum();

  RMatrix gamma(const Displacement& r) const;
  double entry(const Displacement& r, int p, int q) const;
  void set_gamma(const Displacement& r, const RMatrix& g);

  CMatrix gamma_k(std::size_t index) const;
  void set_gamma_k(std::size_t index, const CMatrix& g);
};

enum class FourierDirection { ToMomentum, ToRealSpace };

/// gamma~(k) = sum_r e^{-ik.r} gamma(r) and its inverse with a 1/N factor.
/// Throws MissingRepresentation when the source side is absent.
CovarianceField fourier_pair(const CovarianceField& field, FourierDirection direction);

}  // namespace lindcorr
