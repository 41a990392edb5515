#include "lindcorr/evolution.hpp"

#include <cmath>

#include "lindcorr/error.hpp"

namespace lindcorr {

namespace {

using SparseC = Eigen::SparseMatrix<cd>;

SparseC dense_tau(std::size_t modes) {
  std::vector<Eigen::Triplet<cd>> t;
  t.reserve(2 * modes);
  for (std::size_t i = 0; i < modes; ++i) {
    t.emplace_back(2 * i, 2 * i + 1, cd(0, -1));
    t.emplace_back(2 * i + 1, 2 * i, cd(0, 1));
  }
  SparseC tau(2 * modes, 2 * modes);
  tau.setFromTriplets(t.begin(), t.end());
  return tau;
}

double check_real(const CMatrix& a, const char* what) {
  const double scale = 1.0 + (a.size() ? a.cwiseAbs().maxCoeff() : 0.0);
  const double im = a.size() ? a.imag().cwiseAbs().maxCoeff() : 0.0;
  if (im > 1e-12 * scale)
    throw Error(ErrorKind::NonRealResult, std::string(what) + " has imaginary residue " +
                                              std::to_string(im));
  return im;
}

}  // namespace

DenseEvolution build_dense(const CouplingStencil& stencil) {
  return build_dense(stencil, stencil.lattice);
}

DenseEvolution build_dense(const CouplingStencil& input, const LatticeSpec& lattice) {
  if (!lattice.is_finite())
    throw Error(ErrorKind::InvalidArgument, "dense assembly needs a finite lattice");
  if (lattice.dims != input.lattice.dims || lattice.bands != input.lattice.bands)
    throw Error(ErrorKind::InvalidArgument, "lattice does not match the stencil");
  const CouplingStencil st = canonicalize(input);
  const int nb = st.block();
  const std::size_t cells = lattice.cells();
  const std::size_t dim = cells * static_cast<std::size_t>(nb);
  const bool fermion = st.statistics == Statistics::Fermion;
  const cd I(0, 1);

  CMatrix H = CMatrix::Zero(dim, dim);
  CMatrix B = CMatrix::Zero(dim, dim);
  for (std::size_t j = 0; j < cells; ++j) {
    const Displacement cj = lattice.cell_at(j);
    for (const auto& [r, hr] : st.h) {
      const std::size_t i = lattice.cell_index(add(cj, r));
      H.block(i * nb, j * nb, nb, nb) += hr;
    }
    for (const auto& es : st.ell)
      for (const auto& [a, va] : es) {
        const std::size_t ia = lattice.cell_index(add(cj, a));
        for (const auto& [c, vc] : es) {
          const std::size_t ic = lattice.cell_index(add(cj, c));
          B.block(ia * nb, ic * nb, nb, nb) += va * vc.adjoint();
        }
      }
  }

  std::vector<SparseC> Ms;
  for (const auto& mu : st.m) {
    if (mu.empty()) continue;
    for (std::size_t n = 0; n < cells; ++n) {
      const Displacement cn = lattice.cell_at(n);
      std::vector<Eigen::Triplet<cd>> t;
      for (const auto& [key, mat] : mu) {
        const std::size_t ia = lattice.cell_index(add(cn, key.first));
        const std::size_t ic = lattice.cell_index(add(cn, key.second));
        for (int p = 0; p < nb; ++p)
          for (int q = 0; q < nb; ++q)
            if (mat(p, q) != cd(0)) t.emplace_back(ia * nb + p, ic * nb + q, mat(p, q));
      }
      SparseC M(dim, dim);
      M.setFromTriplets(t.begin(), t.end());
      Ms.push_back(std::move(M));
    }
  }

  DenseEvolution ev;
  ev.statistics = st.statistics;
  ev.lattice = lattice;
  CMatrix X, Y;
  std::vector<SparseC> Zc;
  if (fermion) {
    X = -2.0 * I * H - CMatrix(B.real().cast<cd>());
    Y = B.imag().cast<cd>();
    for (const auto& M : Ms) {
      X -= 2.0 * CMatrix(M * M);
      Zc.push_back(SparseC(2.0 * I * M));
    }
  } else {
    const SparseC tau = dense_tau(dim / 2);
    X = -2.0 * I * (tau * H) + I * (tau * CMatrix(B.imag().cast<cd>()));
    Y = tau * (CMatrix(B.real().cast<cd>()) * tau);
    for (const auto& M : Ms) {
      const SparseC tM = tau * M;
      X -= 2.0 * CMatrix(tM * tM);
      Zc.push_back(SparseC(2.0 * I * tM));
    }
  }
  ev.max_imag_residue = std::max(check_real(X, "X"), check_real(Y, "Y"));
  ev.X = X.real();
  ev.Y = Y.real();
  for (const auto& Z : Zc) {
    const CMatrix Zd(Z);
    ev.max_imag_residue = std::max(ev.max_imag_residue, check_real(Zd, "Z"));
    SparseR Zr = Zd.real().sparseView();
    Zr.makeCompressed();
    ev.Zs.push_back(std::move(Zr));
  }
  return ev;
}

MomentumBlock build_momentum(const CouplingStencil& stencil, const std::vector<double>& k) {
  if (!stencil.quasifree())
    throw Error(ErrorKind::QuadraticNotSupported,
                "momentum blocks need a quasifree stencil (m must be empty)");
  if (static_cast<int>(k.size()) != stencil.lattice.dims)
    throw Error(ErrorKind::InvalidArgument, "momentum has the wrong dimension");
  return momentum_block(build_evolution_stencil(stencil), k);
}

MomentumBlock momentum_block(const EvolutionStencil& ev, const std::vector<double>& k) {
  const int n = ev.block();
  MomentumBlock mb;
  mb.x = CMatrix::Zero(n, n);
  mb.x_minus = CMatrix::Zero(n, n);
  mb.y = CMatrix::Zero(n, n);
  for (const auto& [r, xr] : ev.x) {
    const double ph = dot(k, r);
    const cd e(std::cos(ph), -std::sin(ph));
    mb.x += e * xr.cast<cd>();
    mb.x_minus += std::conj(e) * xr.cast<cd>();
  }
  for (const auto& [r, yr] : ev.y) {
    const double ph = dot(k, r);
    mb.y += cd(std::cos(ph), -std::sin(ph)) * yr.cast<cd>();
  }
  return mb;
}

MomentumBlock momentum_block_z(const EvolutionStencil& ev, const std::vector<cd>& z) {
  const int n = ev.block();
  auto power = [&](const Displacement& r, int sign) {
    cd p = 1.0;
    for (std::size_t a = 0; a < r.size(); ++a) p *= std::pow(z[a], sign * r[a]);
    return p;
  };
  MomentumBlock mb;
  mb.x = CMatrix::Zero(n, n);
  mb.x_minus = CMatrix::Zero(n, n);
  mb.y = CMatrix::Zero(n, n);
  for (const auto& [r, xr] : ev.x) {
    mb.x += power(r, -1) * xr.cast<cd>();
    mb.x_minus += power(r, 1) * xr.cast<cd>();
  }
  for (const auto& [r, yr] : ev.y) mb.y += power(r, -1) * yr.cast<cd>();
  return mb;
}

RMatrix dense_block(const RMatrix& M, int block, std::size_t i, std::size_t j) {
  return M.block(i * block, j * block, block, block);
}

double stencil_norm(const EvolutionStencil& ev) {
  double s = 0.0;
  for (const auto& [r, m] : ev.x) s += m.cwiseAbs().colwise().sum().maxCoeff();
  return s;
}

}  // namespace lindcorr
