#include "lindcorr/steady_state.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "lindcorr/error.hpp"
#include "lindcorr/sylvester.hpp"

namespace lindcorr {

namespace {

double max_abs(const RMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

// Z restricted to its nonzero rows and columns.
struct CompactZ {
  std::vector<Eigen::Index> rows, cols;
  RMatrix Z;
};

CompactZ compact(const SparseR& Z) {
  std::set<Eigen::Index> rs, cs;
  for (int k = 0; k < Z.outerSize(); ++k)
    for (SparseR::InnerIterator it(Z, k); it; ++it)
      if (it.value() != 0.0) {
        rs.insert(it.row());
        cs.insert(it.col());
      }
  CompactZ c;
  c.rows.assign(rs.begin(), rs.end());
  c.cols.assign(cs.begin(), cs.end());
  c.Z = RMatrix::Zero(c.rows.size(), c.cols.size());
  for (int k = 0; k < Z.outerSize(); ++k)
    for (SparseR::InnerIterator it(Z, k); it; ++it) {
      const auto ri = std::lower_bound(c.rows.begin(), c.rows.end(), it.row()) - c.rows.begin();
      const auto ci = std::lower_bound(c.cols.begin(), c.cols.end(), it.col()) - c.cols.begin();
      c.Z(ri, ci) += it.value();
    }
  return c;
}

std::vector<CompactZ> compact_all(const std::vector<SparseR>& Zs) {
  std::vector<CompactZ> out;
  out.reserve(Zs.size());
  for (const auto& Z : Zs) out.push_back(compact(Z));
  return out;
}

void add_z_terms(const std::vector<CompactZ>& zs, const RMatrix& G, RMatrix& out) {
  for (const auto& c : zs) {
    if (c.rows.empty()) continue;
    const RMatrix Gs = G(c.cols, c.cols);
    const RMatrix P = c.Z * Gs * c.Z.transpose();
    out(c.rows, c.rows) += P;
  }
}

RMatrix solve_kron(const DenseEvolution& ev) {
  const Eigen::Index n = ev.X.rows();
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < n; ++l) {
      const double v = ev.X(i, l);
      if (v == 0.0) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        t.emplace_back(j * n + i, j * n + l, v);  // I (x) X
        t.emplace_back(i * n + j, l * n + j, v);  // X (x) I
      }
    }
  for (const auto& Z : ev.Zs)
    for (int a = 0; a < Z.outerSize(); ++a)
      for (SparseR::InnerIterator ja(Z, a); ja; ++ja)
        for (int b = 0; b < Z.outerSize(); ++b)
          for (SparseR::InnerIterator ib(Z, b); ib; ++ib)
            t.emplace_back(ja.row() * n + ib.row(), ja.col() * n + ib.col(),
                           ja.value() * ib.value());
  SparseR K(n * n, n * n);
  K.setFromTriplets(t.begin(), t.end());
  K.makeCompressed();
  Eigen::SparseLU<SparseR> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::SingularSteadyState, "vectorized steady-state system is singular");
  const RVector rhs = -Eigen::Map<const RVector>(ev.Y.data(), n * n);
  const RVector g = lu.solve(rhs);
  return Eigen::Map<const RMatrix>(g.data(), n, n);
}

// Unknowns gamma(r) for every cell r; equations are the first block row of the
// steady-state map, which fixes all others for translation-invariant input.
RMatrix solve_reduced(const DenseEvolution& ev) {
  const LatticeSpec& lat = ev.lattice;
  const int nb = lat.block();
  const std::size_t cells = lat.cells();
  const std::size_t nn = static_cast<std::size_t>(nb * nb);
  const std::size_t U = cells * nn;
  auto uidx = [&](std::size_t cell, int p, int q) {
    return cell * nn + static_cast<std::size_t>(q * nb + p);
  };
  std::vector<std::size_t> neg(cells);
  for (std::size_t c = 0; c < cells; ++c) neg[c] = lat.cell_index(negate(lat.cell_at(c)));

  struct Entry {
    int row0;
    Eigen::Index col;
    double v;
  };
  std::vector<std::pair<const SparseR*, std::vector<Entry>>> zrows;
  for (const auto& Z : ev.Zs) {
    std::vector<Entry> es;
    for (int k = 0; k < Z.outerSize(); ++k)
      for (SparseR::InnerIterator it(Z, k); it; ++it)
        if (it.row() < nb && it.value() != 0.0)
          es.push_back({static_cast<int>(it.row()), it.col(), it.value()});
    if (!es.empty()) zrows.emplace_back(&Z, std::move(es));
  }

  std::vector<Eigen::Triplet<double>> t;
  const Eigen::Index dim = ev.X.rows();
  for (std::size_t c0 = 0; c0 < cells; ++c0) {
    const Displacement d0 = lat.cell_at(c0);
    for (std::size_t j = 0; j < cells; ++j) {
      const std::size_t shifted = lat.cell_index(add(lat.cell_at(j), d0));
      for (int p = 0; p < nb; ++p)
        for (int row0 = 0; row0 < nb; ++row0) {
          const double v = ev.X(row0, static_cast<Eigen::Index>(shifted * nb + p));
          if (v == 0.0) continue;
          for (int q = 0; q < nb; ++q) t.emplace_back(uidx(neg[j], row0, q), uidx(c0, p, q), v);
        }
    }
    for (int p = 0; p < nb; ++p)
      for (int q = 0; q < nb; ++q) {
        const std::size_t col = uidx(c0, p, q);
        const Eigen::Index m = static_cast<Eigen::Index>(neg[c0] * nb + q);
        for (Eigen::Index row = 0; row < dim; ++row) {
          const double v = ev.X(row, m);
          if (v == 0.0) continue;
          t.emplace_back(uidx(neg[row / nb], p, static_cast<int>(row % nb)), col, v);
        }
        for (const auto& [Z, es] : zrows)
          for (const auto& e : es) {
            if (e.col % nb != p) continue;
            const std::size_t c1 = static_cast<std::size_t>(e.col / nb);
            const std::size_t jc = lat.cell_index(subtract(lat.cell_at(c1), d0));
            const Eigen::Index zc = static_cast<Eigen::Index>(jc * nb + q);
            for (SparseR::InnerIterator it(*Z, zc); it; ++it)
              t.emplace_back(uidx(neg[it.row() / nb], e.row0, static_cast<int>(it.row() % nb)),
                             col, e.v * it.value());
          }
      }
  }
  SparseR A(U, U);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  RVector rhs(U);
  for (std::size_t J = 0; J < cells; ++J)
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b) rhs(uidx(neg[J], a, b)) = -ev.Y(a, J * nb + b);
  Eigen::SparseLU<SparseR> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::SingularSteadyState, "translation-reduced steady-state system is singular");
  const RVector g = lu.solve(rhs);

  CovarianceField f;
  f.statistics = ev.statistics;
  f.bands = lat.bands;
  f.grid = GridShape(lat.extent);
  f.allocate_real();
  for (std::size_t c = 0; c < cells; ++c) {
    RMatrix blk(nb, nb);
    for (int p = 0; p < nb; ++p)
      for (int q = 0; q < nb; ++q) blk(p, q) = g(uidx(c, p, q));
    f.set_gamma(lat.cell_at(c), blk);
  }
  return assemble_gamma(f, lat);
}

}  // namespace

double steady_residual(const DenseEvolution& ev, const RMatrix& G) {
  RMatrix R = ev.X * G;
  R += G * ev.X.transpose();
  R += ev.Y;
  if (!ev.Zs.empty()) add_z_terms(compact_all(ev.Zs), G, R);
  return max_abs(R);
}

RMatrix assemble_gamma(const CovarianceField& field, const LatticeSpec& lat) {
  const int nb = lat.block();
  const std::size_t cells = lat.cells();
  RMatrix G(cells * nb, cells * nb);
  for (std::size_t i = 0; i < cells; ++i) {
    const Displacement ci = lat.cell_at(i);
    for (std::size_t j = 0; j < cells; ++j)
      G.block(i * nb, j * nb, nb, nb) = field.gamma(subtract(ci, lat.cell_at(j)));
  }
  return G;
}

CovarianceField extract_translation_average(const DenseEvolution& ev, const RMatrix& G) {
  const LatticeSpec& lat = ev.lattice;
  const int nb = lat.block();
  const std::size_t cells = lat.cells();
  CovarianceField f;
  f.statistics = ev.statistics;
  f.bands = lat.bands;
  f.grid = GridShape(lat.extent);
  f.allocate_real();
  double spread = 0.0;
  for (std::size_t r = 0; r < cells; ++r) {
    const Displacement dr = lat.cell_at(r);
    RMatrix acc = RMatrix::Zero(nb, nb);
    std::vector<std::size_t> is(cells);
    for (std::size_t j = 0; j < cells; ++j) {
      is[j] = lat.cell_index(add(lat.cell_at(j), dr));
      acc += G.block(is[j] * nb, j * nb, nb, nb);
    }
    acc /= static_cast<double>(cells);
    for (std::size_t j = 0; j < cells; ++j)
      spread = std::max(spread, max_abs(G.block(is[j] * nb, j * nb, nb, nb) - acc));
    f.set_gamma(dr, acc);
  }
  f.translation_spread = spread;
  return f;
}

DenseSteadyState solve_steady_dense_full(const DenseEvolution& ev, const DenseSolveOptions& opts) {
  DenseSteadyState out;
  std::string method;
  if (ev.Zs.empty() && ev.Y.isZero(0.0)) {
    // Gamma = 0 solves the homogeneous equation even when X is singular
    out.Gamma = RMatrix::Zero(ev.X.rows(), ev.X.cols());
    method = "zero-rhs";
  } else if (ev.Zs.empty()) {
    out.Gamma = solve_lyapunov_schur(ev.X, -ev.Y).G;
    method = "schur";
  } else if (static_cast<std::size_t>(ev.X.rows()) <= opts.kron_limit) {
    out.Gamma = solve_kron(ev);
    method = "vectorized";
  } else {
    out.Gamma = solve_reduced(ev);
    method = "translation-reduced";
  }
  if (!out.Gamma.allFinite())
    throw Error(ErrorKind::NonFiniteSolve, "steady-state solve produced non-finite entries");
  const double res = steady_residual(ev, out.Gamma);
  const double tol = opts.residual_factor * (max_abs(ev.X) + max_abs(ev.Y));
  if (!std::isfinite(res))
    throw Error(ErrorKind::NonFiniteSolve, "steady-state residual is not finite");
  if (res > tol && res > 1e-300)
    throw Error(ErrorKind::SingularSteadyState,
                "steady-state residual " + std::to_string(res) + " exceeds " +
                    std::to_string(tol) + " (steady state not unique on this lattice?)");
  out.field = extract_translation_average(ev, out.Gamma);
  out.field.method = method;
  out.field.residual = res;
  out.field.residual_tolerance = tol;
  return out;
}

CovarianceField solve_steady_dense(const DenseEvolution& ev, const DenseSolveOptions& opts) {
  return solve_steady_dense_full(ev, opts).field;
}

CMatrix solve_lyapunov_k(const MomentumBlock& blk, const std::vector<double>& k, double* residual,
                         double scale) {
  const SmallLyapunovResult r = solve_lyapunov_small(blk.x, blk.x_minus, -blk.y, 1e-12, scale);
  if (r.singular) {
    std::string ks;
    for (std::size_t a = 0; a < k.size(); ++a) ks += (a ? "," : "") + std::to_string(k[a]);
    throw Error(ErrorKind::SingularAtK, "Lyapunov system singular at k = (" + ks + ")");
  }
  if (residual) {
    const CMatrix R = blk.x * r.G + r.G * blk.x_minus.transpose() + blk.y;
    *residual = R.cwiseAbs().maxCoeff();
  }
  return r.G;
}

CovarianceField solve_steady_momentum(const CouplingStencil& stencil, const std::vector<int>& grid,
                                      const MomentumSolveOptions& opts) {
  if (!stencil.quasifree())
    throw Error(ErrorKind::QuadraticNotSupported, "momentum route needs a quasifree stencil");
  if (static_cast<int>(grid.size()) != stencil.lattice.dims)
    throw Error(ErrorKind::InvalidArgument, "grid dimension does not match the stencil");
  const EvolutionStencil ev = build_evolution_stencil(stencil);
  const double scale = 2.0 * stencil_norm(ev);
  CovarianceField f;
  f.statistics = stencil.statistics;
  f.bands = stencil.lattice.bands;
  f.grid = GridShape(grid);
  f.method = "momentum";
  f.allocate_momentum();

  const std::size_t P = f.grid.points();
  std::mutex mtx;
  double max_res = 0.0;
  std::vector<std::size_t> skipped;
  bool zero_rhs = true;
  for (const auto& [r, m] : ev.y) zero_rhs = zero_rhs && m.isZero(0.0);
  if (zero_rhs) f.method = "zero-rhs";
  parallel_for(zero_rhs ? 0 : P, [&](std::size_t i) {
    const std::vector<double> k = f.grid.momentum(i);
    const MomentumBlock blk = momentum_block(ev, k);
    double res = 0.0;
    try {
      f.set_gamma_k(i, solve_lyapunov_k(blk, k, &res, scale));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularAtK || !opts.skip_singular) throw;
      std::lock_guard<std::mutex> lock(mtx);
      skipped.push_back(i);
      return;
    }
    if (res > max_res) {
      std::lock_guard<std::mutex> lock(mtx);
      max_res = std::max(max_res, res);
    }
  });
  std::sort(skipped.begin(), skipped.end());

  CovarianceField out = fourier_pair(f, FourierDirection::ToRealSpace);
  out.residual = max_res;
  out.residual_tolerance = 1e-10;
  out.skipped_k = skipped;

  if (opts.zero_mode_correction && !skipped.empty()) {
    if (stencil.lattice.dims != 3)
      throw Error(ErrorKind::UnsupportedDimension, "zero-mode correction is implemented for D = 3");
    if (skipped.size() != 1 || skipped[0] != 0)
      throw Error(ErrorKind::InvalidArgument, "zero-mode correction expects only k = 0 skipped");
    // A = lim |k|^2 gamma~(k), even part along the axes
    const double d = opts.correction_delta;
    CMatrix A = CMatrix::Zero(f.block(), f.block());
    for (int a = 0; a < 3; ++a)
      for (double s : {d, -d}) {
        std::vector<double> k(3, 0.0);
        k[a] = s;
        A += d * d * solve_lyapunov_k(momentum_block(ev, k), k, nullptr, scale) / 6.0;
      }
    const RMatrix Ar = A.real();
    const double L = grid[0];
    if (grid[1] != grid[0] || grid[2] != grid[0])
      throw Error(ErrorKind::InvalidArgument, "zero-mode correction needs a cubic grid");
    constexpr double kCubicMadelung = 2.837297;
    for (std::size_t i = 0; i < P; ++i) {
      Displacement r = out.grid.at(i);
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        if (2 * r[a] > grid[a]) r[a] -= grid[a];
        r2 += static_cast<double>(r[a]) * r[a];
      }
      const double c = kCubicMadelung / (4.0 * M_PI * L) - r2 / (6.0 * L * L * L);
      out.set_gamma(r, out.gamma(r) + c * Ar);
    }
  }
  return out;
}

double grid_refinement_delta(const CouplingStencil& stencil, const std::vector<int>& grid,
                             const std::vector<Displacement>& displacements,
                             const MomentumSolveOptions& opts) {
  std::vector<int> coarse(grid);
  for (int& s : coarse) s = std::max(1, s / 2);
  const CovarianceField fine = solve_steady_momentum(stencil, grid, opts);
  const CovarianceField crs = solve_steady_momentum(stencil, coarse, opts);
  double delta = 0.0;
  for (const auto& r : displacements) delta = std::max(delta, max_abs(fine.gamma(r) - crs.gamma(r)));
  return delta;
}

EvolveResult evolve_covariance(const DenseEvolution& ev, const RMatrix& Gamma0,
                               const EvolveOptions& opts) {
  const Eigen::Index n = ev.X.rows();
  if (Gamma0.rows() != n || Gamma0.cols() != n)
    throw Error(ErrorKind::InvalidArgument, "initial covariance has the wrong size");
  EvolveResult res;
  const double xnorm = ev.X.cwiseAbs().rowwise().sum().maxCoeff();
  res.dt = opts.dt > 0 ? opts.dt : (xnorm > 0 ? 0.1 / xnorm : 0.1);
  if (!(res.dt > 0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");

  const double density = static_cast<double>((ev.X.array() != 0.0).count()) / (n * n + 1e-300);
  const bool sparse = density < 0.25;
  const SparseR Xs = ev.X.sparseView();
  const std::vector<CompactZ> zs = compact_all(ev.Zs);

  auto rhs = [&](const RMatrix& G) {
    RMatrix XG = sparse ? RMatrix(Xs * G) : RMatrix(ev.X * G);
    RMatrix GXt = sparse ? RMatrix((Xs * G.transpose()).transpose()) : RMatrix(G * ev.X.transpose());
    RMatrix out = XG + GXt + ev.Y;
    if (!zs.empty()) add_z_terms(zs, G, out);
    return out;
  };

  RMatrix G = Gamma0;
  const double h = res.dt;
  std::size_t step = 0;
  double t = 0.0;
  RMatrix k1 = rhs(G);
  res.derivative_max = max_abs(k1);
  res.trajectory.push_back({t, max_abs(G), res.derivative_max});
  while (t < opts.t_max) {
    if (res.derivative_max < opts.stop_tol) {
      res.converged = true;
      break;
    }
    const RMatrix k2 = rhs(G + 0.5 * h * k1);
    const RMatrix k3 = rhs(G + 0.5 * h * k2);
    const RMatrix k4 = rhs(G + h * k3);
    G += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    ++step;
    const double gmax = max_abs(G);
    if (!std::isfinite(gmax) || gmax > opts.divergence_bound)
      throw Error(ErrorKind::Diverged, "covariance exceeded " + std::to_string(opts.divergence_bound) +
                                           " at t = " + std::to_string(t));
    k1 = rhs(G);
    res.derivative_max = max_abs(k1);
    if (opts.sample_every && step % opts.sample_every == 0)
      res.trajectory.push_back({t, gmax, res.derivative_max});
  }
  if (res.derivative_max < opts.stop_tol) res.converged = true;
  res.trajectory.push_back({t, max_abs(G), res.derivative_max});
  res.Gamma = std::move(G);
  res.t = t;
  res.steps = step;
  return res;
}

}  // namespace lindcorr
