#include <doctest.h>

#include <algorithm>
#include <random>

#include "lindcorr/correlation.hpp"
#include "lindcorr/error.hpp"
#include "lindcorr/models.hpp"
#include "lindcorr/rational.hpp"
#include "lindcorr/spectral.hpp"
#include "lindcorr/steady_state.hpp"
#include "support/random_model.hpp"

using namespace lindcorr;
using testsupport::RandomModelSpec;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no lindcorr::Error thrown");
  return ErrorKind::InvalidArgument;
}

RMatrix kron(const RMatrix& A, const RMatrix& B) {
  RMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

std::vector<cd> expanded(const DecayModes& m) {
  std::vector<cd> out;
  for (std::size_t i = 0; i < m.modes.size(); ++i)
    for (int j = 0; j < m.multiplicity[i]; ++j) out.push_back(m.modes[i]);
  return out;
}

bool same_multiset(std::vector<cd> a, std::vector<cd> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const cd& v : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](cd p, cd q) { return std::abs(p - v) < std::abs(q - v); });
    if (it == b.end() || std::abs(*it - v) > tol) return false;
    b.erase(it);
  }
  return true;
}

}  // namespace

TEST_CASE("difference stencil blocks of the chain") {
  for (double phi : {0.3, 2 * M_PI / 5, 2.0})
    for (double alpha : {0.0, 0.4}) {
      XYChainParams p{0.2, alpha, 1.3, phi, 0.0, {6}};
      const CouplingStencil st = xy_chain_stencil(p);
      const DifferenceStencil ds = build_difference_stencil(st);
      REQUIRE(ds.R() == 2);
      const DenseEvolution ev = build_dense(st);
      const RMatrix x0 = dense_block(ev.X, 2, 0, 0), xp = dense_block(ev.X, 2, 1, 0),
                    xm = dense_block(ev.X, 2, 0, 1);
      const RMatrix I = RMatrix::Identity(2, 2);
      CHECK((ds.C[0] - (kron(xp, I) + kron(I, xm))).norm() < 1e-13);
      CHECK((ds.C[1] - (kron(x0, I) + kron(I, x0))).norm() < 1e-13);
      CHECK((ds.C[2] - (kron(xm, I) + kron(I, xp))).norm() < 1e-13);
      const double c = std::cos(phi);
      CHECK(ds.C[2].determinant() == doctest::Approx(4 * 1.69 * (1 - alpha * alpha) * c * c));
    }
  CHECK(kind_of([] { build_difference_stencil(critical_boson_stencil({2, 1.5, {}})); }) ==
        ErrorKind::NotOneDimensional);
}

TEST_CASE("chain decay modes") {
  XYChainParams p{0, 0.2, 1.0, 2 * M_PI / 5, 0.0, {}};
  const DecayModes a = transfer_matrix(build_difference_stencil(xy_chain_stencil(p)));
  std::vector<cd> expect{cd(-0.1583844403, 0), cd(-0.1583844403, 0), cd(0, 0.8164965809),
                         cd(0, -0.8164965809)};
  CHECK(same_multiset(expanded(a), expect, 1e-8));
  CHECK(a.marginal.empty());

  p.zeta = 0.25;
  const DecayModes b = transfer_matrix(build_difference_stencil(xy_chain_stencil(p)));
  bool pair = false, real = false;
  for (const cd& m : b.modes) {
    if (std::abs(m - cd(-0.0194, 0.5634)) < 1e-4) pair = true;
    if (std::abs(m - cd(-0.1041, 0)) < 1e-4) real = true;
  }
  CHECK(pair);
  CHECK(real);
}

TEST_CASE("scalar recurrence and pencil agree") {
  DifferenceStencil ds;
  ds.bands = 1;
  ds.d = 1;
  ds.C = {-0.3 * RMatrix::Identity(4, 4), RMatrix::Identity(4, 4)};
  const DecayModes t = transfer_matrix(ds);
  REQUIRE(t.modes.size() == 1);
  CHECK(std::abs(t.modes[0] - 0.3) < 1e-12);
  CHECK(t.multiplicity[0] == 4);
  const DecayModes p = pencil_poles(ds);
  REQUIRE(p.modes.size() == 1);
  CHECK(std::abs(p.modes[0] - 0.3) < 1e-8);
  CHECK(p.multiplicity[0] == 4);

  DifferenceStencil zero = ds;
  zero.C = {RMatrix::Zero(4, 4), RMatrix::Zero(4, 4), RMatrix::Zero(4, 4)};
  CHECK(kind_of([&] { pencil_poles(zero); }) == ErrorKind::IrregularPencil);
}

TEST_CASE("transfer matrix and pencil find the same modes on random chains") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 5; ++t) {
    RandomModelSpec spec{Statistics::Fermion, 1, 1, 1, 2, t % 2, {}};
    const CouplingStencil st = random_stencil(spec, rng);
    const DifferenceStencil ds = build_difference_stencil(st);
    const DecayModes a = transfer_matrix(ds);
    const DecayModes b = pencil_poles(ds);
    CHECK(same_multiset(expanded(a), expanded(b), 1e-6));
  }
}

TEST_CASE("steady states satisfy the difference equation") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 4; ++t) {
    RandomModelSpec spec{Statistics::Fermion, 1, 1, 1, 2, t % 2, {40}};
    const CouplingStencil st = testsupport::force_gap(random_stencil(spec, rng), {40}, 0.3);
    const DifferenceStencil ds = build_difference_stencil(st);
    const CovarianceField f = solve_steady_dense(build_dense(st));
    CHECK(difference_residual(ds, f, ds.inhomogeneous_range + 1, 20) < 1e-10);
  }
  XYChainParams p{0, 0.2, 1.0, 2 * M_PI / 5, 0.25, {60}};
  const CouplingStencil st = xy_chain_stencil(p);
  const DifferenceStencil ds = build_difference_stencil(st);
  CHECK(difference_residual(ds, solve_steady_dense(build_dense(st)), ds.inhomogeneous_range + 1, 30) <
        1e-10);
}

TEST_CASE("purely on-site models have no decay modes") {
  CouplingStencil st = empty_stencil(Statistics::Fermion, LatticeSpec::finite({12}, 1));
  st.h[{0}] = (CMatrix(2, 2) << 0, cd(0, -0.4), cd(0, 0.4), 0).finished();
  CVector l(2);
  l << 0.8, cd(0, 0.5);
  st.ell.push_back({{{0}, l}});
  const DifferenceStencil ds = build_difference_stencil(st);
  CHECK(kind_of([&] { transfer_matrix(ds); }) == ErrorKind::SingularLeadingBlock);
  std::string route;
  const DecayModes m = decay_modes(ds, &route);
  CHECK(route == "pencil");
  CHECK(m.modes.empty());
  const CovarianceField f = solve_steady_dense(build_dense(st));
  for (int r = 1; r < 12; ++r) CHECK(f.gamma({r}).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("AAA recovers poles and residues of a rational function") {
  std::vector<cd> z;
  for (int i = 0; i < 64; ++i) z.push_back(std::polar(1.0, 2 * M_PI * i / 64));
  CMatrix F(64, 2);
  for (int i = 0; i < 64; ++i) {
    F(i, 0) = 1.0 / (z[i] - 0.5) + 2.0 / (z[i] - cd(0, 2.0));
    F(i, 1) = 3.0 / (z[i] - 0.5);
  }
  const RationalFit fit = aaa_fit(z, F);
  CHECK(fit.max_error < 1e-12 * fit.scale);
  const CVector v = fit.eval(cd(0.3, 0.1));
  CHECK(std::abs(v(0) - (1.0 / (cd(0.3, 0.1) - 0.5) + 2.0 / (cd(0.3, 0.1) - cd(0, 2.0)))) < 1e-9);
  std::vector<RationalPole> big;
  for (const auto& p : rational_poles(fit))
    if (p.residue > 1e-8) big.push_back(p);
  REQUIRE(big.size() == 2);
  std::sort(big.begin(), big.end(), [](auto& a, auto& b) { return std::abs(a.location) < std::abs(b.location); });
  CHECK(std::abs(big[0].location - 0.5) < 1e-9);
  CHECK(big[0].residue == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(std::abs(big[1].location - cd(0, 2.0)) < 1e-9);
  CHECK(big[1].residue == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("momentum poles") {
  const double z2 = 2 - std::sqrt(3.0);
  SUBCASE("one-dimensional critical boson") {
    const PoleScan s = momentum_poles(critical_boson_stencil({1, 2.0, {}}));
    CHECK(s.zeta_inner == doctest::Approx(z2).epsilon(1e-8));
    CHECK(s.zeta_outer == doctest::Approx(1 / z2).epsilon(1e-8));
    CHECK(s.xi == doctest::Approx(-1 / std::log(z2)).epsilon(1e-8));
  }
  SUBCASE("chain") {
    const PoleScan s = momentum_poles(xy_chain_stencil({0, 0, 1.0, 2 * M_PI / 5, 0, {}}));
    const XYExactGamma e = xy_chain_exact_gamma(3, 2 * M_PI / 5);
    CHECK(s.zeta_inner == doctest::Approx(std::abs(e.z_minus)).epsilon(1e-8));
  }
  SUBCASE("two-dimensional boson along x") {
    PoleOptions o;
    o.transverse_grid = 64;
    const PoleScan s = momentum_poles(critical_boson_stencil({2, 1.5, {}}), 0, o);
    CHECK(s.zeta_inner == doctest::Approx(z2).epsilon(1e-7));
    REQUIRE(s.argmax_k.size() == 1);
    CHECK(std::abs(s.argmax_k[0]) < 1e-12);
    CHECK(s.refinement_delta < 1e-6);
  }
  SUBCASE("on-site loss") {
    const CouplingStencil st =
        append_aux_dissipator(empty_stencil(Statistics::Boson, LatticeSpec::infinite(1, 1)), 0.5);
    const PoleScan s = momentum_poles(st);
    CHECK(s.xi == 0.0);
  }
  SUBCASE("gapless input") {
    CHECK(kind_of([] { momentum_poles(critical_boson_stencil({1, 1.0, {}})); }) ==
          ErrorKind::PoleOnUnitCircle);
  }
}

TEST_CASE("exponential fits") {
  std::vector<double> r, v, w, u;
  for (int i = 0; i < 30; ++i) {
    r.push_back(i);
    v.push_back(0.3 * std::pow(-0.1584, i) + (i < 3 ? 0.1 : 0.0));
    w.push_back(std::pow(0.7, i) * std::cos(1.1 * i + 0.4));
    u.push_back(1.0 / (i + 2.0));
  }
  FitOptions o;
  o.burn_in = 3;
  const FitResult a = fit_exponential_decay(r, v, o);
  CHECK(a.rate == doctest::Approx(0.1584).epsilon(1e-9));
  CHECK(a.sign == -1.0);
  CHECK(a.exponential);

  const FitResult b = fit_exponential_decay(r, w);
  CHECK(b.oscillatory);
  CHECK(b.rate == doctest::Approx(0.7).epsilon(1e-9));

  const FitResult c = fit_exponential_decay(r, u);
  CHECK_FALSE(c.exponential);
  CHECK(c.rms > 0.05);

  CHECK(kind_of([&] {
          fit_exponential_decay({0, 1, 2}, {1, 0.5, 0.25});
        }) == ErrorKind::InsufficientData);
}

TEST_CASE("gapless two-dimensional correlations are not exponential") {
  MomentumSolveOptions o;
  o.skip_singular = true;
  const CovarianceField f = solve_steady_momentum(critical_boson_stencil({2, 1.0, {}}), {256, 256}, o);
  std::vector<double> r, v;
  for (int x = 4; x <= 60; ++x) {
    r.push_back(x);
    v.push_back(f.entry({x, 0}, 0, 1));
  }
  const FitResult fit = fit_exponential_decay(r, v);
  CHECK_FALSE(fit.exponential);
}
