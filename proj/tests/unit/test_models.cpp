#include <doctest.h>

#include "lindcorr/error.hpp"
#include "lindcorr/models.hpp"
#include "lindcorr/spectral.hpp"
#include "lindcorr/special_functions.hpp"
#include "lindcorr/steady_state.hpp"

using namespace lindcorr;

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

}  // namespace

TEST_CASE("one-dimensional critical boson closed form") {
  const CriticalBoson1D a = critical_boson_exact_1d(0, 2.0);
  CHECK(a.gpp == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(a.gpm == 0.0);
  CHECK(critical_boson_exact_1d(-4, 2.0).gpm == doctest::Approx(-critical_boson_exact_1d(4, 2.0).gpm));
  CHECK(critical_boson_exact_1d(-4, 2.0).gpp == doctest::Approx(critical_boson_exact_1d(4, 2.0).gpp));

  // off-diagonal tends to -1/2 as the gap closes
  CHECK(critical_boson_exact_1d(3, 1.0 + 1e-12).gpm == doctest::Approx(-0.5).epsilon(1e-5));
  const CriticalBoson1D lim = critical_boson_exact_1d(3, 1.0);
  CHECK(lim.gapless_limit);
  CHECK(lim.gpm == -0.5);
  CHECK(std::isinf(lim.gpp));
  CHECK(kind_of([] { critical_boson_exact_1d(1, 0.9); }) == ErrorKind::GaplessInput);

  // decay ratio is z_- far away
  const double z = 1.5 - std::sqrt(1.25);
  CHECK(critical_boson_exact_1d(41, 1.5).gpp / critical_boson_exact_1d(40, 1.5).gpp ==
        doctest::Approx(z).epsilon(1e-12));
}

TEST_CASE("one-dimensional critical boson against the momentum solve at several rates") {
  for (double eta : {1.5, 2.0, 5.0}) {
    const CovarianceField f = solve_steady_momentum(critical_boson_stencil({1, eta, {}}), {2048});
    for (int r = -10; r <= 30; ++r) {
      const CriticalBoson1D e = critical_boson_exact_1d(r, eta);
      CHECK(std::abs(f.entry({r}, 0, 0) - e.gpp) < 1e-10);
      CHECK(std::abs(f.entry({r}, 0, 1) - e.gpm) < 1e-10);
    }
  }
}

TEST_CASE("closed-form gamma(k) of the critical boson") {
  for (int D = 1; D <= 3; ++D) {
    CriticalBosonParams p{D, 1.7, {}};
    std::vector<double> k(static_cast<std::size_t>(D), 0.37);
    k[0] = -1.2;
    const MomentumBlock blk = critical_boson_momentum(p, k);
    const CMatrix g = critical_boson_gamma_k(p, k);
    const CMatrix res = blk.x * g + g * blk.x_minus.transpose() + blk.y;
    CHECK(res.norm() < 1e-12);
  }
}

TEST_CASE("critical boson asymptotic laws") {
  const double K = M_PI;
  const auto d2 = critical_boson_asymptotics(2, 1.0, {30.0, -30.0});
  CHECK(std::abs(d2.gpm) < 1e-15);
  const auto d2x = critical_boson_asymptotics(2, 1.0, {25.0, 0.0});
  CHECK(d2x.gpm == doctest::Approx(-std::sin(M_PI / 4) / (std::sqrt(2.0) * M_PI * 25.0) *
                                   (1 - std::cyl_bessel_j(0.0, K * 25.0))));
  const auto d2d = critical_boson_asymptotics(2, 1.5, {10.0, 0.0});
  const double c2 = critical_boson_d2_constant().value;
  CHECK(d2d.gpp == doctest::Approx(3.5 / M_PI * (-std::log(std::sqrt(0.5)) + c2 - std::log(10.0))));

  const auto d3 = critical_boson_asymptotics(3, 1.0, {2000.0, 0.0, 0.0});
  CHECK(d3.gpp * 2000.0 == doctest::Approx(9 / (4 * M_PI)).epsilon(1e-3));
  CHECK(kind_of([] { critical_boson_asymptotics(1, 1.0, {5.0}); }) == ErrorKind::UnsupportedDimension);
}

TEST_CASE("chain presets") {
  const CouplingStencil a = xy_chain_stencil({0.2, 0.3, 1.0, 1.0, 0.0, {}});
  CHECK(a.quasifree());
  CHECK(validate_stencil(a).pass);
  const CouplingStencil b = xy_chain_stencil({0.2, 0.3, 1.0, 1.0, 0.25, {}});
  CHECK_FALSE(b.quasifree());
  CHECK(validate_stencil(b).pass);
  CHECK(b.range() == 1);
}

TEST_CASE("chain eigenvalues xi(k) are those of the momentum block") {
  XYChainParams p{0.6, 0.3, 1.2, 2.1, 0.0, {}};
  const CouplingStencil st = xy_chain_stencil(p);
  for (double k : {0.0, 0.4, 1.9, 3.0}) {
    const auto [xp, xm] = xy_chain_xi(p, k);
    const CVector ev = build_momentum(st, {k}).x.eigenvalues();
    auto near = [&](cd v) { return std::min(std::abs(ev(0) - v), std::abs(ev(1) - v)) < 1e-12; };
    CHECK(near(xp));
    CHECK(near(xm));
    CHECK(xp.real() >= xm.real() - 1e-14);
  }
}

TEST_CASE("chain gap against brute force over momenta") {
  for (double phi : {0.2, 1.4, 2.6, 4.0}) {
    XYChainParams p{0.5, 0.7, 1.3, phi, 0.0, {}};
    double best = -1e300;
    for (int i = 0; i < 20000; ++i) best = std::max(best, xy_chain_xi(p, 2 * M_PI * i / 20000).first.real());
    CHECK(xy_chain_gap(p).gap == doctest::Approx(-best).epsilon(1e-8));
  }
}

TEST_CASE("chain exact correlator") {
  const XYExactGamma g = xy_chain_exact_gamma(2, 2 * M_PI / 5);
  CHECK(g.z_minus == doctest::Approx(-0.1584).epsilon(1e-3));
  CHECK_FALSE(g.phase_singular);
  for (int r = 0; r < 5; ++r) CHECK(xy_chain_exact_gamma(r, 0.0).value == 0.0);
  CHECK(xy_chain_exact_gamma(0, 1.2).value == 0.0);
  CHECK(xy_chain_exact_gamma(-3, 1.2).value == doctest::Approx(-xy_chain_exact_gamma(3, 1.2).value));
  CHECK(xy_chain_exact_gamma(3, M_PI / 2).phase_singular);

  for (double phi : {0.7, 2.5, 4.4}) {
    const CovarianceField f = solve_steady_momentum(xy_chain_stencil({0.3, 0.2, 1.0, phi, 0, {}}), {1024});
    for (int r = -5; r <= 20; ++r) {
      const double v = xy_chain_exact_gamma(r, phi).value;
      CHECK(std::abs(f.entry({r}, 0, 0) - v) < 1e-10);
      CHECK(std::abs(f.entry({r}, 1, 1) - v) < 1e-10);
      CHECK(std::abs(f.entry({r}, 0, 1)) < 1e-10);
    }
  }
}
