// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lindcorr/correlation.hpp"
#include "lindcorr/error.hpp"
#include "lindcorr/models.hpp"
#include "lindcorr/spectral.hpp"
#include "lindcorr/steady_state.hpp"
#include "support/random_model.hpp"

using namespace lindcorr;
using testsupport::RandomModelSpec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome chain_dense_exact() {
  const auto t0 = std::chrono::steady_clock::now();
  XYChainParams p{0.0, 0.2, 1.0, 2 * M_PI / 5, 0.0, {200}};
  const CovarianceField f = solve_steady_dense(build_dense(xy_chain_stencil(p)));
  const double elapsed = seconds_since(t0);
  double err = 0.0;
  for (int r = -40; r <= 40; ++r) {
    const double g = xy_chain_exact_gamma(r, p.phi, p.eta).value;
    err = std::max({err, std::abs(f.entry({r}, 0, 0) - g), std::abs(f.entry({r}, 1, 1) - g),
                    std::abs(f.entry({r}, 0, 1)), std::abs(f.entry({r}, 1, 0))});
  }
  return {err <= 1e-8 && elapsed < 30.0, fmt2("max error %.3g, %.2f s", err, elapsed)};
}

bool modes_match(const DecayModes& m, const std::vector<cd>& expect, std::string& detail) {
  bool ok = m.modes.size() == expect.size();
  for (const cd& e : expect) {
    double best = 1e300;
    for (const cd& v : m.modes) best = std::min(best, std::abs(v - e));
    ok = ok && best <= 5e-5;
  }
  for (const cd& v : m.modes) detail += fmt2(" %.4f%+.4fi", v.real(), v.imag());
  return ok;
}

Outcome transfer_modes() {
  XYChainParams p{0.0, 0.2, 1.0, 2 * M_PI / 5, 0.0, {}};
  std::string detail = "zeta=0:";
  bool ok = modes_match(transfer_matrix(build_difference_stencil(xy_chain_stencil(p))),
                        {cd(-0.1584, 0), cd(0, 0.8165), cd(0, -0.8165)}, detail);
  p.zeta = 0.25;
  detail += "; zeta=1/4:";
  ok = modes_match(transfer_matrix(build_difference_stencil(xy_chain_stencil(p))),
                   {cd(-0.0194, 0.5634), cd(-0.0194, -0.5634), cd(-0.1041, 0)}, detail) &&
       ok;
  return {ok, detail};
}

Outcome dephased_fit() {
  XYChainParams p{0.0, 0.2, 1.0, 2 * M_PI / 5, 0.25, {400}};
  const CouplingStencil st = xy_chain_stencil(p);
  const DifferenceStencil ds = build_difference_stencil(st);
  const DecayModes m = transfer_matrix(ds);
  double dominant = 0.0;
  for (const cd& v : m.modes) dominant = std::max(dominant, std::abs(v));
  const CovarianceField f = solve_steady_dense(build_dense(st));
  std::vector<double> r, v;
  for (int x = 0; x <= 200; ++x) {
    r.push_back(x);
    v.push_back(f.entry({x}, 0, 0));
  }
  FitOptions o;
  o.burn_in = 2 * ds.d + 2;
  const FitResult fit = fit_exponential_decay(r, v, o);
  const double rel = std::abs(fit.rate - dominant) / dominant;
  const double rel_ref = std::abs(fit.rate - 0.5637) / 0.5637;
  const bool ok = rel <= 0.02 && rel_ref <= 0.02;
  return {ok, fmt2("fitted %.6f, dominant modulus %.6f", fit.rate, dominant) +
                  fmt2(", relative %.2g (%.2g against 0.5637)", rel, rel_ref)};
}

Outcome gap_curves() {
  double err0 = 0.0, err1 = 0.0;
  for (int i = 0; i < 100; ++i) {
    XYChainParams p{0.0, 0.5, 1.0, -M_PI_2 + 2 * M_PI * i / 99.0, 0.0, {}};
    const double c = std::cos(p.phi);
    const double delta = p.phi <= M_PI_2 ? p.eta * (1 - c) : p.eta * (1 + c);
    err0 = std::max(err0, std::abs(xy_chain_gap(p).gap - delta));
    const CouplingStencil st = xy_chain_stencil(p);
    for (double kappa : {0.0, 1.0})
      err1 = std::max(err1, std::abs(dissipative_gap_momentum(append_aux_dissipator(st, kappa), {4096}).gap -
                                     (delta + kappa)));
  }
  return {err0 <= 1e-8 && err1 <= 1e-8, fmt2("gap error %.3g, kappa curves error %.3g", err0, err1)};
}

Outcome aux_shift() {
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<int> pick(1, 2);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    RandomModelSpec spec;
    spec.statistics = t % 2 ? Statistics::Boson : Statistics::Fermion;
    spec.bands = pick(rng);
    spec.dims = pick(rng);
    spec.range = pick(rng);
    const CouplingStencil st = testsupport::random_stencil(spec, rng);
    const std::vector<int> grid(static_cast<std::size_t>(spec.dims), 16);
    const double g0 = dissipative_gap(st, grid).gap;
    for (double kappa : {0.1, 1.0})
      worst = std::max(worst, std::abs(dissipative_gap(append_aux_dissipator(st, kappa), grid).gap - g0 - kappa));
  }
  return {worst <= 1e-9, fmt("max deviation %.3g", worst)};
}

Outcome liouvillian_oracle() {
  XYChainParams p{0.3, 0.2, 1.0, 2 * M_PI / 5, 0.0, {3}};
  const LiouvillianSpectrum L = dense_liouvillian_fermion(xy_chain_stencil(p), LatticeSpec::finite(p.extent, 1));
  std::vector<double> rates;
  for (int m = 0; m < 3; ++m) {
    const auto [a, b] = xy_chain_xi(p, 2 * M_PI * m / 3);
    rates.push_back(a.real());
    rates.push_back(b.real());
  }
  std::vector<double> sums;
  for (int mask = 0; mask < 64; ++mask) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i)
      if (mask & (1 << i)) s += rates[static_cast<std::size_t>(i)];
    sums.push_back(s);
  }
  double err = 0.0;
  for (Eigen::Index i = 0; i < L.eigenvalues.size(); ++i) {
    const double re = L.eigenvalues(i).real();
    if (std::abs(re) <= 1e-9) continue;
    double best = 1e300;
    for (double s : sums) best = std::min(best, std::abs(re - s));
    err = std::max(err, best);
  }
  bool ok = L.eigenvalues.size() == 64 && err <= 1e-8;

  double shortfall = 0.0;
  for (int N = 1; N <= 3; ++N) {
    XYChainParams q{0.3, 0.2, 1.0, 2 * M_PI / 5, 0.25, {N}};
    const CouplingStencil st = xy_chain_stencil(q);
    const double g0 = dense_liouvillian_fermion(st, st.lattice).gap;
    for (double kappa : {0.5, 1.0}) {
      const double g1 = dense_liouvillian_fermion(append_aux_dissipator(st, kappa), st.lattice).gap;
      shortfall = std::max(shortfall, (g0 + kappa) - g1);
    }
  }
  ok = ok && shortfall <= 1e-8;
  return {ok, fmt2("rate-sum error %.3g, gap shortfall %.3g", err, shortfall)};
}

Outcome boson_1d() {
  double err = 0.0;
  for (double eta : {1.5, 2.0}) {
    const CovarianceField f = solve_steady_momentum(critical_boson_stencil({1, eta, {}}), {4096});
    for (int r = -30; r <= 30; ++r) {
      const CriticalBoson1D e = critical_boson_exact_1d(r, eta);
      err = std::max({err, std::abs(f.entry({r}, 0, 0) - e.gpp), std::abs(f.entry({r}, 1, 1) - e.gpp),
                      std::abs(f.entry({r}, 0, 1) - e.gpm), std::abs(f.entry({r}, 1, 0) + e.gpm)});
    }
  }
  return {err <= 1e-6, fmt("max error %.3g", err)};
}

Outcome boson_2d() {
  MomentumSolveOptions o;
  o.skip_singular = true;
  double worst = 0.0;
  {
    const CovarianceField f = solve_steady_momentum(critical_boson_stencil({2, 1.0, {}}), {2048, 2048}, o);
    const double law = -std::sin(M_PI / 4) / (std::sqrt(2.0) * M_PI);
    for (int r = 20; r <= 60; ++r) worst = std::max(worst, std::abs(f.entry({r, 0}, 0, 1) * r / law - 1.0));
  }
  const double eta = 1.0 + 1e-4;
  const CovarianceField g = solve_steady_momentum(critical_boson_stencil({2, eta, {}}), {2048, 2048});
  // least squares slope of gamma_{++} against ln r inside 1 << r << xi, xi = 1 / (2 sqrt(eta - 1))
  const int r_max = static_cast<int>(0.2 / (2 * std::sqrt(eta - 1)));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int r = 3; r <= r_max; ++r) {
    const double x = std::log(static_cast<double>(r)), y = g.entry({r, 0}, 0, 0);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double expect = -(eta + 2) / M_PI;
  const double rel = std::abs(slope / expect - 1.0);
  return {worst <= 0.05 && rel <= 0.03,
          fmt2("off-diagonal max relative deviation %.3g, diagonal slope %.5f", worst, slope) +
              fmt2(" vs %.5f (relative %.3g)", expect, rel)};
}

Outcome boson_3d() {
  MomentumSolveOptions o;
  o.skip_singular = true;
  o.zero_mode_correction = true;
  const CovarianceField f = solve_steady_momentum(critical_boson_stencil({3, 1.0, {}}), {128, 128, 128}, o);
  const double law = 9 / (4 * M_PI);
  double worst = 0.0;
  for (int r = 10; r <= 40; ++r) worst = std::max(worst, std::abs(f.entry({r, 0, 0}, 0, 0) * r / law - 1.0));
  return {worst <= 0.05, fmt("max relative deviation %.3g", worst)};
}

Outcome fermion_bound() {
  std::mt19937_64 rng(20240502);
  std::uniform_int_distribution<int> pick(1, 2);
  double norm_k = 0.0, entry = 0.0;
  for (int t = 0; t < 100; ++t) {
    RandomModelSpec spec;
    spec.bands = pick(rng);
    spec.dims = pick(rng);
    spec.range = pick(rng);
    const std::vector<int> grid(static_cast<std::size_t>(spec.dims), spec.dims == 1 ? 32 : 12);
    const CouplingStencil st = testsupport::force_gap(testsupport::random_stencil(spec, rng), grid, 0.2);
    const CovarianceField f = solve_steady_momentum(st, grid);
    for (std::size_t k = 0; k < f.grid.points(); ++k) {
      Eigen::JacobiSVD<CMatrix> svd(f.gamma_k(k));
      norm_k = std::max(norm_k, svd.singularValues()(0));
    }
    for (double v : f.real_data) entry = std::max(entry, std::abs(v));
  }
  return {norm_k <= 0.5 + 1e-9 && entry <= 0.5, fmt2("max |gamma~| %.12f, max |entry| %.12f", norm_k, entry)};
}

Outcome three_routes() {
  std::mt19937_64 rng(20240503);
  double worst_m = 0.0, worst_rk = 0.0;
  for (int t = 0; t < 20; ++t) {
    RandomModelSpec spec;
    spec.statistics = t % 2 ? Statistics::Boson : Statistics::Fermion;
    // 24 modes: 24 x 1 band, 12 x 2 bands or 4 x 6 x 1 band
    switch (t % 3) {
      case 0: spec.extent = {24}; break;
      case 1: spec.extent = {12}; spec.bands = 2; break;
      default: spec.extent = {4, 6}; spec.dims = 2; break;
    }
    spec.range = 1 + (t / 3) % 2;
    const CouplingStencil st = testsupport::force_gap(testsupport::random_stencil(spec, rng), spec.extent, 0.2);
    const DenseEvolution ev = build_dense(st);
    const DenseSteadyState dense = solve_steady_dense_full(ev);
    const CovarianceField mom = solve_steady_momentum(st, spec.extent);
    for (std::size_t i = 0; i < mom.real_data.size(); ++i)
      worst_m = std::max(worst_m, std::abs(mom.real_data[i] - dense.field.real_data[i]));
    EvolveOptions o;
    o.stop_tol = 1e-10;
    const EvolveResult rk = evolve_covariance(ev, RMatrix::Zero(ev.X.rows(), ev.X.cols()), o);
    worst_rk = std::max(worst_rk, (rk.Gamma - dense.Gamma).cwiseAbs().maxCoeff());
  }
  return {worst_m <= 1e-6 && worst_rk <= 1e-6, fmt2("momentum vs dense %.3g, RK4 vs dense %.3g", worst_m, worst_rk)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"chain dense solve matches exact gamma(r)", chain_dense_exact},
      {"transfer-matrix decay modes", transfer_modes},
      {"dephased chain fitted decay rate", dephased_fit},
      {"chain gap curves", gap_curves},
      {"auxiliary dissipator gap shift", aux_shift},
      {"dense Liouvillian oracle", liouvillian_oracle},
      {"critical boson D=1 against exact", boson_1d},
      {"critical boson D=2 asymptotics", boson_2d},
      {"critical boson D=3 asymptotics", boson_3d},
      {"fermionic covariance bound", fermion_bound},
      {"dense, momentum and RK4 routes agree", three_routes},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu: %s (%s) [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
