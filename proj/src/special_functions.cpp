#include "lindcorr/special_functions.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace lindcorr::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSeriesLimit = 12.0;

// Power series of J_n for integer n >= 0.
double bessel_series(int n, double x) {
  const double h = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= h / k;
  double sum = term;
  const double h2 = h * h;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < kEps * 1e-3 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel asymptotic expansion, truncated at the smallest term.
double bessel_asymptotic(int n, double x) {
  const double mu = 4.0 * n * n;
  double p = 1.0, q = 0.0;
  double a = 1.0;  // a_k / x^k
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(a) > last) break;
    last = std::abs(a);
    switch (k % 4) {
      case 1: q += a; break;
      case 2: p -= a; break;
      case 3: q -= a; break;
      case 0: p += a; break;
    }
    if (std::abs(a) < kEps * 1e-2) break;
  }
  const double chi = x - (0.5 * n + 0.25) * M_PI;
  return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  const double ax = std::abs(x);
  return ax < kSeriesLimit ? bessel_series(0, ax) : bessel_asymptotic(0, ax);
}

double bessel_j1(double x) {
  const double ax = std::abs(x);
  const double v = ax < kSeriesLimit ? bessel_series(1, ax) : bessel_asymptotic(1, ax);
  return x < 0 ? -v : v;
}

double bessel_j3half(double x) {
  if (x < 0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0) return 0.0;
  if (x < 0.5) {
    // sum_k (-1)^k (x/2)^{2k+3/2} / (k! Gamma(k + 5/2))
    const double h = 0.5 * x;
    double term = std::pow(h, 1.5) / std::tgamma(2.5);
    double sum = term;
    for (int k = 1; k < 40; ++k) {
      term *= -h * h / (k * (k + 1.5));
      sum += term;
      if (std::abs(term) < kEps * 1e-3 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::sqrt(2.0 / (M_PI * x)) * (std::sin(x) / x - std::cos(x));
}

double sine_integral(double x) {
  const double ax = std::abs(x);
  double si;
  if (ax == 0.0) return 0.0;
  if (ax <= 4.0) {
    double term = ax, sum = ax;
    for (int k = 1; k < 100; ++k) {
      term *= -ax * ax / ((2.0 * k) * (2.0 * k + 1.0));
      const double add = term / (2.0 * k + 1.0);
      sum += add;
      if (std::abs(add) < kEps * 1e-2 * std::abs(sum)) break;
    }
    si = sum;
  } else {
    // E1(ix) by the modified Lentz continued fraction; Si = pi/2 + Im E1(ix).
    using C = std::complex<double>;
    const double tiny = 1e-300;
    C b(1.0, ax);
    C c(1.0 / tiny, 0.0);
    C d = 1.0 / b;
    C h = d;
    for (int i = 1; i < 200; ++i) {
      const double a = -static_cast<double>(i) * i;
      b += 2.0;
      d = 1.0 / (a * d + b);
      c = b + a / c;
      const C del = c * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
    }
    h *= C(std::cos(ax), -std::sin(ax));
    si = M_PI_2 + h.imag();
  }
  return x < 0 ? -si : si;
}

namespace {

void fresnel_pair(double x, double& s, double& c) {
  const double ax = std::abs(x);
  if (ax < 1.5) {
    // Series in t = pi x^2 / 2 for both integrals at once.
    const double t = M_PI_2 * ax * ax;
    double cs = 0.0, ss = 0.0;
    double term = ax;  // x t^n / n!
    for (int n = 0; n < 200; ++n) {
      const double contrib = term / (2.0 * n + 1.0);
      if (n % 4 == 0) cs += contrib;
      if (n % 4 == 2) cs -= contrib;
      if (n % 4 == 1) ss += contrib;
      if (n % 4 == 3) ss -= contrib;
      term *= t / (n + 1.0);
      if (n > 2 && std::abs(term) < kEps * 1e-2 * std::max(std::abs(cs), std::abs(ss))) break;
    }
    c = cs;
    s = ss;
  } else {
    // Continued fraction for erfc in the complex plane (Lentz).
    using C = std::complex<double>;
    const double pix2 = M_PI * ax * ax;
    const double tiny = 1e-300;
    C b(1.0, -pix2);
    C cc = 1.0 / tiny;
    C d = 1.0 / b;
    C h = d;
    int n = -1;
    for (int k = 2; k < 200; ++k) {
      n += 2;
      const double a = -n * (n + 1.0);
      b += 4.0;
      d = 1.0 / (a * d + b);
      cc = b + a / cc;
      const C del = cc * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
    }
    h *= C(ax, -ax);
    const C cs = C(0.5, 0.5) * (1.0 - C(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
    c = cs.real();
    s = cs.imag();
  }
  if (x < 0) {
    c = -c;
    s = -s;
  }
}

}  // namespace

double fresnel_s(double x) {
  double s, c;
  fresnel_pair(x, s, c);
  return s;
}

double fresnel_c(double x) {
  double s, c;
  fresnel_pair(x, s, c);
  return c;
}

}  // namespace lindcorr::special
