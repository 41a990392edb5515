#pragma once

namespace lindcorr::special {

/// Bessel functions of the first kind.
double bessel_j0(double x);
double bessel_j1(double x);
double bessel_j3half(double x);

/// Si(x) = int_0^x sin(t)/t dt.
double sine_integral(double x);

/// Fresnel integrals S(x) = int_0^x sin(pi t^2 / 2) dt, C(x) likewise with cos.
double fresnel_s(double x);
double fresnel_c(double x);

}  // namespace lindcorr::special
