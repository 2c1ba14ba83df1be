#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elliptika/quadrature.hpp"
#include "elliptika/specfun.hpp"

#include <cmath>
#include <numbers>

using namespace elliptika;
using doctest::Approx;

TEST_CASE("gk_adaptive on known integrals") {
  CHECK(gk_adaptive_real([](double x) { return std::sin(x); }, 0, std::numbers::pi, 1e-12)
        == Approx(2.0).epsilon(1e-12));
  CHECK(gk_adaptive_real([](double x) { return std::exp(-x * x); }, -8, 8, 1e-12)
        == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  auto osc = gk_adaptive([](double x) { return std::polar(1.0, 40.0 * x); }, 0.0, 1.0, 1e-12);
  cdouble want = (std::polar(1.0, 40.0) - 1.0) / cdouble(0.0, 40.0);
  CHECK(std::abs(osc.value - want) < 1e-10);
}

TEST_CASE("cgamma against real gamma and the reflection formula") {
  for (double x : {0.5, 1.0, 2.5, 7.0})
    CHECK(cgamma(x).real() == Approx(std::tgamma(x)).epsilon(1e-12));
  cdouble z(0.3, 1.7);
  cdouble lhs = cgamma(z) * cgamma(1.0 - z);
  cdouble rhs = std::numbers::pi / std::sin(std::numbers::pi * z);
  CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));
  CHECK_THROWS(cgamma(cdouble(-2.0, 0.0)));
}

TEST_CASE("bessel_k matches the standard library for real order") {
  for (double nu : {0.0, 0.5, 1.0, 2.0})
    for (double x : {0.5, 1.0, 2.0, 5.0})
      CHECK(bessel_k(nu, x).real() == Approx(std::cyl_bessel_k(nu, x)).epsilon(1e-10));
  // evenness in nu and the three-term recurrence
  CHECK(std::abs(bessel_k(cdouble(1, 2), 2.0) - bessel_k(cdouble(-1, -2), 2.0)) < 1e-12);
  cdouble nu(0.7, 1.3);
  double x = 2.0;
  cdouble lhs = bessel_k(nu + 1.0, x) - bessel_k(nu - 1.0, x);
  cdouble rhs = 2.0 * nu / x * bessel_k(nu, x);
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("F normalization, symmetry point and decay") {
  CHECK(big_f(0.0) == Approx(1.0).epsilon(1e-10));
  CHECK(big_f(1.0) == Approx(0.5).epsilon(1e-10)); // y -> 1/y symmetry
  CHECK(big_f(0.3) + big_f(1.0 / 0.3) == Approx(1.0).epsilon(1e-10));
  CHECK(big_f(10.0) < 1e-4);
  CHECK(big_f(10.0) > 0.0);
  CHECK(big_f(2.0) < big_f(1.5));
}

TEST_CASE("F~ is the Mellin transform of F (independent quadrature route)") {
  for (cdouble u : {cdouble(0.5), cdouble(1.0), cdouble(2.0), cdouble(1.0, 5.0)}) {
    // log substitution y = e^s keeps the endpoint behavior polynomial
    cdouble direct = gk_adaptive([&](double s) {
      return big_f(std::exp(s)) * std::exp(u * s);
    }, std::log(1e-13) / std::max(0.4, u.real()), std::log(50.0), 3e-11).value;
    cdouble closed = big_f_mellin(u);
    CHECK(std::abs(direct - closed) < 1e-6 * std::abs(closed));
  }
  // simple pole with residue 1: u F~(u) -> 1
  CHECK(std::abs(big_f_mellin(cdouble(1e-3, 0.0)) * 1e-3 - 1.0) < 1e-2);
}

TEST_CASE("H kernels: small-y laws, decay, contour-shift invariance") {
  // H1(0+) = pi (simple pole, residue sqrt(pi) of the integrand kernel)
  CHECK(h_func(1, 1e-5) == Approx(std::numbers::pi).epsilon(1e-3));
  // H0(y) = 2 log(1/y) + O(1) for small y (double pole): test the slope
  CHECK(h_func(0, 1e-7) - h_func(0, 1e-5) == Approx(2.0 * std::log(100.0)).epsilon(1e-3));
  // superpolynomial decay: between y=10 and y=20 at least y^{-4}
  for (int j : {0, 1}) {
    double a = std::abs(h_func(j, 10.0)), b = std::abs(h_func(j, 20.0));
    CHECK(b < a / 16.0 + 1e-14);
  }
  for (int j : {0, 1})
    for (double y : {0.3, 1.0, 4.0})
      CHECK(h_func(j, y, 0.5) == Approx(h_func(j, y, 2.0)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("h_mellin equals direct Mellin quadrature of h_func") {
  for (int j : {0, 1})
    for (cdouble u : {cdouble(1.0), cdouble(0.7, 2.0)}) {
      cdouble direct = gk_adaptive([&](double s) {
        return h_func(j, std::exp(s)) * std::exp(u * s);
      }, std::log(1e-8) / 0.7, std::log(60.0), 3e-8).value;
      cdouble closed = h_mellin(j, u);
      CHECK(std::abs(direct - closed) < 2e-5 * (1.0 + std::abs(closed)));
    }
}

TEST_CASE("cutoff family") {
  const Cutoff& c = default_cutoff();
  CHECK(c.phi0(0.0) == Approx(1.0).epsilon(1e-12));
  CHECK(c.phi0(1.0) == 0.0);
  CHECK(c.phi0(0.5) == Approx(0.5).epsilon(1e-10)); // bump symmetry
  CHECK(c.phi(0.7) == 1.0);
  CHECK(c.phi(2.5) == 0.0);
  CHECK(c.phi(1.3) == Approx(c.phi0(0.3)).epsilon(1e-12));
  // monotone roll-off
  CHECK(c.phi(1.2) > c.phi(1.4));
  // phi_kappa masks a neighborhood of |x| = 1
  CHECK(c.phi_kappa(1.0, 0.1) == 1.0);
  CHECK(c.phi_kappa(1.05, 0.1) == 1.0);
  CHECK(c.phi_kappa(2.0, 0.1) == 0.0);
  // Mellin transform: simple pole at 0 with residue 1
  CHECK(std::abs(c.phi_tilde(cdouble(1e-3, 0.0)) * 1e-3 - 1.0) < 1e-2);
  // against direct quadrature at s = 2: int_0^2 phi x dx
  double direct = gk_adaptive_real([&](double x) { return c.phi(x) * x; }, 0.0, 2.0, 1e-11);
  CHECK(c.phi_tilde(2.0).real() == Approx(direct).epsilon(1e-8));
  CHECK(std::abs(c.phi_tilde(2.0).imag()) < 1e-12);
}
