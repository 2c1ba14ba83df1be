#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elliptika/charsum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

using namespace elliptika;

// definitional local sum at an odd prime: a mod q^(k1+2k2), the mod-4
// condition being vacuous there
static double local_direct(i64 q, int k1, int k2, i64 xi, i64 n) {
  i64 q2k2 = 1;
  for (int i = 0; i < 2 * k2; ++i) q2k2 *= q;
  i64 m = q2k2;
  for (int i = 0; i < k1; ++i) m *= q;
  std::complex<double> sum = 0;
  i64 lpart = m / q2k2;
  for (i64 a = 0; a < m; ++a) {
    __int128 t = (__int128)a * a - 4 * (__int128)n;
    if (t % q2k2 != 0) continue;
    i64 s = (i64)(t / q2k2);
    int chi = kronecker(s, lpart);
    if (chi == 0) continue;
    i64 ph = (i64)(((__int128)a * xi) % m);
    if (ph < 0) ph += m;
    double ang = 2.0 * std::numbers::pi * (double)ph / (double)m;
    sum += (double)chi * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  CHECK(std::abs(sum.imag()) < 1e-8);
  return sum.real();
}

TEST_CASE("pinned small values of the full sum") {
  // l=f=1: the only constraint is a^2-4n = 0,1 (mod 4), always true
  for (i64 n : {1, -3, 7})
    for (i64 xi : {0, 1, 4}) {
      auto v = kl_bruteforce({1, 1, xi, n});
      CHECK(v.real() == doctest::Approx(xi % 4 == 0 ? 4.0 : 0.0).epsilon(1e-12));
      CHECK(std::abs(v.imag()) < 1e-12);
    }
  // worked by hand: l=1, f=2, n=3 leaves a = 0 (mod 4) only
  for (i64 xi = -8; xi <= 8; ++xi)
    CHECK(kl_bruteforce({1, 2, xi, 3}).real() ==
          doctest::Approx(xi % 4 == 0 ? 4.0 : 0.0).epsilon(1e-10));
  CHECK(kl_bruteforce({2, 1, 0, 1}).real() == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("sum is real and even in xi") {
  for (i64 l : {1, 2, 3, 6})
    for (i64 f : {1, 2, 3})
      for (i64 n : {-5, 1, 4, 9})
        for (i64 xi : {0, 1, 3, 8}) {
          auto a = kl_bruteforce({l, f, xi, n});
          auto b = kl_bruteforce({l, f, -xi, n});
          CHECK(std::abs(a.imag()) < 1e-9);
          CHECK(std::abs(a - b) < 1e-9);
        }
}

TEST_CASE("local closed forms match the definitional local sum") {
  for (i64 q : {3, 5, 7}) {
    for (int k1 = 0; k1 <= 3; ++k1)
      for (int k2 = 0; k2 <= 2; ++k2) {
        i64 m = 1;
        for (int i = 0; i < k1 + 2 * k2; ++i) m *= q;
        if (m > 3000) continue;
        for (i64 n : {(i64)1, (i64)2, (i64)-3, q, 4 * q, q * q, -q * q * q, (i64)9})
          for (i64 xi = 0; xi < std::min<i64>(m, 60); ++xi) {
            double want = local_direct(q, k1, k2, xi, n);
            double got = kl_local_odd(q, k1, k2, xi, n);
            CAPTURE(q); CAPTURE(k1); CAPTURE(k2); CAPTURE(n); CAPTURE(xi);
            CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(1.0));
            if (k1 >= 1)
              CHECK(kl_local_enum(q, k1, k2, xi, n) ==
                    doctest::Approx(want).epsilon(1e-9).scale(1.0));
          }
      }
  }
}

TEST_CASE("square-root branch choice does not change the local value") {
  for (i64 q : {3, 5, 7, 11})
    for (int k1 = 0; k1 <= 2; ++k1)
      for (int k2 = 0; k2 <= 2; ++k2)
        for (i64 n : {(i64)1, (i64)4, -q * q, (i64)9, (i64)25})
          for (i64 xi = 0; xi < 30; ++xi)
            CHECK(kl_local_odd(q, k1, k2, xi, n, 0) ==
                  doctest::Approx(kl_local_odd(q, k1, k2, xi, n, 1)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("factored evaluation equals brute force") {
  for (i64 l = 1; l <= 8; ++l)
    for (i64 f = 1; f <= 4; ++f)
      for (i64 n = -6; n <= 6; ++n) {
        if (n == 0) continue;
        for (i64 xi = -6; xi <= 6; ++xi) {
          auto want = kl_bruteforce({l, f, xi, n});
          auto got = kl_factor({l, f, xi, n});
          CAPTURE(l); CAPTURE(f); CAPTURE(n); CAPTURE(xi);
          CHECK(std::abs(got - want) < 1e-9);
        }
      }
}

TEST_CASE("twist invariance: |Kl(alpha xi)| = |Kl(xi)| for units alpha") {
  for (i64 l : {3, 4, 6})
    for (i64 f : {1, 2}) {
      i64 m = 4 * l * f * f;
      for (i64 alpha = 1; alpha < m; ++alpha) {
        if (std::gcd(alpha, m) != 1) continue;
        for (i64 xi : {1, 2, 3})
          for (i64 n : {1, -2, 5})
            CHECK(std::abs(kl_bruteforce({l, f, alpha * xi, n})) ==
                  doctest::Approx(std::abs(kl_bruteforce({l, f, xi, n}))).epsilon(1e-9).scale(1.0));
      }
    }
}

TEST_CASE("certified bound dominates the sum, vanishing cases included") {
  int gate_zero = 0;
  for (i64 l = 1; l <= 10; ++l)
    for (i64 f = 1; f <= 4; ++f)
      for (i64 n = -8; n <= 8; ++n) {
        if (n == 0) continue;
        for (i64 xi = -8; xi <= 8; ++xi) {
          double b = kl_bound({l, f, xi, n});
          double v = std::abs(kl_factor({l, f, xi, n}));
          CAPTURE(l); CAPTURE(f); CAPTURE(n); CAPTURE(xi);
          CHECK(v <= b + 1e-9);
          if (b == 0.0) { CHECK(v < 1e-9); ++gate_zero; }
        }
      }
  CHECK(gate_zero > 100); // the vanishing gate has to actually fire
}

TEST_CASE("bound is tight at l = f = 1") {
  CHECK(kl_bound({1, 1, 0, 1}) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::abs(kl_factor({1, 1, 0, 1})) == doctest::Approx(4.0).epsilon(1e-12));
}
