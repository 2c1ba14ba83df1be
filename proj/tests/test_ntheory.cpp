#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elliptika/ntheory.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

using namespace elliptika;

TEST_CASE("kronecker pinned values") {
  CHECK(kronecker(5, 3) == -1);
  CHECK(kronecker(-1, 5) == 1);
  CHECK(kronecker(2, 15) == 1);
  CHECK(kronecker(0, 7) == 0);
  CHECK(kronecker(3, 1) == 1);
  CHECK(kronecker(1, 0) == 1);
  CHECK(kronecker(4, 0) == 0);
  CHECK(kronecker(-3, -1) == -1);
}

TEST_CASE("kronecker matches Legendre via Euler criterion") {
  for (i64 q = 3; q < 200; q += 2) {
    if (!is_prime(q)) continue;
    for (i64 d = -199; d < 200; ++d) {
      i64 dm = ((d % q) + q) % q;
      int leg;
      if (dm == 0) leg = 0;
      else leg = mod_pow(dm, (q - 1) / 2, q) == 1 ? 1 : -1;
      CHECK(kronecker(d, q) == leg);
    }
  }
}

TEST_CASE("kronecker is completely multiplicative in both arguments") {
  for (i64 d = -30; d <= 30; ++d)
    for (i64 m1 = 1; m1 <= 20; ++m1)
      for (i64 m2 = 1; m2 <= 20; ++m2)
        CHECK(kronecker(d, m1 * m2) == kronecker(d, m1) * kronecker(d, m2));
}

TEST_CASE("valuation_split / radical / factorize") {
  CHECK(valuation_split(48, 2) == std::pair<int, i64>{4, 3});
  CHECK(valuation_split(7, 3) == std::pair<int, i64>{0, 7});
  CHECK(valuation_split(-24, 2) == std::pair<int, i64>{3, -3});
  CHECK(radical(360) == 30);
  CHECK(radical(1) == 1);
  CHECK(radical(97) == 97);
  auto f = factorize(360);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<i64, int>{2, 3});
  CHECK(f[1] == std::pair<i64, int>{3, 2});
  CHECK(f[2] == std::pair<i64, int>{5, 1});
}

TEST_CASE("sqrt_mod_prime_power agrees with exhaustive search") {
  auto brute = [](i64 a, i64 Q) {
    std::vector<i64> v;
    for (i64 x = 0; x < Q; ++x)
      if (((__int128)x * x - a) % Q == 0) v.push_back(x);
    return v;
  };
  for (i64 q : {2, 3, 5, 7, 11, 13}) {
    i64 Q = q;
    for (int k = 1; Q <= 10000; ++k, Q *= q) {
      for (i64 a = -5; a < Q + 5; a += (Q > 600 ? 7 : 1)) {
        i64 am = ((a % Q) + Q) % Q;
        CHECK(sqrt_mod_prime_power(a, q, k) == brute(am, Q));
      }
    }
  }
}

TEST_CASE("delta_square pinned values and consistency") {
  CHECK(delta_square(1, 8) == 1);
  CHECK(delta_square(5, 8) == 0);
  CHECK(delta_square(2, 4) == 0);
  CHECK(delta_square(0, 12) == 1);
  CHECK(delta_square(7, 9) == 1); // 4^2 = 16 = 7 (mod 9)
  for (i64 b = 1; b <= 60; ++b)
    for (i64 a = -10; a <= 70; ++a) {
      int found = 0;
      for (i64 x = 0; x < b && !found; ++x)
        if ((((__int128)x * x - a) % b + b) % b == 0) found = 1;
      CHECK(delta_square(a, b) == found);
    }
}

TEST_CASE("kloosterman sums: reality, symmetry, Weil bound") {
  for (i64 q : {3, 5, 7, 11, 13, 101}) {
    for (i64 a = 0; a < std::min<i64>(q, 12); ++a)
      for (i64 b = 0; b < std::min<i64>(q, 12); ++b) {
        auto s = kloosterman_s(a, b, q);
        CHECK(std::abs(s.imag()) < 1e-9); // x -> -x pairs terms
        auto s2 = kloosterman_s(b, a, q);
        CHECK(std::abs(s.real() - s2.real()) < 1e-9);
        i64 g = std::gcd(std::gcd(a, b), q);
        if (g == q) continue; // degenerate: sum of q-1 ones
        CHECK(std::abs(s) <= 2.0 * std::sqrt((double)g) * std::sqrt((double)q) + 1e-9);
      }
  }
  // Ramanujan case S(a, 0; q) = -1 for a coprime to prime q
  CHECK(kloosterman_s(1, 0, 7).real() == doctest::Approx(-1.0).epsilon(1e-12));
  // S(1,1;5) = 2 + 2cos(4 pi/5) = (5 - sqrt(5))/2 - 1
  CHECK(kloosterman_s(1, 1, 5).real() == doctest::Approx(0.3819660113).epsilon(1e-9));
}

TEST_CASE("gauss_sum matches the defining character sum") {
  for (i64 q : {3, 5, 7, 11, 13, 17, 19, 23}) {
    std::complex<double> direct = 0;
    for (i64 a = 0; a < q; ++a) {
      double t = 2.0 * std::numbers::pi * (double)a / (double)q;
      direct += (double)kronecker(a, q) * std::complex<double>(std::cos(t), std::sin(t));
    }
    auto g = gauss_sum(q);
    CHECK(std::abs(direct - g) < 1e-9);
    // g^2 = (-1)^((q-1)/2) q
    auto g2 = g * g;
    double expect = ((q - 1) / 2 % 2 == 0 ? 1.0 : -1.0) * (double)q;
    CHECK(g2.real() == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("mod_pow / mod_inv / is_prime basics") {
  CHECK(mod_pow(2, 10, 1000) == 24);
  CHECK(mod_inv(3, 7) == 5);
  CHECK_THROWS(mod_inv(6, 9));
  CHECK(is_prime(2));
  CHECK(is_prime(1999));
  CHECK(!is_prime(1));
  CHECK(!is_prime(3599)); // 59*61
  CHECK(is_prime(1000000007));
  CHECK_THROWS(checked_mul(INT64_MAX, 2));
}
