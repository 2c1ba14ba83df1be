#pragma once
// Integer arithmetic: Kronecker symbols, p-adic valuations, square roots
// modulo prime powers, classical Kloosterman and Gauss sums.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace elliptika {

using i64 = std::int64_t;

// Throws std::overflow_error if |a*b| does not fit in 64 bits.
i64 checked_mul(i64 a, i64 b);

i64 mod_pow(i64 base, i64 exp, i64 m);       // m > 1, exp >= 0
i64 mod_inv(i64 a, i64 m);                   // gcd(a, m) == 1
bool is_prime(i64 n);                        // deterministic Miller-Rabin

// Kronecker symbol (d | m), extended to all integers with the usual
// conventions for m = 0, m < 0 and the period-8 rule at 2.
int kronecker(i64 d, i64 m);

// n = q^k * u with q coprime to u; returns {k, u}. Requires q >= 2, n != 0.
std::pair<int, i64> valuation_split(i64 n, i64 q);

i64 radical(i64 n);                          // product of distinct primes of |n|

// Prime factorization of |n| by trial division, sorted by prime.
std::vector<std::pair<i64, int>> factorize(i64 n);

// All x in [0, q^k) with x^2 = a (mod q^k), sorted ascending. q prime, k >= 1.
std::vector<i64> sqrt_mod_prime_power(i64 a, i64 q, int k);

// 1 if a is a square modulo b (b >= 1), else 0.
int delta_square(i64 a, i64 b);

// Classical Kloosterman sum S(a, b; q) = sum_{x (q), gcd(x,q)=1} e((ax + b x~)/q).
std::complex<double> kloosterman_s(i64 a, i64 b, i64 q);

// Quadratic Gauss sum sum_{a (q)} (a|q) e(a/q) for odd prime q:
// sqrt(q) if q = 1 (mod 4), i*sqrt(q) if q = 3 (mod 4).
std::complex<double> gauss_sum(i64 q);

} // namespace elliptika
