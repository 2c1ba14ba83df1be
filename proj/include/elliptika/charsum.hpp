#pragma once
// Generalized Kloosterman sums
//   Kl_{l,f}(xi, n) = sum over a mod 4lf^2 with f^2 | a^2-4n and
//   (a^2-4n)/f^2 = 0,1 (mod 4) of ((a^2-4n)/f^2 | l) e(a xi / 4lf^2),
// evaluated either by the definition or through prime-by-prime
// factorization with closed forms at odd primes.

#include "elliptika/ntheory.hpp"

#include <complex>

namespace elliptika {

struct KlParams {
  i64 l = 1;   // > 0
  i64 f = 1;   // > 0
  i64 xi = 0;
  i64 n = 1;   // != 0
};

// Definitional evaluation; throws std::length_error if 4lf^2 > modulus_cap.
std::complex<double> kl_bruteforce(const KlParams& p, i64 modulus_cap = 100000000);

// Local factor at an odd prime q with l-part q^k1 and f-part q^k2; xi is
// the already-twisted local frequency. The result is real. `branch`
// selects which square root is used where one is needed (0 = smallest,
// 1 = largest); the value is independent of the choice.
double kl_local_odd(i64 q, int k1, int k2, i64 xi, i64 n, int branch = 0);

// Same local factor evaluated by enumerating the solutions of
// a^2 = 4n (mod q^(2 k2)) instead of the case tables. k1 >= 1.
double kl_local_enum(i64 q, int k1, int k2, i64 xi, i64 n);

// Full sum assembled from local factors (CRT).
std::complex<double> kl_factor(const KlParams& p, int branch = 0);

// Certified upper bound for |Kl_{l,f}(xi,n)|: either 0 (the sum provably
// vanishes) or 4 max(1, log2(lf^2)) sqrt(l g) sqrt(gcd(xi/sqrt(g), l))
// with g = gcd(n, f^2).
double kl_bound(const KlParams& p);

} // namespace elliptika
