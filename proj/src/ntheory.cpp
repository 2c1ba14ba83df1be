#include "elliptika/ntheory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace elliptika {

i64 checked_mul(i64 a, i64 b) {
  __int128 p = (__int128)a * b;
  if (p > INT64_MAX || p < INT64_MIN)
    throw std::overflow_error("checked_mul: 64-bit overflow");
  return (i64)p;
}

static i64 mod_mul(i64 a, i64 b, i64 m) {
  __int128 p = (__int128)a * b % m;
  if (p < 0) p += m;
  return (i64)p;
}

i64 mod_pow(i64 base, i64 exp, i64 m) {
  if (m <= 1) throw std::invalid_argument("mod_pow: modulus must be > 1");
  i64 r = 1;
  base %= m;
  if (base < 0) base += m;
  while (exp > 0) {
    if (exp & 1) r = mod_mul(r, base, m);
    base = mod_mul(base, base, m);
    exp >>= 1;
  }
  return r;
}

i64 mod_inv(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1;
  a %= m;
  if (a < 0) a += m;
  i64 b = a;
  while (b != 0) {
    i64 q = g / b;
    g -= q * b; std::swap(g, b);
    x -= q * x1; std::swap(x, x1);
  }
  if (g != 1) throw std::invalid_argument("mod_inv: not invertible");
  x %= m;
  if (x < 0) x += m;
  return x;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  i64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  // deterministic witness set for n < 3.3e24
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    i64 x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mod_mul(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

int kronecker(i64 d, i64 m) {
  if (m == 0) return (d == 1 || d == -1) ? 1 : 0;
  int sign = 1;
  if (m < 0) {
    m = -m;
    if (d < 0) sign = -sign;
  }
  if ((d & 1) == 0 && (m & 1) == 0) return 0;
  // pull out the even part of m via the period-8 rule
  int v = 0;
  while ((m & 1) == 0) { m >>= 1; ++v; }
  if (v & 1) {
    i64 r = d & 7;
    if (r < 0) r += 8;
    if (r == 3 || r == 5) sign = -sign;
  }
  d %= m;
  if (d < 0) d += m;
  // now m odd positive, 0 <= d < m: standard Jacobi ladder
  while (d != 0) {
    int v2 = 0;
    while ((d & 1) == 0) { d >>= 1; ++v2; }
    if (v2 & 1) {
      i64 r = m & 7;
      if (r == 3 || r == 5) sign = -sign;
    }
    if ((d & 3) == 3 && (m & 3) == 3) sign = -sign;
    std::swap(d, m);
    d %= m;
  }
  return m == 1 ? sign : 0;
}

std::pair<int, i64> valuation_split(i64 n, i64 q) {
  if (n == 0 || q < 2) throw std::invalid_argument("valuation_split: need n != 0, q >= 2");
  int k = 0;
  while (n % q == 0) { n /= q; ++k; }
  return {k, n};
}

i64 radical(i64 n) {
  if (n == 0) throw std::invalid_argument("radical: n == 0");
  i64 r = 1;
  for (auto& [p, e] : factorize(n)) r *= p;
  return r;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
  if (n < 0) n = -n;
  if (n == 0) throw std::invalid_argument("factorize: n == 0");
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) { n /= p; ++e; }
      out.push_back({p, e});
    }
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

// Tonelli-Shanks: x with x^2 = a (mod q), q odd prime, (a|q) = 1.
static i64 sqrt_mod_prime(i64 a, i64 q) {
  a %= q;
  if (a < 0) a += q;
  if (a == 0) return 0;
  if (q % 4 == 3) return mod_pow(a, (q + 1) / 4, q);
  i64 s = q - 1;
  int e = 0;
  while ((s & 1) == 0) { s >>= 1; ++e; }
  i64 n = 2;
  while (kronecker(n, q) != -1) ++n;
  i64 x = mod_pow(a, (s + 1) / 2, q);
  i64 b = mod_pow(a, s, q);
  i64 g = mod_pow(n, s, q);
  int r = e;
  for (;;) {
    i64 t = b;
    int m = 0;
    while (t != 1 && m < r) { t = mod_mul(t, t, q); ++m; }
    if (m == 0) return x;
    i64 gs = mod_pow(g, (i64)1 << (r - m - 1), q);
    g = mod_mul(gs, gs, q);
    x = mod_mul(x, gs, q);
    b = mod_mul(b, g, q);
    r = m;
  }
}

static i64 ipow(i64 q, int k) {
  i64 r = 1;
  while (k-- > 0) r = checked_mul(r, q);
  return r;
}

// roots of x^2 = a (mod q^k) for unit a, odd prime q: Hensel-lifted pair.
static std::vector<i64> unit_roots_odd(i64 a, i64 q, int k) {
  if (kronecker(a % q, q) != 1) return {};
  i64 x = sqrt_mod_prime(a, q);
  i64 mod = q;
  for (int j = 1; j < k; ++j) {
    i64 next = checked_mul(mod, q);
    i64 amod = a % next;
    if (amod < 0) amod += next;
    // Newton step x -> x - (x^2 - a)/(2x)
    i64 num = mod_mul(x, x, next) - amod;
    if (num < 0) num += next;
    i64 inv2x = mod_inv(mod_mul(2, x, next), next);
    x = (x - mod_mul(num, inv2x, next)) % next;
    if (x < 0) x += next;
    mod = next;
  }
  i64 y = mod - x;
  if (x == y) return {x};
  return {std::min(x, y), std::max(x, y)};
}

// roots of x^2 = a (mod 2^k) for odd a: the explicit 1/2/4-solution cases.
static std::vector<i64> unit_roots_two(i64 a, int k) {
  i64 mod = (i64)1 << k;
  i64 am = a % mod;
  if (am < 0) am += mod;
  if (k == 1) return {1};
  if (k == 2) return (am == 1) ? std::vector<i64>{1, 3} : std::vector<i64>{};
  if (am % 8 != 1) return {};
  // lift from x = 1 (mod 8) one bit at a time; at modulus 2^j the
  // correction is +2^(j-2) since (x + 2^(j-2))^2 = x^2 + 2^(j-1) (mod 2^j)
  i64 x = 1;
  for (int j = 4; j <= k; ++j) {
    i64 m2 = (i64)1 << j;
    i64 t = ((__int128)x * x - am) % m2;
    if (t < 0) t += m2;
    if (t != 0) x += (i64)1 << (j - 2);
    x %= m2;
  }
  std::vector<i64> out = {x, mod - x, (mod / 2 - x + mod) % mod, (mod / 2 + x) % mod};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<i64> sqrt_mod_prime_power(i64 a, i64 q, int k) {
  if (k < 1 || q < 2 || !is_prime(q))
    throw std::invalid_argument("sqrt_mod_prime_power: need prime q, k >= 1");
  i64 Q = ipow(q, k);
  a %= Q;
  if (a < 0) a += Q;
  if (a == 0) {
    // x = t * q^ceil(k/2), t in [0, q^floor(k/2))
    i64 step = ipow(q, (k + 1) / 2);
    std::vector<i64> out;
    for (i64 x = 0; x < Q; x += step) out.push_back(x);
    return out;
  }
  auto [v, u] = valuation_split(a, q);
  if (v & 1) return {};
  std::vector<i64> base = (q == 2) ? unit_roots_two(u, k - v) : unit_roots_odd(u, q, k - v);
  if (base.empty()) return {};
  // x = q^{v/2} (r + q^{k-v} t), t in [0, q^{v/2})
  i64 half = ipow(q, v / 2);
  i64 inner = ipow(q, k - v);
  std::vector<i64> out;
  out.reserve(base.size() * half);
  for (i64 t = 0; t < half; ++t)
    for (i64 r : base) out.push_back(half * (r + inner * t) % Q);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int delta_square(i64 a, i64 b) {
  if (b < 1) throw std::invalid_argument("delta_square: b >= 1");
  if (b == 1) return 1;
  for (auto& [q, e] : factorize(b))
    if (sqrt_mod_prime_power(a, q, e).empty()) return 0;
  return 1;
}

std::complex<double> kloosterman_s(i64 a, i64 b, i64 q) {
  if (q < 1) throw std::invalid_argument("kloosterman_s: q >= 1");
  if (q == 1) return 1.0;
  const double w = 2.0 * std::numbers::pi / (double)q;
  double re = 0, im = 0;
  for (i64 x = 1; x < q; ++x) {
    if (std::gcd(x, q) != 1) continue;
    i64 inv = mod_inv(x, q);
    i64 arg = (mod_mul(a, x, q) + mod_mul(b, inv, q)) % q;
    re += std::cos(w * (double)arg);
    im += std::sin(w * (double)arg);
  }
  return {re, im};
}

std::complex<double> gauss_sum(i64 q) {
  if (q < 3 || q % 2 == 0 || !is_prime(q))
    throw std::invalid_argument("gauss_sum: q must be an odd prime");
  double r = std::sqrt((double)q);
  return (q % 4 == 1) ? std::complex<double>(r, 0) : std::complex<double>(0, r);
}

} // namespace elliptika
