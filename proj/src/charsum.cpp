#include "elliptika/charsum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace elliptika {

namespace {

constexpr int kInfValuation = 1 << 20;

i64 ipow(i64 q, int k) {
  i64 r = 1;
  while (k-- > 0) r = checked_mul(r, q);
  return r;
}

int val_or_inf(i64 x, i64 q) {
  return x == 0 ? kInfValuation : valuation_split(x, q).first;
}

// e(num / den) with exact integer phase reduction
std::complex<double> unit_phase(__int128 num, i64 den) {
  i64 m = (i64)(num % den);
  if (m < 0) m += den;
  double t = 2.0 * std::numbers::pi * (double)m / (double)den;
  return {std::cos(t), std::sin(t)};
}

// ((x | q))^k with the zero convention for q | x
int kron_pow(__int128 x, i64 q, int k) {
  i64 r = (i64)(x % q);
  if (r < 0) r += q;
  if (r == 0) return k >= 1 ? 0 : 1;
  if (k % 2 == 0) return 1;
  return kronecker(r, q);
}

i64 pick_root(const std::vector<i64>& roots, int branch) {
  return branch == 0 ? roots.front() : roots.back();
}

double local_angle(i64 s, i64 xi, i64 den) {
  __int128 num = (__int128)s * xi % den;
  if (num < 0) num += den;
  return 2.0 * std::numbers::pi * (double)(i64)num / (double)den;
}

} // namespace

std::complex<double> kl_bruteforce(const KlParams& p, i64 modulus_cap) {
  if (p.l < 1 || p.f < 1 || p.n == 0)
    throw std::invalid_argument("kl_bruteforce: need l,f >= 1, n != 0");
  i64 m = checked_mul(4, checked_mul(p.l, checked_mul(p.f, p.f)));
  if (m > modulus_cap) throw std::length_error("kl_bruteforce: modulus above cap");
  i64 f2 = p.f * p.f;
  std::complex<double> sum = 0;
  for (i64 a = 0; a < m; ++a) {
    __int128 t = (__int128)a * a - 4 * (__int128)p.n;
    if (t % f2 != 0) continue;
    i64 s = (i64)(t / f2);
    i64 s4 = ((s % 4) + 4) % 4;
    if (s4 > 1) continue;
    int chi = kronecker(s, p.l);
    if (chi == 0) continue;
    sum += (double)chi * unit_phase((__int128)a * p.xi, m);
  }
  return sum;
}

double kl_local_odd(i64 q, int k1, int k2, i64 xi, i64 n, int branch) {
  if (q < 3 || q % 2 == 0 || !is_prime(q) || k1 < 0 || k2 < 0 || n == 0)
    throw std::invalid_argument("kl_local_odd: bad arguments");
  if (k1 == 0 && k2 == 0) return 1.0;
  int vxi = val_or_inf(xi, q);

  if (k2 == 0) {
    double pref = (double)ipow(q, k1 - 1);
    if (vxi >= k1) {
      if (k1 % 2 == 0) return pref * (double)(q - 1 - kronecker(4 * n, q));
      return pref * (double)(n % q == 0 ? q - 1 : -1);
    }
    if (vxi == k1 - 1) {
      if (k1 % 2 == 0) {
        int chi = kronecker(4 * n, q);
        if (chi == -1) return 0.0;
        i64 s = chi == 0 ? 0 : pick_root(sqrt_mod_prime_power(4 * n, q, 1), branch);
        return -pref * (double)(1 + chi) * std::cos(local_angle(s, xi, ipow(q, k1)));
      }
      i64 xiq = (xi / ipow(q, vxi)) % q;
      if (xiq < 0) xiq += q;
      i64 a = mod_inv(2, q) * xiq % q;
      i64 b = 2 * xiq % q * ((n % q + q) % q) % q;
      return pref * kloosterman_s(a, b, q).real();
    }
    return 0.0;
  }

  auto [v, nu] = valuation_split(n, q);

  if (k1 == 0) {
    if (v >= 2 * k2) return vxi >= k2 ? (double)ipow(q, k2) : 0.0;
    if (v % 2 != 0) return 0.0;
    int r = v / 2;
    auto roots = sqrt_mod_prime_power(4 * nu, q, 2 * k2 - 2 * r);
    if (roots.empty() || vxi < r) return 0.0;
    i64 s = pick_root(roots, branch);
    return (double)ipow(q, r) * 2.0 * std::cos(local_angle(s, xi, ipow(q, 2 * k2 - r)));
  }

  // k1, k2 >= 1
  if (vxi < k1 - 1) return 0.0;
  double pref = (double)ipow(q, k1 - 1);

  if (v >= 2 * k2) {
    // a = 0 (mod q^k2) forced; the survivors form a short shifted sum
    i64 n2 = n / ipow(q, 2 * k2);
    i64 den = ipow(q, k1 + k2);
    std::complex<double> sum = 0;
    i64 lim = ipow(q, k2 + 1);
    for (i64 a2 = 0; a2 < lim; ++a2) {
      int chi = kron_pow((__int128)a2 * a2 - 4 * (__int128)n2, q, k1);
      if (chi == 0) continue;
      sum += (double)chi * unit_phase((__int128)a2 * xi, den);
    }
    return pref * sum.real();
  }

  if (v % 2 != 0) return 0.0;
  int r = v / 2;
  auto roots = sqrt_mod_prime_power(4 * nu, q, 2 * (k2 - r) + 1);
  if (roots.empty() || vxi < k1 + r - 1) return 0.0;
  i64 s = pick_root(roots, branch);
  double angle = local_angle(s, xi, ipow(q, k1 + 2 * k2 - r));
  pref *= (double)ipow(q, r);
  if (vxi >= k1 + r)
    return k1 % 2 == 0 ? pref * 2.0 * (double)(q - 1) * std::cos(angle) : 0.0;
  if (k1 % 2 == 0) return -pref * 2.0 * std::cos(angle);
  i64 xiq = (xi / ipow(q, vxi)) % q;
  int chi = kron_pow((__int128)2 * xiq * s, q, 1);
  double g = 2.0 * std::sqrt((double)q) * (double)chi * pref;
  return q % 4 == 1 ? g * std::cos(angle) : -g * std::sin(angle);
}

double kl_local_enum(i64 q, int k1, int k2, i64 xi, i64 n) {
  if (q < 3 || q % 2 == 0 || !is_prime(q) || k1 < 1 || k2 < 0 || n == 0)
    throw std::invalid_argument("kl_local_enum: bad arguments");
  if (val_or_inf(xi, q) < k1 - 1) return 0.0;
  i64 q2k2 = ipow(q, 2 * k2);
  i64 den = ipow(q, k1 + 2 * k2);
  std::vector<i64> base;
  if (k2 == 0) {
    for (i64 a = 0; a < q; ++a) base.push_back(a);
  } else {
    base = sqrt_mod_prime_power(4 * n, q, 2 * k2);
  }
  std::complex<double> sum = 0;
  i64 lift = q2k2;
  for (i64 b : base)
    for (i64 t = 0; t < (k2 == 0 ? 1 : q); ++t) {
      i64 a0 = b + t * lift;
      __int128 sval = ((__int128)a0 * a0 - 4 * (__int128)n) / q2k2;
      int chi = kron_pow(sval, q, k1);
      if (chi == 0) continue;
      sum += (double)chi * unit_phase((__int128)a0 * xi, den);
    }
  return (double)ipow(q, k1 - 1) * sum.real();
}

static std::complex<double> kl_local_two(int k1, int k2, i64 xi, i64 n) {
  i64 m = (i64)1 << (2 + k1 + 2 * k2);
  i64 f2 = (i64)1 << (2 * k2);
  i64 l2 = (i64)1 << k1;
  std::complex<double> sum = 0;
  for (i64 a = 0; a < m; ++a) {
    __int128 t = (__int128)a * a - 4 * (__int128)n;
    if (t % f2 != 0) continue;
    i64 s = (i64)(t / f2);
    i64 s4 = ((s % 4) + 4) % 4;
    if (s4 > 1) continue;
    int chi = kronecker(s, l2);
    if (chi == 0) continue;
    sum += (double)chi * unit_phase((__int128)a * xi, m);
  }
  return sum;
}

std::complex<double> kl_factor(const KlParams& p, int branch) {
  if (p.l < 1 || p.f < 1 || p.n == 0)
    throw std::invalid_argument("kl_factor: need l,f >= 1, n != 0");
  i64 m = checked_mul(4, checked_mul(p.l, checked_mul(p.f, p.f)));
  std::complex<double> prod = 1.0;
  for (auto& [q, e] : factorize(m)) {
    i64 mq = ipow(q, e);
    i64 rest = (m / mq) % mq;
    i64 xiq = mod_inv(rest, mq) * ((p.xi % mq + mq) % mq) % mq;
    int k1 = valuation_split(p.l, q).first;
    int k2 = valuation_split(p.f, q).first;
    if (q == 2)
      prod *= kl_local_two(k1, k2, xiq, p.n);
    else
      prod *= kl_local_odd(q, k1, k2, xiq, p.n, branch);
    if (prod == std::complex<double>(0.0, 0.0)) return prod;
  }
  return prod;
}

double kl_bound(const KlParams& p) {
  if (p.l < 1 || p.f < 1 || p.n == 0)
    throw std::invalid_argument("kl_bound: need l,f >= 1, n != 0");
  i64 f2 = checked_mul(p.f, p.f);
  if (!delta_square(4 * p.n, f2)) return 0.0;
  i64 g = std::gcd(std::abs(p.n), f2);
  i64 s = (i64)std::llround(std::sqrt((double)g));
  while (s * s > g) --s;
  while ((s + 1) * (s + 1) <= g) ++s;
  if (s * s != g) return 0.0; // non-square gcd forces an empty sum
  i64 gate = checked_mul(p.l, s) / radical(p.l);
  if (gate != 0 && p.xi % gate != 0) return 0.0;
  // base-2 log: with the natural log the pinned constant 4 is violated
  // already at (l,f,xi,n) = (3,1,8,-7) where the sum reaches 8
  double lg = std::max(1.0, std::log2((double)(p.l * f2)));
  double inner = (double)std::gcd(p.xi / s, p.l);
  return 4.0 * lg * std::sqrt((double)(p.l * g)) * std::sqrt(inner);
}

} // namespace elliptika
