#include "elliptika/asymp.hpp"

#include "elliptika/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

namespace elliptika {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

cdouble unit_exp(double phase) { // e(phase)
  double p = phase - std::floor(phase);
  return {std::cos(kTwoPi * p), std::sin(kTwoPi * p)};
}

const std::vector<double>& coeffs(const AsymptoticExpansion& e, int sign) {
  return sign > 0 ? e.coeffs_plus : e.coeffs_minus;
}

void check_expansion(const AsymptoticExpansion& e) {
  if (e.coeffs_plus.size() != e.coeffs_minus.size() || e.coeffs_plus.empty())
    throw std::invalid_argument("expansion: coefficient lists must match and be nonempty");
  if (!(e.a > -2.0)) throw std::invalid_argument("expansion: need a > -2");
  if (!(e.kappa > 0.0 && e.kappa < 0.5))
    throw std::invalid_argument("expansion: kappa out of (0, 1/2)");
}

// sum_{j+k=m} c_k (-2)^{-j} binom(z, j), the kernel shared by the shift
// formula (z = delta) and the coefficient function (z = u/2)
cdouble shift_sum(const std::vector<double>& c, int m, cdouble z) {
  cdouble acc = 0.0;
  for (int j = 0; j <= m; ++j)
    acc += c[m - j] * binom_gen(z, j) / std::pow(-2.0, j);
  return acc;
}

// The x-independent part of the contour integrand, phi~(u) c_m(u) Gamma(...),
// cached per (contour, expansion, m, sign): the assembly evaluates the same
// few transforms at thousands of x values.
const std::vector<cdouble>& node_coeffs(const MellinContour& ct,
                                        const AsymptoticExpansion& e, int m,
                                        int sign) {
  static std::map<std::tuple<std::uint64_t, int, int, std::size_t>,
                  std::vector<cdouble>>
      cache;
  static std::shared_mutex mu;
  const auto& c = coeffs(e, sign);
  std::size_t h = std::hash<double>{}(e.a);
  for (double v : c) h ^= std::hash<double>{}(v) + 0x9e3779b97f4a7c15ULL +
                          (h << 6) + (h >> 2);
  auto key = std::make_tuple(ct.id, m, sign, h);
  {
    std::shared_lock<std::shared_mutex> lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<cdouble> v(2 * ct.n + 1);
  for (int k = 0; k <= 2 * ct.n; ++k) {
    cdouble u(ct.tau, (k - ct.n) * ct.step);
    v[k] = ct.phi_vals[k] * c_coeff(e, m, u, sign) *
           cgamma(m + 1.0 + (e.a + u) / 2.0);
    if (k == 0 || k == 2 * ct.n) v[k] *= 0.5;
  }
  std::unique_lock<std::shared_mutex> lk(mu);
  return cache.emplace(key, std::move(v)).first->second;
}

cdouble transform_on(const MellinContour& ct, const AsymptoticExpansion& e, int m,
                     cdouble x, int sign) {
  const auto& cv = node_coeffs(ct, e, m, sign);
  cdouble log_x = std::log(x); // principal branch; x = -|x| gives +i pi
  // exp(-(u/2) log x) along u = tau + it is geometric in the node index
  cdouble w = std::exp(-(cdouble(ct.tau, -ct.n * ct.step) / 2.0) * log_x);
  cdouble ratio = std::exp(cdouble(0.0, -ct.step / 2.0) * log_x);
  KahanSum re, im;
  for (int k = 0; k <= 2 * ct.n; ++k) {
    cdouble g = cv[k] * w;
    re.add(g.real());
    im.add(g.imag());
    w *= ratio;
  }
  // (1/2 pi i) int g du with du = i dt
  return cdouble(re.value(), im.value()) * ct.step / kTwoPi;
}

void check_request(const AsymptoticExpansion& e, const ExpansionRequest& req,
                   const MellinFunction& phi, double D) {
  check_expansion(e);
  if (D == 0.0) throw std::invalid_argument("expansion: D must be nonzero");
  if (req.M < 0 || req.M >= (int)e.coeffs_plus.size())
    throw std::invalid_argument("expansion: M exceeds coefficient count");
  if (!(req.tau > 0.0)) throw std::invalid_argument("expansion: tau must be > 0");
  if (req.tau1 < 0.0) throw std::invalid_argument("expansion: tau1 must be >= 0");
  if (req.tau1 == 0.0 && phi.pole_order > 1)
    throw std::invalid_argument("expansion: tau1 = 0 needs an at most simple pole");
}

} // namespace

MellinContour make_mellin_contour(const MellinFunction& phi, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("a_transform: tau must be > 0");
  if (!phi.mellin) throw std::invalid_argument("a_transform: phi has no transform");
  MellinContour ct;
  ct.tau = tau;
  ct.step = 0.05;
  ct.n = (int)std::lround(40.0 / ct.step);
  ct.phi_vals.resize(2 * ct.n + 1);
  for (int k = 0; k <= 2 * ct.n; ++k)
    ct.phi_vals[k] = phi.mellin(cdouble(tau, (k - ct.n) * ct.step));
  static std::atomic<std::uint64_t> next_id{1};
  ct.id = next_id.fetch_add(1);
  return ct;
}

cdouble binom_gen(cdouble z, int j) {
  cdouble acc = 1.0;
  for (int r = 0; r < j; ++r) acc *= (z - (double)r) / (double)(r + 1);
  return acc;
}

AsymptoticExpansion expansion_shift(const AsymptoticExpansion& e, double delta) {
  check_expansion(e);
  AsymptoticExpansion out;
  out.a = e.a + 2.0 * delta;
  out.kappa = e.kappa;
  out.remainder_bound = 0.0; // caller refits if needed
  double scale = std::pow(2.0, delta);
  auto shift = [&](const std::vector<double>& c) {
    std::vector<double> d(c.size());
    for (int m = 0; m < (int)c.size(); ++m)
      d[m] = scale * shift_sum(c, m, cdouble(delta, 0.0)).real();
    return d;
  };
  out.coeffs_plus = shift(e.coeffs_plus);
  out.coeffs_minus = shift(e.coeffs_minus);
  return out;
}

cdouble c_coeff(const AsymptoticExpansion& e, int m, cdouble u, int sign) {
  const auto& c = coeffs(e, sign);
  if (m < 0 || m >= (int)c.size())
    throw std::invalid_argument("c_coeff: m exceeds coefficient count");
  // (i/2pi)^z with the principal log: log(i/2pi) = -log(2pi) + i pi/2
  cdouble z = 1.0 + m + (u + e.a) / 2.0;
  cdouble pref = std::exp(z * cdouble(-std::log(kTwoPi), kPi / 2.0));
  return pref * std::exp((u / 2.0) * std::log(2.0)) * shift_sum(c, m, u / 2.0);
}

cdouble a_transform(const AsymptoticExpansion& e, int m, double tau,
                    const MellinFunction& phi, cdouble x, int sign) {
  check_expansion(e);
  if (m < 0 || m >= (int)e.coeffs_plus.size())
    throw std::invalid_argument("a_transform: m exceeds coefficient count");
  MellinContour ct = make_mellin_contour(phi, tau);
  return transform_on(ct, e, m, x, sign);
}

cdouble expansion_inside(const AsymptoticExpansion& e, const ExpansionRequest& req,
                         const MellinFunction& phi, double C, double D,
                         const MellinContour* pre) {
  check_request(e, req, phi, D);
  // The principal-branch convention below is validated against the
  // quadrature oracle for D > 0; negative D follows by conjugation
  // (the integral of a real profile satisfies I(-D) = conj(I(D))).
  if (D < 0.0) return std::conj(expansion_inside(e, req, phi, C, -D, pre));
  MellinContour ct = pre ? *pre : make_mellin_contour(phi, req.tau);
  cdouble total = 0.0;
  for (int m = 0; m <= req.M; ++m)
    for (int s : {+1, -1}) {
      cdouble x(-s * C * C * D, 0.0); // -+ C^2 D
      cdouble denom = std::pow(cdouble(-s * D, 0.0),
                               cdouble(m + 1.0 + e.a / 2.0, 0.0));
      total += unit_exp(s * D) * transform_on(ct, e, m, x, s) / denom;
    }
  return total;
}

cdouble expansion_outside(const AsymptoticExpansion& e, const ExpansionRequest& req,
                          const MellinFunction& phi, double C, double D,
                          const MellinContour* pre) {
  check_request(e, req, phi, D);
  if (D < 0.0) return std::conj(expansion_outside(e, req, phi, C, -D, pre));
  MellinContour ct = pre ? *pre : make_mellin_contour(phi, req.tau);
  cdouble total = 0.0;
  for (int m = 0; m <= req.M; ++m)
    for (int s : {+1, -1}) {
      cdouble x(s * C * C * D, 0.0); // +- C^2 D
      cdouble denom = std::pow(cdouble(s * D, 0.0),
                               cdouble(m + 1.0 + e.a / 2.0, 0.0));
      double par = (m % 2 == 0) ? 1.0 : -1.0;
      total += par * unit_exp(s * D) * transform_on(ct, e, m, x, s) / denom;
    }
  return total;
}

cdouble leading_term(const AsymptoticExpansion& e, const MellinFunction& phi,
                     double C, double D) {
  (void)C; // the leading coefficient does not depend on C
  check_expansion(e);
  if (D == 0.0) throw std::invalid_argument("leading_term: D must be nonzero");
  if (D < 0.0) return std::conj(leading_term(e, phi, C, -D));
  if (phi.pole_order > 1)
    throw std::invalid_argument("leading_term: needs an at most simple pole");
  double a = e.a;
  if (std::rint(a) != a || a < -2.0)
    throw std::invalid_argument("leading_term: needs integer a >= -2");
  long ia = std::lrint(a);
  if (((ia % 4) + 4) % 4 == 0) return {0.0, 0.0};
  cdouble parity = 1.0 + std::exp(cdouble(0.0, kPi * (1.0 - a / 2.0)));
  cdouble ipow = std::exp(cdouble(1.0 + a / 2.0, 0.0) *
                          cdouble(-std::log(kTwoPi), kPi / 2.0));
  cdouble total = 0.0;
  for (int s : {+1, -1}) {
    cdouble c0a = coeffs(e, s)[0] * ipow * cgamma(1.0 + a / 2.0) * phi.residue;
    cdouble denom = std::pow(cdouble(s * D, 0.0), cdouble(1.0 + a / 2.0, 0.0));
    total += unit_exp(s * D) * c0a * parity / denom;
  }
  return total;
}

double remainder_fit(const std::function<double(double)>& h,
                     const AsymptoticExpansion& e, int samples) {
  check_expansion(e);
  int M = (int)e.coeffs_plus.size() - 1;
  double worst = 0.0;
  for (int i = 1; i <= samples; ++i) {
    double x = e.kappa * i / (samples + 1.0);
    for (int s : {+1, -1}) {
      const auto& c = coeffs(e, s);
      double series = 0.0;
      for (int m = M; m >= 0; --m) series = series * x + c[m];
      series *= std::pow(x, e.a / 2.0);
      double hv = h(s * (1.0 - x));
      double tail = std::abs(hv - series);
      // skip samples where cancellation noise dominates the true tail
      if (tail <= 1e-13 * (std::abs(hv) + std::abs(series))) continue;
      worst = std::max(worst, tail / std::pow(x, e.a / 2.0 + M + 1));
    }
  }
  return worst;
}

} // namespace elliptika
