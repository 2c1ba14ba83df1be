#include "elliptika/specfun.hpp"

#include "elliptika/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

namespace elliptika {

namespace {
constexpr double kPi = std::numbers::pi;
}

cdouble cgamma(cdouble z) {
  // Lanczos, g = 7, 9 terms
  static const double g[9] = {
      0.99999999999980993,    676.5203681218851,    -1259.1392167224028,
      771.32342877765313,     -176.61502916214059,  12.507343278686905,
      -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    if (z.imag() == 0.0 && z.real() == std::floor(z.real()))
      throw std::domain_error("cgamma: pole");
    return kPi / (std::sin(kPi * z) * cgamma(1.0 - z));
  }
  z -= 1.0;
  cdouble x = g[0];
  for (int i = 1; i < 9; ++i) x += g[i] / (z + (double)i);
  cdouble t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cdouble bessel_k(cdouble nu, double x, double abs_tol) {
  if (x <= 0) throw std::domain_error("bessel_k: x > 0 required");
  double T = std::acosh(std::max(2.0, 1.0 + 50.0 / x));
  // split so each segment sees at most ~quarter period of cosh(i Im(nu) t)
  double freq = 1.0 + std::abs(nu.imag());
  int nseg = (int)std::ceil(T * freq / (kPi / 4.0));
  if (nseg < 4) nseg = 4;
  cdouble total = 0.0;
  for (int s = 0; s < nseg; ++s) {
    double a = T * s / nseg, b = T * (s + 1) / nseg;
    total += gk_adaptive([&](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(nu * t); },
                         a, b, abs_tol / nseg).value;
  }
  return total;
}

static double k0_of_2() {
  static const double v = bessel_k(0.0, 2.0).real();
  return v;
}

double big_f(double x) {
  if (x < 0) throw std::domain_error("big_f: x >= 0 required");
  double hi = std::max(x, 1.0) + 45.0; // tail below 1e-19
  if (x >= hi) return 0.0;
  double v = gk_adaptive_real([](double y) { return std::exp(-y - 1.0 / y) / y; },
                              x, hi, 1e-14);
  return v / (2.0 * k0_of_2());
}

cdouble big_f_mellin(cdouble u) {
  if (std::abs(u) == 0.0) throw std::domain_error("big_f_mellin: pole at 0");
  return bessel_k(u, 2.0) / (u * k0_of_2());
}

namespace {

// 1/Gamma(z), entire (vanishes at the poles of Gamma)
cdouble cgamma_recip(cdouble z) {
  if (z.real() >= 0.5) return 1.0 / cgamma(z);
  return std::sin(kPi * z) * cgamma(1.0 - z) / kPi;
}

// gamma-factor of the H_j kernel
cdouble h_gamma(int j, cdouble u) {
  if (j == 0) return cgamma(0.5 * u) * cgamma_recip(0.5 * (1.0 - u));
  return cgamma(0.5 * (1.0 + u)) * cgamma_recip(0.5 * (2.0 - u));
}

struct HGrid {
  double sigma, step;
  std::vector<cdouble> w; // sqrt(pi) * gamma-factor * F~ along sigma + i t
};

const HGrid& h_grid(int j, double sigma) {
  static std::mutex mu;
  static std::vector<std::pair<std::pair<int, double>, HGrid>> cache;
  std::lock_guard<std::mutex> lock(mu);
  for (auto& e : cache)
    if (e.first.first == j && e.first.second == sigma) return e.second;
  HGrid g;
  g.sigma = sigma;
  g.step = 0.05;
  const double height = 40.0; // integrand ~ e^{-pi t / 2}: below 1e-26 here
  int n = (int)(height / g.step) + 1;
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    cdouble u(sigma, i * g.step);
    g.w[i] = std::sqrt(kPi) * h_gamma(j, u) * big_f_mellin(u);
  }
  cache.push_back({{j, sigma}, std::move(g)});
  return cache.back().second;
}

} // namespace

double h_func(int j, double y, double sigma) {
  if (j != 0 && j != 1) throw std::invalid_argument("h_func: j in {0,1}");
  if (y <= 0) throw std::domain_error("h_func: y > 0 required");
  if (sigma <= 0) throw std::invalid_argument("h_func: contour must have sigma > 0");
  const HGrid& g = h_grid(j, sigma);
  // (1/2 pi i) int du = (1/2 pi) int dt; fold t < 0 by conjugate symmetry
  double L = std::log(kPi * y);
  KahanSum acc;
  acc.add(0.5 * g.w[0].real());
  for (size_t i = 1; i < g.w.size(); ++i) {
    double t = (double)i * g.step;
    acc.add((g.w[i] * std::polar(1.0, -t * L)).real());
  }
  return acc.value() * g.step / kPi * std::pow(kPi * y, -sigma);
}

cdouble h_mellin(int j, cdouble u) {
  if (std::abs(u) == 0.0) throw std::domain_error("h_mellin: pole at 0");
  return std::sqrt(kPi) * h_gamma(j, u) * big_f_mellin(u) * std::pow(kPi, -u);
}

static double bump01(double y) { // supported on (0,1)
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - y) - 1.0 / y);
}

Cutoff::Cutoff() {
  iota_ = 1.0 / gk_adaptive_real(bump01, 0.0, 1.0, 1e-15);
}

double Cutoff::phi0(double x) const {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return iota_ * gk_adaptive_real(bump01, 0.0, 1.0 - x, 1e-13);
}

double Cutoff::phi(double x) const {
  if (x < 0.0) throw std::domain_error("phi: x >= 0 required");
  if (x <= 1.0) return 1.0;
  return phi0(x - 1.0);
}

double Cutoff::phi_kappa(double x, double kappa) const {
  if (kappa <= 0.0) throw std::invalid_argument("phi_kappa: kappa > 0");
  return phi(std::abs(1.0 - std::abs(x)) / kappa);
}

cdouble Cutoff::phi_tilde(cdouble s) const {
  if (std::abs(s) == 0.0) throw std::domain_error("phi_tilde: pole at 0");
  // integrated by parts once: (iota/s) int_1^2 bump(x-1) x^s dx, entire in s
  cdouble v = gk_adaptive([&](double x) { return bump01(x - 1.0) * std::pow(cdouble(x, 0.0), s); },
                          1.0, 2.0, 1e-13).value;
  return iota_ * v / s;
}

const Cutoff& default_cutoff() {
  static const Cutoff c;
  return c;
}

MellinFunction mf_big_f() {
  return {[](double y) { return big_f(y); },
          [](cdouble u) { return big_f_mellin(u); },
          1, 1.0};
}

namespace {
// Contour height: sigma = 1 resolves the y -> 0 blow-up; larger sigma buys
// (pi y)^{-sigma} decay on the tail, needed when H_j feeds an absolute-
// tolerance quadrature.
double h_auto(int j, double y) {
  double sigma = y <= 2.0 ? 1.0 : (y <= 12.0 ? 4.0 : 8.0);
  return h_func(j, y, sigma);
}
} // namespace

MellinFunction mf_h(int j) {
  if (j == 0)
    return {[](double y) { return h_auto(0, y); },
            [](cdouble u) { return h_mellin(0, u); },
            2, 0.0}; // residue unused for double poles
  return {[](double y) { return h_auto(1, y); },
          [](cdouble u) { return h_mellin(1, u); },
          1, kPi};
}

MellinFunction mf_phi() {
  return {[](double y) { return default_cutoff().phi(y); },
          [](cdouble s) { return default_cutoff().phi_tilde(s); },
          1, 1.0};
}

} // namespace elliptika
