#pragma once
// Asymptotic-expansion machinery for the singular Fourier integrals: the
// endpoint-series algebra, the contour transform
//   A_m^{+-}(Phi)(x) = (1/2 pi i) int_(tau) Phi~(u) c_m(u/2)
//                        Gamma(m+1+(a+u)/2) x^{-u/2} du,
// and evaluators for the M-term expansions of the inside / outside integrals
// that oscint computes by quadrature.
//
// The contour quadrature assumes Phi~(tau+it) decays at least like
// e^{-pi|t|/2} (true for the smoothing kernels in specfun); that decay is
// what pays for the e^{+pi t/2} growth of x^{-u/2} at negative x.

#include "elliptika/specfun.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace elliptika {

// Endpoint behavior of a profile h: h(+-(1-x)) ~ |x|^{a/2} sum c_m^{+-} x^m,
// valid for |x| < kappa with a tail bounded by remainder_bound * x^{a/2+M+1}.
struct AsymptoticExpansion {
  double a = 0.0;
  std::vector<double> coeffs_plus;  // c_m^+ (endpoint x = +1)
  std::vector<double> coeffs_minus; // c_m^- (endpoint x = -1)
  double kappa = 0.25;
  double remainder_bound = 0.0;
};

struct ExpansionRequest {
  int M = 0;         // truncation order (needs M < coefficient count)
  double tau = 1.0;  // main contour abscissa, > 0
  double tau1 = 0.0; // error-contour abscissa; 0 needs an at most simple pole
  int sign = +1;     // which endpoint a single-sided query refers to
};

// Multiplies the profile by |2x - x^2|^delta: exponent a + 2*delta,
// d_m = 2^delta sum_{j+k=m} c_k (-2)^{-j} binom(delta, j).
AsymptoticExpansion expansion_shift(const AsymptoticExpansion& e, double delta);

// Generalized binomial coefficient binom(z, j) as a falling-factorial product.
cdouble binom_gen(cdouble z, int j);

// c_m^{+-}(u/2) = (i/2pi)^{1+m+(u+a)/2} 2^{u/2} sum_{j+k=m} c_k (-2)^{-j}
//                 binom(u/2, j); entire in u.
cdouble c_coeff(const AsymptoticExpansion& e, int m, cdouble u, int sign);

// Precomputed samples of Phi~ on the vertical line Re u = tau; lets callers
// amortize expensive transforms (e.g. Bessel-backed ones) over many
// evaluations at the same abscissa.
struct MellinContour {
  double tau = 0.0;
  double step = 0.0;
  int n = 0; // samples at t = (k - n) step, k = 0..2n
  std::vector<cdouble> phi_vals;
  std::uint64_t id = 0; // distinguishes contour instances in caches
};

MellinContour make_mellin_contour(const MellinFunction& phi, double tau);

// The contour transform at argument x (negative real x uses the principal
// branch, log(-|x|) = log|x| + i pi). tau must be positive.
cdouble a_transform(const AsymptoticExpansion& e, int m, double tau,
                    const MellinFunction& phi, cdouble x, int sign);

// M-term expansion of int_{-1}^{1} h(x) Phi(C/sqrt(1-x^2)) e(xD) dx:
//   sum_{m<=M,+-} e(+-D) A_m^{+-}(-+ C^2 D) / (-+ D)^{m+1+a/2}
// A non-null `pre` must come from make_mellin_contour(phi, req.tau).
cdouble expansion_inside(const AsymptoticExpansion& e, const ExpansionRequest& req,
                         const MellinFunction& phi, double C, double D,
                         const MellinContour* pre = nullptr);

// M-term expansion of int_{|x|>1} h(x) Phi(C/sqrt(x^2-1)) e(xD) dx:
//   sum_{m<=M,+-} e(+-D) (-1)^m A_m^{+-}(+- C^2 D) / (+- D)^{m+1+a/2}
cdouble expansion_outside(const AsymptoticExpansion& e, const ExpansionRequest& req,
                          const MellinFunction& phi, double C, double D,
                          const MellinContour* pre = nullptr);

// Closed leading term of the full-line integral when Phi~ has at most a
// simple pole at 0:  sum_{+-} e(+-D) c_0^{+-,a} (1 + (-1)^{1-a/2})
// / (+-D)^{1+a/2} with c_0^{+-,a} = c_0(i/2pi)^{1+a/2} Gamma(1+a/2) Res Phi~.
// Exactly zero when a = 0 (mod 4). Requires integer a >= -2.
cdouble leading_term(const AsymptoticExpansion& e, const MellinFunction& phi,
                     double C, double D);

// Fits the tail constant by dense sampling of h against the truncated series
// on (0, kappa) at both endpoints; returns max |tail| / x^{a/2+M+1}.
double remainder_fit(const std::function<double(double)>& h,
                     const AsymptoticExpansion& e, int samples = 1000);

} // namespace elliptika
