#pragma once
// Smoothing kernels of the spectral side: the exponential cutoff F, the
// contour kernels H0/H1, the compact bump family phi, and their Mellin
// transforms. Underlying pieces: complex gamma and K-Bessel of complex
// order.

#include <complex>
#include <functional>
#include <stdexcept>

namespace elliptika {

using cdouble = std::complex<double>;

cdouble cgamma(cdouble z); // Lanczos; poles at 0, -1, -2, ... throw

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, x > 0
cdouble bessel_k(cdouble nu, double x, double abs_tol = 1e-13);

// F(x) = (1 / 2 K_0(2)) int_x^inf exp(-y - 1/y) dy / y;  F(0) = 1
double big_f(double x);

// Mellin transform F~(u) = K_u(2) / (u K_0(2)); simple pole at u = 0
cdouble big_f_mellin(cdouble u);

// H_j(y), j in {0,1}: contour integrals against F~ with gamma-factor
//   j=0: (sqrt(pi)/2 pi i) int_(s) Gamma(u/2) F~(u) / Gamma((1-u)/2) (pi y)^{-u} du
//   j=1: same with Gamma((1+u)/2) / Gamma((2-u)/2)
double h_func(int j, double y, double sigma = 1.0);

// Closed Mellin transforms of H_j (pole at 0: order 2 for j=0, simple for j=1)
cdouble h_mellin(int j, cdouble u);

class Cutoff {
 public:
  Cutoff();
  double phi0(double x) const;   // 1 at x <= 0, 0 at x >= 1, smooth bridge
  double phi(double x) const;    // 1 on [0,1], phi0(x-1) on [1,2], 0 past 2
  double phi_kappa(double x, double kappa) const; // phi(|1 - |x|| / kappa)
  cdouble phi_tilde(cdouble s) const; // Mellin transform; pole at s = 0
  double iota() const { return iota_; }

 private:
  double iota_; // normalization making phi0(0) = 1
};

const Cutoff& default_cutoff();

// A smoothing function bundled with its Mellin transform, as consumed by
// the oscillatory-integral and expansion machinery.
struct MellinFunction {
  std::function<double(double)> value;
  std::function<cdouble(cdouble)> mellin;
  int pole_order = 0;   // order of the pole of the transform at 0
  cdouble residue = 0.0; // coefficient of 1/u there
};

MellinFunction mf_big_f();
MellinFunction mf_h(int j);
MellinFunction mf_phi();

} // namespace elliptika
