#pragma once
// Quadrature oracle for the singular oscillatory Fourier integrals
//   inside:      int_{-1}^{1}  h(x) Phi(C/sqrt(1-x^2)) e(xD) dx
//   outside:     int_{1<|x|<R} h(x) Phi(C/sqrt(x^2-1)) e(xD) dx
//   line_smooth: int_{|x|<R}   h(x) Phi(C/sqrt(x^2+1)) e(xD) dx
// Endpoint singularities |1 -+ x|^{a/2} are flattened by x = +-(1 -+ t^2);
// oscillation is handled by splitting at most a quarter period per segment.

#include "elliptika/specfun.hpp"

#include <complex>
#include <functional>
#include <stdexcept>

namespace elliptika {

enum class Region { inside, outside, line_smooth };

struct FourierJob {
  std::function<double(double)> h; // real profile factor
  double a = 0.0;                  // endpoint exponent of h at the singular points
  Region region = Region::inside;
  MellinFunction phi;              // smoothing function Phi
  double C = 1.0;                  // scale inside Phi
  double D = 1.0;                  // e(xD) frequency
  double support = 2.0;            // radius of supp h (outside / line regions)
  double tol = 1e-10;              // absolute tolerance on the value
};

struct OscValue {
  cdouble value{0.0, 0.0};
  double err = 0.0;
  long evals = 0;
};

// Thrown when the segment budget cannot reach job.tol; carries the best
// estimate so callers can still inspect it.
class OscToleranceError : public std::runtime_error {
 public:
  OscToleranceError(cdouble best, double err)
      : std::runtime_error("oscillatory quadrature: tolerance not reached"),
        best_estimate(best), err_estimate(err) {}
  cdouble best_estimate;
  double err_estimate;
};

OscValue fourier_singular(const FourierJob& job);

// Smooth decay probe: int h(x) (x^2+1)^{a/2} Phi(C/sqrt(x^2+1)) e(xD) dx
OscValue fourier_smooth(const FourierJob& job);

} // namespace elliptika
