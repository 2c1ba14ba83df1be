#pragma once
// Adaptive Gauss-Kronrod (G7,K15) quadrature for real- and complex-valued
// integrands, plus compensated summation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace elliptika {

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

struct QuadResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  long evals = 0;
};

namespace detail {
// K15 nodes on [0,1] of |x|; even indices are Kronrod-only points
inline constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
void gk15(F&& f, double a, double b, std::complex<double>& k15, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::complex<double> resg = 0.0, resk = 0.0;
  for (int i = 0; i < 8; ++i) {
    std::complex<double> fv = (i == 7)
        ? f(c)
        : std::complex<double>(f(c - h * xgk[i])) + std::complex<double>(f(c + h * xgk[i]));
    resk += wgk[i] * fv;
    if (i % 2 == 1) resg += wg[i / 2] * fv;
  }
  k15 = resk * h;
  // plain |K15 - G7|: conservative compared to the quadpack sharpening,
  // costs a few extra bisections but never under-reports
  err = std::abs(h) * std::abs(resk - resg);
}

struct Seg {
  double err;
  double a, b;
  std::complex<double> val;
  bool operator<(const Seg& o) const {
    if (err != o.err) return err < o.err;
    return a > o.a; // deterministic tie-break
  }
};
} // namespace detail

// Integrates f over [a,b] to absolute tolerance abs_tol using globally
// adaptive bisection (worst segment first). f may return double or
// std::complex<double>. Deterministic for fixed inputs.
template <class F>
QuadResult gk_adaptive(F&& f, double a, double b, double abs_tol, long max_evals = 500000) {
  QuadResult out;
  if (a == b) return out;
  std::vector<detail::Seg> heap;
  auto push = [&](double lo, double hi) {
    detail::Seg s{0.0, lo, hi, {}};
    detail::gk15(f, lo, hi, s.val, s.err);
    out.evals += 15;
    // segments at rounding width can't be refined further
    if (hi - lo < 1e-14 * (1.0 + std::abs(lo) + std::abs(hi))) s.err = 0.0;
    heap.push_back(s);
    std::push_heap(heap.begin(), heap.end());
    return s.err;
  };
  double total_err = push(a, b);
  while (total_err > abs_tol && out.evals < max_evals && heap[0].err > 0.0) {
    std::pop_heap(heap.begin(), heap.end());
    detail::Seg s = heap.back();
    heap.pop_back();
    total_err -= s.err;
    double m = 0.5 * (s.a + s.b);
    total_err += push(s.a, m);
    total_err += push(m, s.b);
    // rebuild drift-free total occasionally
    if ((heap.size() & 1023) == 0) {
      total_err = 0.0;
      for (auto& t : heap) total_err += t.err;
    }
  }
  KahanSum re, im, er;
  std::sort(heap.begin(), heap.end(),
            [](const detail::Seg& x, const detail::Seg& y) { return x.a < y.a; });
  for (auto& s : heap) {
    re.add(s.val.real());
    im.add(s.val.imag());
    er.add(s.err);
  }
  out.value = {re.value(), im.value()};
  out.error = er.value();
  return out;
}

template <class F>
double gk_adaptive_real(F&& f, double a, double b, double abs_tol, long max_evals = 500000) {
  return gk_adaptive([&](double x) { return std::complex<double>(f(x), 0.0); },
                     a, b, abs_tol, max_evals).value.real();
}

} // namespace elliptika
