#include "elliptika/oscint.hpp"

#include "elliptika/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace elliptika {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// One mapped piece of the integral: a smooth complex integrand on [lo, hi].
struct Piece {
  double lo, hi;
  std::function<cdouble(double)> f;
};

// Splits [lo, hi] (in the x variable, monotone image of the map) so each
// sub-piece spans at most a quarter period of e(xD); pushes mapped t-limits.
// to_t maps an x offset in [lo,hi] to the integration variable.
template <class Map>
void push_periods(std::vector<std::pair<double, double>>& out, double lo,
                  double hi, double absD, Map&& to_t) {
  double width = hi - lo;
  int n = std::max(1, (int)std::ceil(4.0 * absD * width));
  n = std::min(n, 200000);
  double prev = to_t(lo);
  for (int k = 1; k <= n; ++k) {
    double x = k == n ? hi : lo + width * k / n;
    double t = to_t(x);
    out.emplace_back(prev, t);
    prev = t;
  }
}

OscValue run_pieces(const std::vector<Piece>& pieces, double tol) {
  OscValue out;
  if (pieces.empty()) return out;
  double tol_piece = tol / (double)pieces.size();
  KahanSum re, im, err;
  for (const auto& p : pieces) {
    QuadResult r = gk_adaptive(p.f, p.lo, p.hi, tol_piece, 20000);
    re.add(r.value.real());
    im.add(r.value.imag());
    err.add(r.error);
    out.evals += r.evals;
  }
  out.value = {re.value(), im.value()};
  out.err = err.value();
  if (!(out.err <= tol)) throw OscToleranceError(out.value, out.err);
  return out;
}

cdouble unit_exp(double phase) { // e(phase) = exp(2 pi i phase)
  double p = phase - std::floor(phase);
  return {std::cos(kTwoPi * p), std::sin(kTwoPi * p)};
}

void check_job(const FourierJob& job) {
  if (!(job.C > 0.0)) throw std::invalid_argument("fourier: C must be > 0");
  if (job.D == 0.0) throw std::invalid_argument("fourier: D must be nonzero");
  if (!(job.a > -2.0)) throw std::invalid_argument("fourier: need a > -2");
  if (!(job.tol >= 1e-12 && job.tol <= 1e-3))
    throw std::invalid_argument("fourier: tol out of range");
  if (!job.h || !job.phi.value) throw std::invalid_argument("fourier: missing h or phi");
}

} // namespace

OscValue fourier_singular(const FourierJob& job) {
  check_job(job);
  double absD = std::abs(job.D);
  std::vector<Piece> pieces;

  if (job.region == Region::inside) {
    // x = side (1 - t^2), t in (0, 1]; sqrt(1 - x^2) = t sqrt(2 - t^2).
    // The h endpoint factor |1 - x^2|^{a/2} ~ t^a keeps the integrand
    // integrable for a > -2; adaptivity absorbs the t -> 0 corner.
    for (int side : {-1, 1}) {
      std::vector<std::pair<double, double>> segs;
      // x-uniform breakpoints, mapped to t = sqrt(1 - |x|)
      push_periods(segs, 0.0, 1.0, absD,
                   [](double ax) { return std::sqrt(1.0 - ax); });
      for (auto [ta, tb] : segs) {
        auto f = [&job, side](double t) -> cdouble {
          double x = side * (1.0 - t * t);
          double s = t * std::sqrt(2.0 - t * t); // = sqrt(1 - x^2)
          double w = job.h(x) * job.phi.value(job.C / s) * 2.0 * t;
          if (w == 0.0) return {0.0, 0.0};
          return w * unit_exp(x * job.D);
        };
        pieces.push_back({std::min(ta, tb), std::max(ta, tb), f});
      }
    }
  } else if (job.region == Region::outside) {
    // x = side (1 + t^2), t in (0, tmax]; sqrt(x^2 - 1) = t sqrt(2 + t^2).
    // h vanishes beyond |x| = support, so truncate there.
    if (job.support <= 1.0) return {};
    for (int side : {-1, 1}) {
      std::vector<std::pair<double, double>> segs;
      push_periods(segs, 1.0, job.support, absD,
                   [](double ax) { return std::sqrt(ax - 1.0); });
      for (auto [ta, tb] : segs) {
        auto f = [&job, side](double t) -> cdouble {
          double x = side * (1.0 + t * t);
          double s = t * std::sqrt(2.0 + t * t); // = sqrt(x^2 - 1)
          double w = job.h(x) * job.phi.value(job.C / s) * 2.0 * t;
          if (w == 0.0) return {0.0, 0.0};
          return w * unit_exp(x * job.D);
        };
        pieces.push_back({ta, tb, f});
      }
    }
  } else { // line_smooth: no singular points, integrate x directly
    std::vector<std::pair<double, double>> segs;
    push_periods(segs, -job.support, job.support, absD,
                 [](double x) { return x; });
    for (auto [xa, xb] : segs) {
      auto f = [&job](double x) -> cdouble {
        double s = std::sqrt(x * x + 1.0);
        double w = job.h(x) * job.phi.value(job.C / s);
        if (w == 0.0) return {0.0, 0.0};
        return w * unit_exp(x * job.D);
      };
      pieces.push_back({xa, xb, f});
    }
  }
  return run_pieces(pieces, job.tol);
}

OscValue fourier_smooth(const FourierJob& job) {
  check_job(job);
  double absD = std::abs(job.D);
  std::vector<Piece> pieces;
  std::vector<std::pair<double, double>> segs;
  push_periods(segs, -job.support, job.support, absD,
               [](double x) { return x; });
  for (auto [xa, xb] : segs) {
    auto f = [&job](double x) -> cdouble {
      double s = std::sqrt(x * x + 1.0);
      double w = job.h(x) * std::pow(s, job.a) * job.phi.value(job.C / s);
      if (w == 0.0) return {0.0, 0.0};
      return w * unit_exp(x * job.D);
    };
    pieces.push_back({xa, xb, f});
  }
  return run_pieces(pieces, job.tol);
}

} // namespace elliptika
