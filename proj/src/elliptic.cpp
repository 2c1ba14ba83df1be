#include "elliptika/elliptic.hpp"

#include "elliptika/charsum.hpp"
#include "elliptika/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace elliptika {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- profiles

double bump2(double x) {
  double w = 1.0 - 0.25 * x * x;
  return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
}

// d/dx exp(-1/(1-(x/2)^2)) = bump2(x) * (-x/2) / (1-(x/2)^2)^2
double bump2_deriv(double x) {
  double w = 1.0 - 0.25 * x * x;
  return w > 0.0 ? bump2(x) * (-0.5 * x) / (w * w) : 0.0;
}

// Richardson central difference, step halving until stable.
double fd_deriv(const std::function<double(double)>& f, double x) {
  double h = 1e-3;
  double prev = (f(x + h) - f(x - h)) / (2.0 * h);
  for (int k = 0; k < 6; ++k) {
    h *= 0.5;
    double d = (f(x + h) - f(x - h)) / (2.0 * h);
    double rich = (4.0 * d - prev) / 3.0;
    if (std::abs(rich - prev) < 1e-10 * (1.0 + std::abs(rich))) return rich;
    prev = rich;
  }
  return prev;
}

void require_compact(const std::function<double(double)>& g, double radius,
                     const char* name) {
  for (double x : {radius, 1.25 * radius, 1.5 * radius, 2.0 * radius}) {
    if (std::abs(g(x)) > 1e-12 || std::abs(g(-x)) > 1e-12)
      throw std::invalid_argument(std::string(name) +
                                  ": support exceeds the stated radius");
  }
}

// --------------------------------------------------------------- F table

// F on [0, 48], step 1/1024; cumulative Simpson of the exact derivative
// F'(x) = -exp(-x - 1/x) / (2 K_0(2) x), then cubic Hermite between knots.
struct FTable {
  static constexpr double kStep = 1.0 / 1024.0;
  static constexpr int kCount = 48 * 1024 + 1;
  std::vector<double> val, der;

  FTable() : val(kCount), der(kCount) {
    double inv2k0 = 1.0 / (2.0 * bessel_k(0.0, 2.0).real());
    auto f = [&](double y) {
      return y > 0.0 ? std::exp(-y - 1.0 / y) * inv2k0 / y : 0.0;
    };
    val[0] = 1.0;
    der[0] = 0.0;
    for (int i = 1; i < kCount; ++i) {
      double a = (i - 1) * kStep, b = i * kStep;
      double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
      val[i] = val[i - 1] - (kStep / 6.0) * (fa + 4.0 * fm + fb);
      der[i] = -fb;
    }
  }

  double operator()(double x) const {
    if (x <= 0.0) return 1.0;
    if (x >= 48.0) return 0.0;
    double s = x / kStep;
    int i = std::min((int)s, kCount - 2);
    double t = s - i;
    double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    double h10 = t * (1.0 - t) * (1.0 - t);
    double h01 = t * t * (3.0 - 2.0 * t);
    double h11 = t * t * (t - 1.0);
    return h00 * val[i] + h01 * val[i + 1] +
           kStep * (h10 * der[i] + h11 * der[i + 1]);
  }
};

const FTable& f_table() {
  static const FTable t;
  return t;
}

// --------------------------------------------------------------- H tables

// H_j sampled on a log grid in y; the contour (abscissa chosen by the
// same y-ranges the exact evaluator uses) is sampled once per abscissa
// and reused across grid points. Catmull-Rom in s = ln y between knots,
// linear-in-ln-y continuation below the grid (H0 grows like log(1/y),
// H1 tends to a constant), 0 above y = 64.
struct HTable {
  static constexpr double kS0 = -13.815510557964274; // ln 1e-6
  static constexpr double kS1 = 4.1588830833596715;  // ln 64
  static constexpr int kCount = 4500;
  double step;
  std::vector<double> val;

  explicit HTable(int j) : step((kS1 - kS0) / (kCount - 1)), val(kCount) {
    constexpr double ct_step = 0.05;
    constexpr int ct_n = 800; // t = (k - n) * step, |t| <= 40
    auto hgamma = [&](cdouble u) -> cdouble {
      cdouble num = j == 0 ? 0.5 * u : 0.5 * (1.0 + u);
      cdouble den = j == 0 ? 0.5 * (1.0 - u) : 0.5 * (2.0 - u);
      try {
        return cgamma(num) / cgamma(den);
      } catch (const std::domain_error&) {
        return 0.0; // 1/Gamma vanishes at the denominator poles
      }
    };
    // sigma = 4 keeps the contour cheap (Bessel cost explodes with Re u)
    // and its quadrature noise (~1e-12) sits far below the table target.
    for (double sigma : {1.0, 4.0}) {
      std::vector<cdouble> g(2 * ct_n + 1);
      for (int k = 0; k <= 2 * ct_n; ++k) {
        cdouble u(sigma, (k - ct_n) * ct_step);
        g[k] = hgamma(u) * big_f_mellin(u);
      }
      for (int i = 0; i < kCount; ++i) {
        double y = std::exp(kS0 + i * step);
        bool mine = sigma == (y <= 2.0 ? 1.0 : 4.0);
        if (!mine) continue;
        double lpy = std::log(kPi * y);
        KahanSum re;
        for (int k = 0; k <= 2 * ct_n; ++k) {
          cdouble u(sigma, (k - ct_n) * ct_step);
          double w = (k == 0 || k == 2 * ct_n) ? 0.5 : 1.0;
          re.add(w * (g[k] * std::exp(-u * lpy)).real());
        }
        val[i] = std::sqrt(kPi) * re.value() * ct_step / (2.0 * kPi);
      }
    }
  }

  double operator()(double y) const {
    if (y >= 64.0) return 0.0;
    double s = std::log(std::max(y, 1e-300));
    double u = (s - kS0) / step;
    if (u <= 1.0) { // continue the lowest segment linearly in ln y
      return val[0] + (u - 0.0) * (val[1] - val[0]);
    }
    int i = std::min((int)u, kCount - 3);
    i = std::max(i, 1);
    double t = u - i;
    double m0 = 0.5 * (val[i + 1] - val[i - 1]);
    double m1 = 0.5 * (val[i + 2] - val[i]);
    double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * val[i] + (t3 - 2.0 * t2 + t) * m0 +
           (-2.0 * t3 + 3.0 * t2) * val[i + 1] + (t3 - t2) * m1;
  }
};

const HTable& h_table(int j) {
  static const HTable t0(0);
  static const HTable t1(1);
  return j == 0 ? t0 : t1;
}

// ------------------------------------------------------------ euler zeta

double zeta_real(double u) {
  if (!(u > 1.0)) throw std::invalid_argument("l_series: needs u > 1");
  return std::riemann_zeta(u);
}

std::vector<i64> divisors(i64 m) {
  std::vector<i64> d;
  for (i64 f = 1; f * f <= m; ++f)
    if (m % f == 0) {
      d.push_back(f);
      if (f != m / f) d.push_back(m / f);
    }
  std::sort(d.begin(), d.end());
  return d;
}

// ------------------------------------------------------------- assembly

struct PairCell {
  i64 l = 0, f = 0;
};

struct PairOut {
  std::array<double, 5> term{};
  double term5_alt = 0.0;
  long failures = 0;
  std::size_t small_cnt = 0, large_cnt = 0;
};

struct Lattice {
  std::vector<PairCell> pairs;
  double xi_scale = 1.0; // multiplies the per-pair xi cap
};

struct AssemblyCtx {
  i64 p = 0;
  double sqp = 0.0;
  const ThetaProfile* th = nullptr;
  TruncationPolicy pol;
  SigmaMethod method = SigmaMethod::oracle;
  MellinFunction F, H0, H1; // table-backed values, exact transforms
  MellinContour ctF, ctH0, ctH1;
  AsymptoticExpansion e1, e2, e1s, e2s; // exp1/exp2 and their -1/2 shifts

  std::unordered_map<std::uint64_t, std::array<cdouble, 5>> icache;
  std::mutex imu;
  std::unordered_map<std::uint64_t, std::pair<double, double>> klcache;
  std::mutex kmu;
};

// The expansion error law needs |D| in the asymptotic regime; below this
// the oracle is used even under method = expansion.
constexpr double kExpansionMinD = 6.0;

// lf^2 <= kLatticeB sqrt(p). The F weight at the cap is F(C) with
// C = kLatticeB / 2, and the doubling deltas track e^{-C}; 24 puts them
// comfortably under a 1% budget where 8 leaves ~e^{-4} of the mass out.
constexpr double kLatticeB = 24.0;

// theta^neg is smooth, so the two line factors decay superpolynomially
// in D; past |D| = 24 they measure below 5e-9 across the C range and the
// assembly treats them as 0 (the bound is pinned by a test).
constexpr double kSmoothCutD = 24.0;

// Past this |D| the direct quadrature is priced out (its cost grows
// linearly in |D|) and the expansion takes over under either method; at
// |D| = 64 the expansion's next omitted term is already negligible.
constexpr double kOracleSwitchD = 64.0;

// Auto xi cap. The Kloosterman factor has a nonzero mean in xi, so the
// xi sum converges absolutely rather than by cancellation, and the
// integrals only decay superpolynomially once C^2 D = m xi / 8 sqrt(p)
// is of order 25. kXiTail = 200 puts the cap past that crossover; the
// measured octave deltas beyond it fall below 1e-5. For m > 12.5 sqrt(p)
// the crossover sits below the floor of 16, so no large-m term is needed.
constexpr double kXiTail = 200.0;

i64 xi_cap(const AssemblyCtx& c, i64 m, double scale) {
  if (c.pol.xi_max > 0) return (i64)std::llround(c.pol.xi_max * scale);
  double cap = std::max(48.0, kXiTail * c.sqp / (double)m);
  return (i64)std::llround(cap * scale);
}

std::array<cdouble, 5> fourier_block(const AssemblyCtx& c, double C, double D,
                                     long* failures) {
  const ThetaProfile& th = *c.th;
  auto run = [&](FourierJob& job) -> cdouble {
    job.C = C;
    job.D = D;
    job.tol = c.pol.osc_tol;
    try {
      return fourier_singular(job).value;
    } catch (const OscToleranceError& e) {
      if (failures) ++*failures;
      return e.best_estimate;
    }
  };
  std::array<cdouble, 5> I{};
  bool want_exp = (c.method == SigmaMethod::expansion &&
                   std::abs(D) >= kExpansionMinD) ||
                  std::abs(D) >= kOracleSwitchD;

  if (want_exp) {
    ExpansionRequest rq;
    rq.M = 1;
    rq.tau = 1.0;
    ExpansionRequest rq0 = rq;
    rq0.tau1 = 0.5; // H0 has a double pole; the error contour must move
    I[0] = expansion_inside(c.e1, rq, c.F, C, D, &c.ctF) +
           expansion_inside(c.e2, rq, c.F, C, D, &c.ctF) +
           expansion_outside(c.e2, rq, c.F, C, D, &c.ctF);
    I[1] = expansion_inside(c.e1s, rq, c.H1, C, D, &c.ctH1) +
           expansion_inside(c.e2s, rq, c.H1, C, D, &c.ctH1);
    I[2] = expansion_outside(c.e2s, rq0, c.H0, C, D, &c.ctH0);
  } else {
    FourierJob in;
    in.h = [&th](double x) { return th.pos(x); };
    in.a = 1.0;
    in.region = Region::inside;
    in.phi = c.F;
    I[0] = run(in);
    FourierJob out;
    out.h = [&th](double x) { return th.pos(x); };
    out.a = 0.0;
    out.region = Region::outside;
    out.phi = c.F;
    out.support = th.g2_radius;
    I[0] += run(out);

    FourierJob in2;
    in2.h = [&th](double x) { return th.pos(x) / std::sqrt(1.0 - x * x); };
    in2.a = -1.0;
    in2.region = Region::inside;
    in2.phi = c.H1;
    I[1] = run(in2);

    FourierJob out3;
    out3.h = [&th](double x) { return th.pos(x) / std::sqrt(x * x - 1.0); };
    out3.a = -1.0;
    out3.region = Region::outside;
    out3.phi = c.H0;
    out3.support = th.g2_radius;
    I[2] = run(out3);
  }

  if (std::abs(D) >= kSmoothCutD) return I;

  FourierJob l4;
  l4.h = th.neg;
  l4.region = Region::line_smooth;
  l4.phi = c.F;
  l4.support = th.neg_radius;
  I[3] = run(l4);

  FourierJob l5;
  l5.h = [&th](double x) { return th.neg(x) / std::sqrt(x * x + 1.0); };
  l5.region = Region::line_smooth;
  l5.phi = c.H0;
  l5.support = th.neg_radius;
  I[4] = run(l5);
  return I;
}

std::array<cdouble, 5> cell_integrals(AssemblyCtx& c, i64 m, i64 xi,
                                      long* failures) {
  std::uint64_t key = ((std::uint64_t)m << 32) | (std::uint64_t)xi;
  {
    std::lock_guard<std::mutex> lk(c.imu);
    auto it = c.icache.find(key);
    if (it != c.icache.end()) return it->second;
  }
  double C = (double)m / (2.0 * c.sqp);
  double D = -(double)xi * c.sqp / (2.0 * (double)m);
  std::array<cdouble, 5> I{};
  // Past the kernel tables' reach every smoothing factor is identically 0.
  if (C < 64.0) I = fourier_block(c, C, D, failures);
  std::lock_guard<std::mutex> lk(c.imu);
  c.icache.emplace(key, I);
  return I;
}

std::pair<double, double> kl_pair(AssemblyCtx& c, i64 l, i64 f, i64 xi) {
  i64 mod = 4 * l * f * f;
  i64 xr = ((xi % mod) + mod) % mod;
  std::uint64_t key =
      ((std::uint64_t)l << 40) ^ ((std::uint64_t)f << 32) ^ (std::uint64_t)xr;
  {
    std::lock_guard<std::mutex> lk(c.kmu);
    auto it = c.klcache.find(key);
    if (it != c.klcache.end()) return it->second;
  }
  KlParams kp{l, f, xr, c.p};
  KlParams km{l, f, xr, -c.p};
  double vp = kl_bound(kp) == 0.0 ? 0.0 : kl_factor(kp).real();
  double vm = kl_bound(km) == 0.0 ? 0.0 : kl_factor(km).real();
  std::pair<double, double> out{vp, vm};
  std::lock_guard<std::mutex> lk(c.kmu);
  c.klcache.emplace(key, out);
  return out;
}

PairOut run_pair(AssemblyCtx& c, const PairCell& pc, double xi_scale) {
  PairOut out;
  i64 m = pc.l * pc.f * pc.f;
  double w1 = 0.5 * c.sqp * std::pow((double)m, -1.5) / std::sqrt((double)pc.l);
  double w2 = 0.25 / (std::sqrt((double)m) * std::sqrt((double)pc.l));
  std::array<KahanSum, 5> acc{};
  KahanSum alt;
  i64 cap = xi_cap(c, m, xi_scale);
  for (i64 xi = 1; xi <= cap; ++xi) {
    auto [klp, klm] = kl_pair(c, pc.l, pc.f, xi);
    if ((double)m * (double)xi / c.sqp < c.pol.region_split)
      ++out.small_cnt;
    else
      ++out.large_cnt;
    double kl5 = c.pol.fifth_sum_negative_n ? klm : klp;
    double kl5a = c.pol.fifth_sum_negative_n ? klp : klm;
    if (klp == 0.0 && klm == 0.0) continue;
    auto I = cell_integrals(c, m, xi, &out.failures);
    // xi and -xi pair: the factors conjugate, Kl is even in xi.
    acc[0].add(w1 * klp * 2.0 * I[0].real());
    acc[1].add(w2 * klp * 2.0 * I[1].real());
    acc[2].add(w2 * klp * 2.0 * I[2].real());
    acc[3].add(w1 * klm * 2.0 * I[3].real());
    acc[4].add(w2 * kl5 * 2.0 * I[4].real());
    alt.add(w2 * kl5a * 2.0 * I[4].real());
  }
  for (int k = 0; k < 5; ++k) out.term[k] = acc[k].value();
  out.term5_alt = alt.value();
  return out;
}

// Tasks are claimed by atomic index into a fixed list and reduced in list
// order afterwards, so the result is independent of the thread count.
std::vector<PairOut> run_lattice(AssemblyCtx& c, const Lattice& lat) {
  std::vector<PairOut> outs(lat.pairs.size());
  int nthreads = std::max(1, c.pol.threads);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < lat.pairs.size(); ++i)
      outs[i] = run_pair(c, lat.pairs[i], lat.xi_scale);
    return outs;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= lat.pairs.size()) return;
      outs[i] = run_pair(c, lat.pairs[i], lat.xi_scale);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return outs;
}

struct Totals {
  std::array<double, 5> term{};
  double total = 0.0;
  double term5_alt = 0.0;
  long failures = 0;
  std::size_t small_cnt = 0, large_cnt = 0;
};

Totals reduce(const std::vector<PairOut>& outs) {
  Totals t;
  std::array<KahanSum, 5> acc{};
  KahanSum alt;
  for (const auto& o : outs) {
    for (int k = 0; k < 5; ++k) acc[k].add(o.term[k]);
    alt.add(o.term5_alt);
    t.failures += o.failures;
    t.small_cnt += o.small_cnt;
    t.large_cnt += o.large_cnt;
  }
  KahanSum tot;
  for (int k = 0; k < 5; ++k) {
    t.term[k] = acc[k].value();
    tot.add(t.term[k]);
  }
  t.total = tot.value();
  t.term5_alt = alt.value();
  return t;
}

// Base lattice plus the three doubled variants. Auto policy: lf^2 <= B
// with B = 8 sqrt(p); the l-audit doubles every column, the f-audit adds
// columns up to twice the f reach (with at least a few l rows each, since
// the joint cap alone would leave them empty).
Lattice base_lattice(const AssemblyCtx& c) {
  Lattice lat;
  if (c.pol.l_max > 0 && c.pol.f_max > 0) {
    for (i64 f = 1; f <= c.pol.f_max; ++f)
      for (i64 l = 1; l <= c.pol.l_max; ++l) lat.pairs.push_back({l, f});
    return lat;
  }
  double B = kLatticeB * c.sqp;
  for (i64 f = 1; (double)(f * f) <= B; ++f) {
    i64 lmax = (i64)(B / (double)(f * f));
    for (i64 l = 1; l <= lmax; ++l) lat.pairs.push_back({l, f});
  }
  return lat;
}

Lattice audit_lattice_l(const AssemblyCtx& c) {
  Lattice lat;
  if (c.pol.l_max > 0 && c.pol.f_max > 0) {
    for (i64 f = 1; f <= c.pol.f_max; ++f)
      for (i64 l = c.pol.l_max + 1; l <= 2 * c.pol.l_max; ++l)
        lat.pairs.push_back({l, f});
    return lat;
  }
  double B = kLatticeB * c.sqp;
  for (i64 f = 1; (double)(f * f) <= B; ++f) {
    i64 lmax = (i64)(B / (double)(f * f));
    for (i64 l = lmax + 1; l <= 2 * lmax; ++l) lat.pairs.push_back({l, f});
  }
  return lat;
}

Lattice audit_lattice_f(const AssemblyCtx& c) {
  Lattice lat;
  if (c.pol.l_max > 0 && c.pol.f_max > 0) {
    for (i64 f = c.pol.f_max + 1; f <= 2 * c.pol.f_max; ++f)
      for (i64 l = 1; l <= c.pol.l_max; ++l) lat.pairs.push_back({l, f});
    return lat;
  }
  double B = kLatticeB * c.sqp;
  i64 fmax = (i64)std::sqrt(B);
  for (i64 f = fmax + 1; f <= 2 * fmax; ++f) {
    i64 lmax = std::max<i64>(4, (i64)(B / (double)(f * f)));
    for (i64 l = 1; l <= lmax; ++l) lat.pairs.push_back({l, f});
  }
  return lat;
}

void init_ctx(AssemblyCtx& c, i64 p, const ThetaProfile& th,
              const TruncationPolicy& pol, SigmaMethod method) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("sigma_xi: p must be an odd prime");
  if (!(pol.tail_tol > 0.0) || !(pol.region_split > 0.0) ||
      !(pol.osc_tol > 0.0))
    throw std::invalid_argument("sigma_xi: invalid truncation policy");
  if ((pol.l_max > 0) != (pol.f_max > 0))
    throw std::invalid_argument("sigma_xi: set l_max and f_max together");
  c.p = p;
  c.sqp = std::sqrt((double)p);
  c.th = &th;
  c.pol = pol;
  c.method = method;
  c.F = mf_big_f_fast();
  c.H0 = mf_h_fast(0);
  c.H1 = mf_h_fast(1);
  // The expansion machinery also serves the far xi tail under the oracle
  // method, so the contours are always built.
  c.ctF = make_mellin_contour(mf_big_f(), 1.0);
  c.ctH0 = make_mellin_contour(mf_h(0), 1.0);
  c.ctH1 = make_mellin_contour(mf_h(1), 1.0);
  c.e1 = th.exp1;
  c.e2 = th.exp2;
  c.e1s = expansion_shift(th.exp1, -0.5);
  c.e2s = expansion_shift(th.exp2, -0.5);
}

} // namespace

// --------------------------------------------------------------- profiles

double ThetaProfile::pos1(double x) const {
  if (std::abs(x) >= 1.0) return 0.0;
  return 2.0 * std::sqrt(1.0 - x * x) * g1(x);
}

double ThetaProfile::pos2(double x) const { return g2(x); }

double ThetaProfile::pos(double x) const { return pos1(x) + pos2(x); }

ThetaProfile make_theta() {
  ThetaProfile th;
  th.g1 = [](double) { return 1.0; };
  th.g2 = bump2;
  th.neg = bump2;
  // 2 sqrt(x(2-x)) = 2 sqrt2 sqrt(x) sum_m binom(1/2,m) (-x/2)^m
  th.exp1.a = 1.0;
  for (int m = 0; m < 6; ++m) {
    double cm = 2.0 * std::sqrt(2.0) *
                binom_gen(0.5, m).real() * std::pow(-0.5, m);
    th.exp1.coeffs_plus.push_back(cm);
    th.exp1.coeffs_minus.push_back(cm);
  }
  // g2(+-(1-x)) = g2(1) -+ g2'(1) x + ...; the bump is even.
  th.exp2.a = 0.0;
  double b0 = bump2(1.0), b1 = -bump2_deriv(1.0);
  th.exp2.coeffs_plus = {b0, b1};
  th.exp2.coeffs_minus = {b0, b1};
  return th;
}

ThetaProfile make_theta(std::function<double(double)> g1,
                        std::function<double(double)> g2,
                        std::function<double(double)> neg,
                        double g2_radius, double neg_radius) {
  require_compact(g2, g2_radius, "make_theta: g2");
  require_compact(neg, neg_radius, "make_theta: neg");
  ThetaProfile th;
  th.g1 = g1;
  th.g2 = g2;
  th.neg = neg;
  th.g2_radius = g2_radius;
  th.neg_radius = neg_radius;
  // 2 sqrt|x^2-1| g1 at +-(1-x): |x|^{1/2} * 2 sqrt(2-x) g1(+-(1-x))
  th.exp1.a = 1.0;
  double r2 = std::sqrt(2.0);
  for (int s : {+1, -1}) {
    double c0 = 2.0 * r2 * g1((double)s);
    double c1 = -g1((double)s) / r2 - 2.0 * r2 * s * fd_deriv(g1, (double)s);
    auto& cs = s > 0 ? th.exp1.coeffs_plus : th.exp1.coeffs_minus;
    cs = {c0, c1};
  }
  th.exp2.a = 0.0;
  th.exp2.coeffs_plus = {g2(1.0), -fd_deriv(g2, 1.0)};
  th.exp2.coeffs_minus = {g2(-1.0), fd_deriv(g2, -1.0)};
  return th;
}

ThetaProfile scale_theta(const ThetaProfile& th, double c) {
  ThetaProfile out = th;
  auto g1 = th.g1, g2 = th.g2, ng = th.neg;
  out.g1 = [g1, c](double x) { return c * g1(x); };
  out.g2 = [g2, c](double x) { return c * g2(x); };
  out.neg = [ng, c](double x) { return c * ng(x); };
  for (auto e : {&out.exp1, &out.exp2}) {
    for (auto& v : e->coeffs_plus) v *= c;
    for (auto& v : e->coeffs_minus) v *= c;
    e->remainder_bound *= std::abs(c);
  }
  return out;
}

// ------------------------------------------------------------ square term

double sigma_square(i64 p, const ThetaProfile& th, double tol) {
  if (p < 3 || !is_prime(p))
    throw std::invalid_argument("sigma_square: p must be an odd prime");
  const FTable& F = f_table();
  const HTable& H0 = h_table(0);
  auto inner = [&](i64 mm) {
    KahanSum s;
    for (i64 f : divisors(mm)) {
      i64 cof = mm / f;
      for (i64 l = 1;; ++l) {
        double x = (double)(l * f * f) / (double)mm;
        if (x > 64.0) break;
        double w = std::abs(F(x)) + x * std::abs(H0(x));
        if (x > 1.0 && w < tol) break;
        if (std::gcd(l, cof) != 1) continue;
        s.add((F(x) + x * H0(x)) / ((double)f * (double)l));
      }
    }
    return s.value();
  };
  double sq = std::sqrt((double)p);
  double apos = (double)(p + 1) / (2.0 * sq);
  double aneg = (double)(p - 1) / (2.0 * sq);
  double vpos = th.pos(apos) + th.pos(-apos);
  double vneg = th.neg(aneg) + th.neg(-aneg);
  double out = 0.0;
  if (vpos != 0.0) out += vpos * inner(p - 1);
  if (vneg != 0.0) out += vneg * inner(p + 1);
  return out;
}

double l_series(double u, i64 m) {
  if (m <= 0) throw std::invalid_argument("l_series: m must be positive");
  double z = zeta_real(u);
  KahanSum s;
  for (i64 f : divisors(m)) {
    double term = std::pow((double)f, 1.0 - 2.0 * u);
    for (auto& [q, e] : factorize(m / f))
      term *= 1.0 - std::pow((double)q, -u);
    s.add(term);
  }
  return z * s.value();
}

// ---------------------------------------------------------------- sigma_xi

std::array<cdouble, 5> fourier_factors(i64 p, const ThetaProfile& th, i64 l,
                                       i64 f, i64 xi, double tol) {
  AssemblyCtx c;
  TruncationPolicy pol;
  pol.osc_tol = tol;
  init_ctx(c, p, th, pol, SigmaMethod::oracle);
  double m = (double)(l * f * f);
  double C = m / (2.0 * c.sqp);
  double D = -(double)xi * c.sqp / (2.0 * m);
  return fourier_block(c, C, D, nullptr);
}

EllipticReport sigma_xi(i64 p, const ThetaProfile& th,
                        const TruncationPolicy& policy, SigmaMethod method) {
  auto t0 = std::chrono::steady_clock::now();
  AssemblyCtx c;
  init_ctx(c, p, th, policy, method);

  Lattice base = base_lattice(c);
  Totals t = reduce(run_lattice(c, base));

  EllipticReport r;
  r.p = p;
  r.terms = t.term;
  r.sigma_xi = t.total;
  r.term5_alt = t.term5_alt;
  r.osc_failures = t.failures;
  r.tasks_small = t.small_cnt;
  r.tasks_large = t.large_cnt;
  r.sigma_square = sigma_square(p, th);

  // Doubling audits; the caches make the shared cells free.
  Totals tl = reduce(run_lattice(c, audit_lattice_l(c)));
  r.audit_delta_l = std::abs(tl.total);
  Totals tf = reduce(run_lattice(c, audit_lattice_f(c)));
  r.audit_delta_f = std::abs(tf.total);
  Lattice wide = base;
  wide.xi_scale = 2.0;
  Totals tx = reduce(run_lattice(c, wide));
  r.audit_delta_xi = std::abs(tx.total - t.total);
  r.osc_failures += tl.failures + tf.failures + tx.failures;

  // Budget against the assembly scale, not the total: sigma_xi passes
  // through zero along the prime aspect, where a total-relative 1% is
  // vacuous while the five terms stay O(1)-sized.
  double scale = std::abs(r.sigma_xi);
  for (double t : r.terms) scale = std::max(scale, std::abs(t));
  double budget = c.pol.tail_tol * std::max(scale, 1e-9);
  r.audit_ok = r.audit_delta_l < budget && r.audit_delta_f < budget &&
               r.audit_delta_xi < budget;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------- envelopes

EnvelopeReport envelope_check(i64 p, const ThetaProfile& th,
                              const std::vector<std::array<i64, 3>>& small_grid,
                              const std::vector<std::array<i64, 3>>& large_grid,
                              int N, double tol) {
  EnvelopeReport rep;
  double sq = std::sqrt((double)p);
  auto row = [&](const std::array<i64, 3>& g) {
    EnvelopeRow r;
    r.l = g[0];
    r.f = g[1];
    r.xi = g[2];
    double m = (double)(r.l * r.f * r.f);
    r.q = m * (double)r.xi / sq;
    auto I = fourier_factors(p, th, r.l, r.f, r.xi, tol);
    r.value = {std::abs(I[0]), (m / sq) * std::abs(I[1]),
               (m / sq) * std::abs(I[2])};
    return r;
  };
  for (const auto& g : small_grid) {
    EnvelopeRow r = row(g);
    double m = (double)(r.l * r.f * r.f);
    double base = std::pow(m / sq, 1.5) / std::sqrt((double)r.xi);
    r.bound = {base, base, base * std::max(1.0, std::abs(std::log(r.q)))};
    for (int k = 0; k < 3; ++k)
      rep.small_ratio[k] = std::max(rep.small_ratio[k], r.value[k] / r.bound[k]);
    rep.small_rows.push_back(r);
  }
  for (const auto& g : large_grid) {
    EnvelopeRow r = row(g);
    double m = (double)(r.l * r.f * r.f);
    double b = std::pow(sq / (m * (double)r.xi), (double)N) /
               ((double)r.xi * (double)r.xi);
    r.bound = {b, b, b};
    for (int k = 0; k < 3; ++k)
      rep.large_ratio[k] = std::max(rep.large_ratio[k], r.value[k] / r.bound[k]);
    rep.large_rows.push_back(r);
  }
  return rep;
}

// -------------------------------------------------------------------- scan

namespace {
double fit_slope(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 2) return 0.0;
  double n = (double)xy.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
} // namespace

ScanReport scan(const std::vector<i64>& primes, const ThetaProfile& th,
                const TruncationPolicy& policy, SigmaMethod method) {
  if (primes.size() < 2) throw std::invalid_argument("scan: needs >= 2 primes");
  ScanReport rep;
  std::vector<std::pair<double, double>> xi_pts, sq_pts;
  for (i64 p : primes) {
    EllipticReport r = sigma_xi(p, th, policy, method);
    rep.audits_ok = rep.audits_ok && r.audit_ok;
    if (std::abs(r.sigma_xi) > 1e-14)
      xi_pts.push_back({std::log((double)p), std::log(std::abs(r.sigma_xi))});
    if (std::abs(r.sigma_square) > 1e-14)
      sq_pts.push_back({std::log((double)p), std::log(std::abs(r.sigma_square))});
    rep.reports.push_back(std::move(r));
  }
  rep.slope_xi = fit_slope(xi_pts);
  rep.slope_square = fit_slope(sq_pts);
  return rep;
}

// ------------------------------------------------------------ fast kernels

MellinFunction mf_big_f_fast() {
  MellinFunction mf = mf_big_f();
  const FTable& t = f_table();
  mf.value = [&t](double x) { return t(x); };
  return mf;
}

MellinFunction mf_h_fast(int j) {
  if (j != 0 && j != 1) throw std::invalid_argument("mf_h_fast: j must be 0 or 1");
  MellinFunction mf = mf_h(j);
  const HTable& t = h_table(j);
  mf.value = [&t](double y) { return t(y); };
  return mf;
}

// ------------------------------------------------------------------- output

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
} // namespace

std::string report_csv_header() {
  // no timing column: rows are reproducible bit for bit across runs
  return "p,sigma_square,sigma_xi,term1,term2,term3,term4,term5,audit_delta";
}

std::string report_csv_row(const EllipticReport& r) {
  double delta = std::max({r.audit_delta_l, r.audit_delta_f, r.audit_delta_xi});
  std::string s = std::to_string(r.p);
  s += "," + fmt(r.sigma_square) + "," + fmt(r.sigma_xi);
  for (double t : r.terms) s += "," + fmt(t);
  s += "," + fmt(delta);
  return s;
}

std::string report_json(const EllipticReport& r) {
  nlohmann::json j;
  j["p"] = r.p;
  j["sigma_square"] = r.sigma_square;
  j["sigma_xi"] = r.sigma_xi;
  j["terms"] = r.terms;
  j["term5_alt"] = r.term5_alt;
  j["audit"] = {{"delta_l", r.audit_delta_l},
                {"delta_f", r.audit_delta_f},
                {"delta_xi", r.audit_delta_xi},
                {"ok", r.audit_ok}};
  j["osc_failures"] = r.osc_failures;
  j["tasks_small"] = r.tasks_small;
  j["tasks_large"] = r.tasks_large;
  j["seconds"] = r.seconds;
  j["sigma0_note"] = r.sigma0_note;
  return j.dump();
}

std::string scan_csv(const ScanReport& r) {
  std::string s = report_csv_header();
  for (const auto& rep : r.reports) s += "\n" + report_csv_row(rep);
  return s;
}

std::string scan_json(const ScanReport& r) {
  nlohmann::json j;
  j["slope_xi"] = r.slope_xi;
  j["slope_square"] = r.slope_square;
  j["audits_ok"] = r.audits_ok;
  j["reports"] = nlohmann::json::array();
  for (const auto& rep : r.reports)
    j["reports"].push_back(nlohmann::json::parse(report_json(rep)));
  return j.dump();
}

} // namespace elliptika
