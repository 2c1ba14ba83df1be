#pragma once
// Orbital-integral surrogates theta^pos / theta^neg and the assembly of
// the square term Sigma([]) and the Poisson tail Sigma(xi != 0):
//   Sigma(xi!=0) = sum over (l, f, xi) of Kloosterman values times the
//   five Fourier factors at C = lf^2 (4p)^{-1/2}, D = -xi sqrt(p) / 2lf^2,
// with truncation bounds that are validated by doubling audits rather
// than trusted, plus the p^{1/4} scaling scan over many primes.

#include "elliptika/asymp.hpp"
#include "elliptika/ntheory.hpp"
#include "elliptika/oscint.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace elliptika {

// theta^pos(x) = 2 sqrt|x^2-1| g1(x) 1_[-1,1] + g2(x); theta^neg smooth
// and compactly supported. exp1/exp2 are the endpoint series of the two
// pos pieces at x = +-1 (exponents a = 1 and a = 0).
struct ThetaProfile {
  std::function<double(double)> g1;  // smooth up to the boundary of [-1,1]
  std::function<double(double)> g2;  // smooth, supported in |x| <= g2_radius
  std::function<double(double)> neg; // theta^neg, supported in |x| <= neg_radius
  double g2_radius = 2.0;
  double neg_radius = 2.0;
  AsymptoticExpansion exp1; // 2 sqrt|x^2-1| g1 at x = +-1, a = 1
  AsymptoticExpansion exp2; // g2 at x = +-1, a = 0

  double pos1(double x) const;              // singular piece
  double pos2(double x) const;              // smooth piece (= g2)
  double pos(double x) const;               // theta^pos
};

// Default profile: g1 = 1, g2 = neg = exp(-1/(1-(x/2)^2)) on |x| < 2.
// Its endpoint series are exact: 2 sqrt(x(2-x)) = 2 sqrt2 sqrt(x) (1-x/2)^{1/2}.
ThetaProfile make_theta();

// Custom profile; endpoint series by central finite differences.
// Throws std::invalid_argument if g2 or neg fails to vanish at and
// beyond its stated radius.
ThetaProfile make_theta(std::function<double(double)> g1,
                        std::function<double(double)> g2,
                        std::function<double(double)> neg,
                        double g2_radius = 2.0, double neg_radius = 2.0);

// Pointwise multiple c * theta, with the endpoint series scaled exactly.
ThetaProfile scale_theta(const ThetaProfile& th, double c);

// Summation bounds. Zero fields are p-dependent defaults: the (l, f)
// lattice is lf^2 <= 24 sqrt(p) and the xi cap is max(16, 200 sqrt(p)/lf^2)
// -- the Kloosterman factor has nonzero mean in xi, so the xi sum converges
// absolutely and must run past the decay crossover at lf^2 xi / 8 sqrt(p)
// ~ 25. The constants are sized so the doubling audits clear a 1% budget
// relative to the assembly scale (8 sqrt(p) / 8 sqrt(p)/lf^2 measurably
// do not).
// Explicit positive fields select the rectangle l <= l_max, f <= f_max,
// |xi| <= xi_max instead. Either way each bound is doubled in turn and
// the observed deltas are reported, not assumed small.
struct TruncationPolicy {
  i64 l_max = 0;
  i64 f_max = 0;
  i64 xi_max = 0;
  double region_split = 1.0;  // threshold T for lf^2 xi / sqrt(p) vs T
  double tail_tol = 0.01;     // relative budget for each doubling delta
  double osc_tol = 1e-8;      // absolute tolerance per Fourier factor
  bool fifth_sum_negative_n = false; // n = -p instead of the literal +p
  int threads = 1;
};

enum class SigmaMethod { oracle, expansion };

struct EllipticReport {
  i64 p = 0;
  double sigma_square = 0.0;
  double sigma_xi = 0.0;
  std::array<double, 5> terms{}; // the five sums; their total is sigma_xi
  double term5_alt = 0.0;        // fifth sum under the opposite n-sign reading
  double audit_delta_l = 0.0;    // |Sigma' - Sigma| when doubling each bound
  double audit_delta_f = 0.0;
  double audit_delta_xi = 0.0;
  bool audit_ok = true;
  long osc_failures = 0;         // Fourier factors that kept their best estimate
  std::size_t tasks_small = 0;   // lattice points with lf^2 xi / sqrt(p) < T
  std::size_t tasks_large = 0;
  double seconds = 0.0;
  std::string sigma0_note = "Sigma(0) not evaluated; bounded O(1) in the profile";
};

// Square term: boundary values of theta times the divisor-gated l-sums
// weighted by F(lf^2/(p-+1)) + (lf^2/(p-+1)) H0(...). The l-sum is cut
// where |F| + x|H0| < tol. Identically 0 once (p-1)/2sqrt(p) clears the
// profile support (p >= 19 for the default radius 2).
double sigma_square(i64 p, const ThetaProfile& th, double tol = 1e-12);

// L(u, m^2) = zeta(u) sum_{f|m} f^{1-2u} prod_{q | m/f} (1 - q^{-u});
// closed form of sum_{f|m} f^{1-2u} sum_{gcd(l, m/f)=1} l^{-u}. u > 1.
double l_series(double u, i64 m);

// Full Sigma(xi != 0) assembly. method = expansion swaps the quadrature
// oracle for the endpoint expansions on the three singular integrals
// where |D| is large enough for the error law to bite.
EllipticReport sigma_xi(i64 p, const ThetaProfile& th,
                        const TruncationPolicy& policy = {},
                        SigmaMethod method = SigmaMethod::oracle);

// One (l, f, xi) cell of the assembly: the five Fourier factors at
// C = lf^2 / 2 sqrt(p), D = -xi sqrt(p) / 2 lf^2 (quadrature oracle).
std::array<cdouble, 5> fourier_factors(i64 p, const ThetaProfile& th,
                                       i64 l, i64 f, i64 xi,
                                       double tol = 1e-10);

struct EnvelopeRow {
  i64 l = 0, f = 0, xi = 0;
  double q = 0.0;                  // lf^2 xi / sqrt(p)
  std::array<double, 3> value{};   // |I1|, (lf^2/sqrt p)|I2|, (lf^2/sqrt p)|I3|
  std::array<double, 3> bound{};   // envelope evaluated at the row
};

struct EnvelopeReport {
  std::vector<EnvelopeRow> small_rows; // lf^2 xi / sqrt(p) small:
                                       //   (lf^2/sqrt p)^{3/2} / sqrt(xi), log factor on I3
  std::vector<EnvelopeRow> large_rows; // large: (sqrt p / lf^2 xi)^N / xi^2
  std::array<double, 3> small_ratio{}; // max value/bound per row type
  std::array<double, 3> large_ratio{};
};

EnvelopeReport envelope_check(i64 p, const ThetaProfile& th,
                              const std::vector<std::array<i64, 3>>& small_grid,
                              const std::vector<std::array<i64, 3>>& large_grid,
                              int N = 2, double tol = 1e-10);

struct ScanReport {
  std::vector<EllipticReport> reports;
  double slope_xi = 0.0;     // least-squares slope of log|sigma_xi| vs log p
  double slope_square = 0.0; // same over the nonzero sigma_square entries
  bool audits_ok = true;
};

ScanReport scan(const std::vector<i64>& primes, const ThetaProfile& th,
                const TruncationPolicy& policy = {},
                SigmaMethod method = SigmaMethod::oracle);

// Table-backed kernels: same Mellin data as mf_big_f / mf_h, with the
// pointwise values served from a precomputed spline (abs error < 1e-8).
// F: Hermite on [0, 48] with exact derivative; H_j: Catmull-Rom in ln y
// on [1e-6, 64], linear-in-ln-y continuation below, 0 above.
MellinFunction mf_big_f_fast();
MellinFunction mf_h_fast(int j);

// CSV / JSON emission. Numeric fields use %.17g, so identical reports
// serialize identically regardless of thread count.
std::string report_csv_header();
std::string report_csv_row(const EllipticReport& r);
std::string report_json(const EllipticReport& r);
std::string scan_csv(const ScanReport& r);
std::string scan_json(const ScanReport& r);

} // namespace elliptika
