// Command-line front end: single-shot evaluations, grid sweeps, and the
// prime scan. Every artifact echoes its fully resolved config; JSON
// artifacts can be re-run byte-identically with --replay.

#include "elliptika/asymp.hpp"
#include "elliptika/charsum.hpp"
#include "elliptika/elliptic.hpp"
#include "elliptika/ntheory.hpp"
#include "elliptika/oscint.hpp"
#include "elliptika/specfun.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

using namespace elliptika;
using nlohmann::json;

namespace {

constexpr const char* kSchema = "elliptika-schema v1";

// exit codes
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;
constexpr int kAuditError = 4;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("ELLIPTIKA_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? (int)hc : 1;
}

TruncationPolicy policy_from(const json& cfg) {
  TruncationPolicy pol;
  pol.l_max = cfg.value("l_max", (i64)0);
  pol.f_max = cfg.value("f_max", (i64)0);
  pol.xi_max = cfg.value("xi_max", (i64)0);
  pol.region_split = cfg.value("region_split", 1.0);
  pol.tail_tol = cfg.value("tail_tol", 0.01);
  pol.osc_tol = cfg.value("osc_tol", 1e-8);
  pol.fifth_sum_negative_n = cfg.value("fifth_negative_n", false);
  pol.threads = resolve_threads(cfg.value("threads", 0));
  return pol;
}

SigmaMethod method_from(const json& cfg) {
  return cfg.value("method", std::string("oracle")) == "expansion"
             ? SigmaMethod::expansion
             : SigmaMethod::oracle;
}

MellinFunction kernel_by_name(const std::string& fn) {
  if (fn == "F") return mf_big_f();
  if (fn == "H0") return mf_h(0);
  if (fn == "H1") return mf_h(1);
  throw std::invalid_argument("unknown kernel: " + fn);
}

double fit_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double n = (double)pts.size();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ------------------------------------------------------------- commands

json run_klsum(const json& cfg) {
  KlParams kp{cfg.at("l").get<i64>(), cfg.at("f").get<i64>(),
              cfg.at("xi").get<i64>(), cfg.at("n").get<i64>()};
  std::string method = cfg.value("method", std::string("both"));
  json r;
  r["l"] = kp.l; r["f"] = kp.f; r["xi"] = kp.xi; r["n"] = kp.n;
  r["bound"] = kl_bound(kp);
  cdouble a{}, b{};
  if (method != "brute") {
    a = kl_factor(kp);
    r["factor"] = {a.real(), a.imag()};
  }
  if (method != "factor") {
    b = kl_bruteforce(kp);
    r["brute"] = {b.real(), b.imag()};
  }
  if (method == "both") r["diff"] = std::abs(a - b);
  return r;
}

json run_klgrid(const json& cfg) {
  i64 lmax = cfg.value("l_max", (i64)8);
  i64 fmax = cfg.value("f_max", (i64)3);
  i64 xi0 = cfg.value("xi_min", (i64)-4), xi1 = cfg.value("xi_max", (i64)4);
  i64 n0 = cfg.value("n_min", (i64)-6), n1 = cfg.value("n_max", (i64)6);
  double tol = cfg.value("tol", 1e-9);
  json rows = json::array();
  double max_diff = 0.0;
  long cases = 0, violations = 0;
  for (i64 l = 1; l <= lmax; ++l)
    for (i64 f = 1; f <= fmax; ++f)
      for (i64 xi = xi0; xi <= xi1; ++xi)
        for (i64 n = n0; n <= n1; ++n) {
          if (n == 0) continue;
          KlParams kp{l, f, xi, n};
          cdouble a = kl_factor(kp), b = kl_bruteforce(kp);
          double d = std::abs(a - b);
          max_diff = std::max(max_diff, d);
          ++cases;
          if (d >= tol) {
            ++violations;
            rows.push_back({{"l", l}, {"f", f}, {"xi", xi}, {"n", n},
                            {"factor", {a.real(), a.imag()}},
                            {"brute", {b.real(), b.imag()}}, {"diff", d}});
          }
        }
  json r;
  r["cases"] = cases;
  r["max_diff"] = max_diff;
  r["violations"] = violations;
  r["mismatches"] = rows;
  return r;
}

json run_specfn(const json& cfg) {
  std::string fn = cfg.at("fn").get<std::string>();
  // table-backed H: the exact deep-y contour is minutes per point
  MellinFunction m = fn == "F" ? mf_big_f()
                   : fn == "H0" ? mf_h_fast(0)
                   : fn == "H1" ? mf_h_fast(1)
                   : throw std::invalid_argument("unknown kernel: " + fn);
  json rows = json::array();
  for (double x : cfg.at("x").get<std::vector<double>>())
    rows.push_back({{"x", x}, {"value", m.value(x)}});
  return json{{"fn", fn}, {"rows", rows}};
}

json run_fourier(const json& cfg) {
  auto th = make_theta();
  std::string region = cfg.value("region", std::string("inside"));
  FourierJob job;
  job.phi = kernel_by_name(cfg.value("phi", std::string("F")));
  job.C = cfg.value("C", 1.0);
  job.D = cfg.value("D", 8.0);
  job.a = cfg.value("a", 0.0);
  job.tol = cfg.value("tol", 1e-10);
  job.support = 2.0;
  if (region == "inside") {
    job.region = Region::inside;
    job.h = [th](double x) { return th.pos(x); };
  } else if (region == "outside") {
    job.region = Region::outside;
    job.h = [th](double x) { return th.pos(x); };
  } else if (region == "line") {
    job.region = Region::line_smooth;
    job.h = th.neg;
  } else {
    throw std::invalid_argument("unknown region: " + region);
  }
  auto v = fourier_singular(job);
  return json{{"region", region}, {"C", job.C}, {"D", job.D}, {"a", job.a},
              {"value", {v.value.real(), v.value.imag()}},
              {"err", v.err}, {"evals", v.evals}};
}

json run_expansion_check(const json& cfg) {
  int M = cfg.value("M", 1);
  int a = cfg.value("a", 1);
  double c2d = cfg.value("c2d", 1.0);
  auto th = make_theta();
  const AsymptoticExpansion& e = a == 1 ? th.exp1 : th.exp2;
  auto h = [&th, a](double x) { return a == 1 ? th.pos1(x) : th.pos2(x); };
  MellinFunction F = mf_big_f();
  ExpansionRequest rq;
  rq.M = M;
  json rows = json::array();
  std::vector<std::pair<double, double>> pts;
  for (double D : cfg.value("D", std::vector<double>{8, 16, 32, 64, 128})) {
    double C = std::sqrt(c2d / D);
    FourierJob job;
    job.h = h;
    job.a = (double)a;
    job.region = Region::inside;
    job.phi = F;
    job.C = C;
    job.D = D;
    job.tol = 1e-11;
    cdouble oracle = fourier_singular(job).value;
    cdouble exp = expansion_inside(e, rq, F, C, D);
    double err = std::abs(oracle - exp);
    rows.push_back({{"D", D}, {"C", C},
                    {"oracle", {oracle.real(), oracle.imag()}},
                    {"expansion", {exp.real(), exp.imag()}}, {"err", err}});
    if (err > 0) pts.push_back({std::log(D), std::log(err)});
  }
  double slope = pts.size() >= 2 ? fit_slope(pts) : 0.0;
  return json{{"M", M}, {"a", a}, {"c2d", c2d}, {"rows", rows},
              {"slope", slope}, {"target", -(M + 2.0 + a / 2.0)}};
}

json envelope_row(const EnvelopeRow& row) {
  return json{{"l", row.l}, {"f", row.f}, {"xi", row.xi}, {"q", row.q},
              {"value", row.value}, {"bound", row.bound}};
}

json run_envelope(const json& cfg) {
  i64 p = cfg.value("p", (i64)101);
  int N = cfg.value("N", 2);
  auto th = make_theta();
  std::vector<std::array<i64, 3>> small{{1, 1, 1}, {1, 1, 2}, {1, 1, 3},
                                        {2, 1, 1}, {2, 1, 2}, {3, 1, 1},
                                        {1, 2, 1}};
  std::vector<std::array<i64, 3>> large{{1, 1, 200}, {1, 1, 400}, {2, 1, 300},
                                        {3, 1, 200}, {1, 2, 100}};
  auto rep = envelope_check(p, th, small, large, N);
  json sr = json::array(), lr = json::array();
  for (auto& row : rep.small_rows) sr.push_back(envelope_row(row));
  for (auto& row : rep.large_rows) lr.push_back(envelope_row(row));
  return json{{"p", p}, {"N", N}, {"small_rows", sr}, {"large_rows", lr},
              {"small_ratio", rep.small_ratio},
              {"large_ratio", rep.large_ratio}};
}

json run_sigma(const json& cfg) {
  i64 p = cfg.at("p").get<i64>();
  auto th = make_theta();
  auto r = sigma_xi(p, th, policy_from(cfg), method_from(cfg));
  return json::parse(report_json(r));
}

std::vector<i64> pick_primes(i64 lo, i64 hi, int count) {
  // geometric targets, snapped to the nearest prime, deduplicated
  std::vector<i64> out;
  for (int k = 0; k < count; ++k) {
    double t = lo * std::pow((double)hi / lo, count == 1 ? 0.0
                                                         : k / (count - 1.0));
    i64 c = (i64)std::llround(t);
    for (i64 d = 0;; ++d) {
      if (c - d >= 3 && is_prime(c - d)) { c -= d; break; }
      if (is_prime(c + d)) { c += d; break; }
    }
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

json run_scan(const json& cfg) {
  std::string range = cfg.value("primes", std::string("100..2000"));
  auto dots = range.find("..");
  if (dots == std::string::npos)
    throw std::invalid_argument("primes must be a..b");
  i64 lo = std::stoll(range.substr(0, dots));
  i64 hi = std::stoll(range.substr(dots + 2));
  int count = cfg.value("count", 20);
  if (lo < 3 || hi <= lo || count < 2)
    throw std::invalid_argument("bad scan range");
  auto primes = pick_primes(lo, hi, count);
  auto th = make_theta();
  auto rep = scan(primes, th, policy_from(cfg), method_from(cfg));
  return json::parse(scan_json(rep));
}

json run_command(const json& cfg) {
  std::string cmd = cfg.at("command").get<std::string>();
  if (cmd == "klsum") return run_klsum(cfg);
  if (cmd == "klgrid") return run_klgrid(cfg);
  if (cmd == "specfn") return run_specfn(cfg);
  if (cmd == "fourier") return run_fourier(cfg);
  if (cmd == "expansion-check") return run_expansion_check(cfg);
  if (cmd == "envelope") return run_envelope(cfg);
  if (cmd == "sigma") return run_sigma(cfg);
  if (cmd == "scan") return run_scan(cfg);
  throw std::invalid_argument("unknown command: " + cmd);
}

// --------------------------------------------------------------- output

void csv_push(std::string& s, const json& row, const std::vector<std::string>& cols) {
  bool first = true;
  for (auto& c : cols) {
    if (!first) s += ",";
    first = false;
    const json& v = row.at(c);
    if (v.is_number_float()) s += fmt(v.get<double>());
    else if (v.is_array()) { // complex pair -> re then im
      s += fmt(v[0].get<double>()) + "," + fmt(v[1].get<double>());
    } else s += v.dump();
  }
  s += "\n";
}

std::string to_csv(const json& cfg, const json& res) {
  std::string cmd = cfg.at("command").get<std::string>();
  std::string s = std::string("# ") + kSchema + "\n";
  s += "# config: " + cfg.dump() + "\n";
  if (cmd == "sigma") {
    s += report_csv_header() + "\n";
    json flat = res;
    std::string row = std::to_string(res["p"].get<i64>());
    row += "," + fmt(res["sigma_square"].get<double>());
    row += "," + fmt(res["sigma_xi"].get<double>());
    for (auto& t : res["terms"]) row += "," + fmt(t.get<double>());
    double delta = std::max({res["audit"]["delta_l"].get<double>(),
                             res["audit"]["delta_f"].get<double>(),
                             res["audit"]["delta_xi"].get<double>()});
    row += "," + fmt(delta);
    s += row + "\n";
    return s;
  }
  if (cmd == "scan") {
    s += report_csv_header() + "\n";
    for (auto& rep : res["reports"]) {
      std::string row = std::to_string(rep["p"].get<i64>());
      row += "," + fmt(rep["sigma_square"].get<double>());
      row += "," + fmt(rep["sigma_xi"].get<double>());
      for (auto& t : rep["terms"]) row += "," + fmt(t.get<double>());
      double delta = std::max({rep["audit"]["delta_l"].get<double>(),
                               rep["audit"]["delta_f"].get<double>(),
                               rep["audit"]["delta_xi"].get<double>()});
      row += "," + fmt(delta);
      s += row + "\n";
    }
    s += "# slope_xi," + fmt(res["slope_xi"].get<double>()) + "\n";
    s += "# slope_square," + fmt(res["slope_square"].get<double>()) + "\n";
    s += std::string("# audits_ok,") +
         (res["audits_ok"].get<bool>() ? "1" : "0") + "\n";
    return s;
  }
  if (cmd == "specfn") {
    s += "x,value\n";
    for (auto& row : res["rows"]) csv_push(s, row, {"x", "value"});
    return s;
  }
  if (cmd == "klgrid") {
    s += "cases,max_diff,violations\n";
    s += std::to_string(res["cases"].get<long>()) + "," +
         fmt(res["max_diff"].get<double>()) + "," +
         std::to_string(res["violations"].get<long>()) + "\n";
    return s;
  }
  if (cmd == "expansion-check") {
    s += "D,C,err\n";
    for (auto& row : res["rows"]) csv_push(s, row, {"D", "C", "err"});
    s += "# slope," + fmt(res["slope"].get<double>()) + "\n";
    return s;
  }
  if (cmd == "envelope") {
    s += "regime,l,f,xi,q,v1,v2,v3,b1,b2,b3\n";
    auto dump_rows = [&](const char* tag, const json& rows) {
      for (auto& row : rows) {
        s += std::string(tag) + "," + std::to_string(row["l"].get<i64>()) +
             "," + std::to_string(row["f"].get<i64>()) + "," +
             std::to_string(row["xi"].get<i64>()) + "," +
             fmt(row["q"].get<double>());
        for (auto& v : row["value"]) s += "," + fmt(v.get<double>());
        for (auto& b : row["bound"]) s += "," + fmt(b.get<double>());
        s += "\n";
      }
    };
    dump_rows("small", res["small_rows"]);
    dump_rows("large", res["large_rows"]);
    return s;
  }
  // klsum, fourier: one-record dumps
  s += "key,value\n";
  for (auto& [k, v] : res.items()) s += k + "," + v.dump() + "\n";
  return s;
}

std::string render(const json& cfg, const json& res) {
  if (cfg.value("format", std::string("json")) == "csv")
    return to_csv(cfg, res);
  json out;
  out["schema"] = kSchema;
  out["config"] = cfg;
  out["results"] = res;
  return out.dump(2) + "\n";
}

void emit(const json& cfg, const std::string& body) {
  std::string path = cfg.value("output", std::string());
  if (path.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output: " + path);
    f << body;
  }
}

int fail(int code, const std::string& msg) {
  std::cerr << json{{"error", msg}, {"code", code}}.dump() << "\n";
  return code;
}

int execute(const json& cfg) {
  json res;
  try {
    res = run_command(cfg);
  } catch (const std::exception& e) {
    return fail(kNumericError, e.what());
  }
  bool dirty = false;
  if (res.contains("audit") && !res["audit"]["ok"].get<bool>()) dirty = true;
  if (res.contains("audits_ok") && !res["audits_ok"].get<bool>()) dirty = true;
  if (res.contains("violations") && res["violations"].get<long>() > 0)
    return fail(kNumericError, "cross-check violations in grid");
  emit(cfg, render(cfg, res));
  if (dirty && !cfg.value("allow_dirty", false))
    return fail(kAuditError, "truncation audit failed (see artifact); "
                             "pass --allow-dirty to keep it");
  return kOk;
}

void scrub_timing(json& j) {
  if (j.is_object()) {
    j.erase("seconds");
    for (auto& [k, v] : j.items()) scrub_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) scrub_timing(v);
  }
}

int replay(const std::string& path) {
  std::ifstream f(path);
  if (!f) return fail(kConfigError, "cannot open replay file: " + path);
  json art;
  try {
    art = json::parse(f);
  } catch (const std::exception& e) {
    return fail(kConfigError, std::string("replay parse: ") + e.what());
  }
  if (!art.contains("config") || !art.contains("results"))
    return fail(kConfigError, "replay file lacks config/results");
  json cfg = art["config"];
  cfg["output"] = ""; // compare in memory
  json res;
  try {
    res = run_command(cfg);
  } catch (const std::exception& e) {
    return fail(kNumericError, e.what());
  }
  json want = art["results"];
  scrub_timing(res); // wall times are the one nondeterministic field
  scrub_timing(want);
  if (res.dump() != want.dump())
    return fail(kNumericError, "replay mismatch: results differ");
  std::cout << json{{"replay", path}, {"match", true}}.dump() << "\n";
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"elliptika: character sums, singular Fourier integrals, and "
               "the Sigma(xi != 0) assembly"};
  app.require_subcommand(0, 1);

  std::string output, format = "json", replay_path;
  int threads = 0;
  bool allow_dirty = false;
  app.add_option("--replay", replay_path,
                 "re-run a JSON artifact and verify identical results");

  json cfg;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--output", output, "artifact path (default stdout)");
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads,
                    "worker cap (default ELLIPTIKA_THREADS or hardware)");
    sub->add_flag("--allow-dirty", allow_dirty,
                  "exit 0 even when a truncation audit fails");
  };

  // klsum
  i64 l = 1, f = 1, xi = 0, n = 1;
  std::string klmethod = "both";
  auto* klsum = app.add_subcommand("klsum", "one generalized Kloosterman sum");
  klsum->add_option("--l", l)->required();
  klsum->add_option("--f", f)->required();
  klsum->add_option("--xi", xi)->required();
  klsum->add_option("--n", n)->required();
  klsum->add_option("--method", klmethod)
      ->check(CLI::IsMember({"brute", "factor", "both"}));
  common(klsum);

  // klgrid
  i64 glmax = 8, gfmax = 3, gxi0 = -4, gxi1 = 4, gn0 = -6, gn1 = 6;
  double gtol = 1e-9;
  auto* klgrid = app.add_subcommand("klgrid", "factor-vs-brute sweep");
  klgrid->add_option("--l-max", glmax);
  klgrid->add_option("--f-max", gfmax);
  klgrid->add_option("--xi-min", gxi0);
  klgrid->add_option("--xi-max", gxi1);
  klgrid->add_option("--n-min", gn0);
  klgrid->add_option("--n-max", gn1);
  klgrid->add_option("--tol", gtol);
  common(klgrid);

  // specfn
  std::string fn;
  std::vector<double> xs;
  auto* specfn = app.add_subcommand("specfn", "evaluate F / H0 / H1");
  specfn->add_option("--fn", fn)->required()
      ->check(CLI::IsMember({"F", "H0", "H1"}));
  specfn->add_option("--x", xs, "evaluation points")->required();
  common(specfn);

  // fourier
  std::string region = "inside", phi = "F";
  double C = 1.0, D = 8.0, a = 0.0, ftol = 1e-10;
  auto* fourier = app.add_subcommand("fourier", "one masked Fourier factor");
  fourier->add_option("--region", region)
      ->check(CLI::IsMember({"inside", "outside", "line"}));
  fourier->add_option("--phi", phi)->check(CLI::IsMember({"F", "H0", "H1"}));
  fourier->add_option("--C", C);
  fourier->add_option("--D", D);
  fourier->add_option("--a", a);
  fourier->add_option("--tol", ftol);
  common(fourier);

  // expansion-check
  int eM = 1, ea = 1;
  double c2d = 1.0;
  std::vector<double> eDs{8, 16, 32, 64, 128};
  auto* expchk = app.add_subcommand("expansion-check",
                                    "oracle-vs-expansion error-law slope");
  expchk->add_option("--M", eM);
  expchk->add_option("--a", ea)->check(CLI::IsMember({0, 1}));
  expchk->add_option("--c2d", c2d, "fixed C^2 D across the D sweep");
  expchk->add_option("--D", eDs);
  common(expchk);

  // envelope
  i64 ep = 101;
  int eN = 2;
  auto* envelope = app.add_subcommand("envelope", "envelope suites at one p");
  envelope->add_option("--p", ep);
  envelope->add_option("--N", eN);
  common(envelope);

  // sigma / scan
  i64 sp = 101, plmax = 0, pfmax = 0, pximax = 0;
  double split = 1.0, tail_tol = 0.01, osc_tol = 1e-8;
  bool fifth_neg = false;
  std::string method = "oracle", primes = "100..2000";
  int count = 20;
  auto policy_flags = [&](CLI::App* sub) {
    sub->add_option("--method", method)
        ->check(CLI::IsMember({"oracle", "expansion"}));
    sub->add_option("--l-max", plmax);
    sub->add_option("--f-max", pfmax);
    sub->add_option("--xi-max", pximax);
    sub->add_option("--region-split", split);
    sub->add_option("--tail-tol", tail_tol);
    sub->add_option("--osc-tol", osc_tol);
    sub->add_flag("--fifth-negative-n", fifth_neg);
    common(sub);
  };
  auto* sigma = app.add_subcommand("sigma", "Sigma(xi != 0) at one prime");
  sigma->add_option("--p", sp)->required();
  policy_flags(sigma);
  auto* scan_cmd = app.add_subcommand("scan", "prime scan with slope fit");
  scan_cmd->add_option("--primes", primes, "range a..b");
  scan_cmd->add_option("--count", count, "number of primes across the range");
  policy_flags(scan_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (!replay_path.empty()) return replay(replay_path);
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kConfigError;
  }
  CLI::App* sub = app.get_subcommands().front();
  std::string cmd = sub->get_name();

  cfg["command"] = cmd;
  cfg["format"] = format;
  if (!output.empty()) cfg["output"] = output;
  if (allow_dirty) cfg["allow_dirty"] = true;

  if (cmd == "klsum") {
    cfg["l"] = l; cfg["f"] = f; cfg["xi"] = xi; cfg["n"] = n;
    cfg["method"] = klmethod;
  } else if (cmd == "klgrid") {
    cfg["l_max"] = glmax; cfg["f_max"] = gfmax;
    cfg["xi_min"] = gxi0; cfg["xi_max"] = gxi1;
    cfg["n_min"] = gn0; cfg["n_max"] = gn1; cfg["tol"] = gtol;
  } else if (cmd == "specfn") {
    cfg["fn"] = fn; cfg["x"] = xs;
  } else if (cmd == "fourier") {
    cfg["region"] = region; cfg["phi"] = phi;
    cfg["C"] = C; cfg["D"] = D; cfg["a"] = a; cfg["tol"] = ftol;
  } else if (cmd == "expansion-check") {
    cfg["M"] = eM; cfg["a"] = ea; cfg["c2d"] = c2d; cfg["D"] = eDs;
  } else if (cmd == "envelope") {
    cfg["p"] = ep; cfg["N"] = eN;
  } else if (cmd == "sigma" || cmd == "scan") {
    if (cmd == "sigma") cfg["p"] = sp;
    else { cfg["primes"] = primes; cfg["count"] = count; }
    cfg["method"] = method;
    cfg["l_max"] = plmax; cfg["f_max"] = pfmax; cfg["xi_max"] = pximax;
    cfg["region_split"] = split; cfg["tail_tol"] = tail_tol;
    cfg["osc_tol"] = osc_tol; cfg["fifth_negative_n"] = fifth_neg;
    cfg["threads"] = resolve_threads(threads);
  }

  return execute(cfg);
}
