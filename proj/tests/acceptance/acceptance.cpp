// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lep/lep.hpp"

using namespace lep;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path g_workdir;
std::ostringstream g_summary;  // JSON lines from the campaigns, kept off stdout

// The k = 12 half-disc used by the enumeration oracle.
RunConfig oracle_config() {
  RunConfig c;
  c.shapes = {Shape::half_disc};
  c.L = 9.5;
  c.offset = Point{kHalfSqrt3 / 2.0, 0.5};
  c.z = shape::boundary_point(Shape::half_disc, 16.0 / 24.0 + 0.001);
  c.w = shape::boundary_point(Shape::half_disc, 22.0 / 24.0 + 0.001);
  c.samples = 1000000;
  c.seed = 2024;
  c.oracle_threshold = 0.005;
  c.out = (g_workdir / "oracle").string();
  return c;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  RunConfig c = oracle_config();
  const OracleReport r = run_oracle_config(c, g_summary);
  const double secs = seconds_since(t0);
  // The mutation hook must be caught by the same harness.
  c.mutate_eraser = true;
  const OracleReport bad = run_oracle_config(c, g_summary, false);
  const bool pass = r.interior == 12 && r.pass() && !bad.pass() && secs < 300;
  return {pass, "k=" + std::to_string(r.interior) + " tv_raw=" + fmt("%.5f", r.tv_raw) +
                    " tv_erased=" + fmt("%.5f", r.tv_erased) + " (support " + std::to_string(r.raw_support) + "/" +
                    std::to_string(r.erased_support) + ") mutated tv_erased=" + fmt("%.3f", bad.tv_erased) +
                    " time=" + fmt("%.1fs", secs)};
}

bool adjacent(const DiscreteDomain& d, std::uint32_t a, std::uint32_t b) {
  for (const auto u : d.vertex_adjacent[a])
    if (u == static_cast<std::int32_t>(b)) return true;
  return false;
}

// Literal quadratic scan of the erasure rule.
std::vector<std::uint32_t> quadratic_erase(const DiscreteDomain& d, const std::vector<std::uint32_t>& w,
                                           std::vector<std::uint32_t>& times) {
  std::vector<std::uint32_t> out{w[0]};
  times = {0};
  const std::size_t n = w.size() - 1;
  std::size_t t = 0;
  while (w[t] != w[n]) {
    std::size_t best = 0;
    for (std::size_t i = t + 1; i <= n; ++i)
      if (adjacent(d, w[t], w[i])) best = i;
    t = best;
    out.push_back(w[t]);
    times.push_back(static_cast<std::uint32_t>(t));
  }
  return out;
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  std::size_t checked = 0, mismatches = 0, violations = 0;
  for (Shape s : kAllShapes) {
    const DiscreteDomain d = build_domain(standard_spec(s, 50));
    NearLoopEraser eraser(d);
    ColorField field(d);
    InterfacePath path;
    ErasedPath e, again;
    std::vector<std::uint32_t> slow_times;
    for (std::uint64_t i = 0; i < 2500; ++i) {
      RngStream rng(derive_seed(2, std::string(shape_name(s))), i);
      RandomColors src{rng};
      explore(d, field, src, path);
      eraser.erase(path.vertices, e);
      const auto slow = quadratic_erase(d, path.vertices, slow_times);
      mismatches += slow != e.vertices || slow_times != e.times;
      bool ok = e.vertices.front() == path.vertices.front() && e.vertices.back() == path.vertices.back();
      for (std::size_t j = 0; j < e.vertices.size(); ++j) {
        ok &= path.vertices[e.times[j]] == e.vertices[j];
        if (j) ok &= e.times[j - 1] < e.times[j];
        if (j + 1 < e.vertices.size()) ok &= adjacent(d, e.vertices[j], e.vertices[j + 1]);
        for (std::size_t k = j + 2; k < e.vertices.size(); ++k) ok &= !adjacent(d, e.vertices[j], e.vertices[k]);
      }
      eraser.erase(e.vertices, again);
      ok &= again.vertices == e.vertices;
      violations += !ok;
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && violations == 0 && checked == 10000 && secs < 60,
          std::to_string(checked) + " interfaces at L=50, mismatches=" + std::to_string(mismatches) +
              " invariant violations=" + std::to_string(violations) + " time=" + fmt("%.1fs", secs)};
}

Outcome criterion3() {
  double worst_z = 0, worst_im = 0, worst_cr = 0, k2_err = 0;
  for (Shape s : kAllShapes) {
    const MapDescriptor m = build_map(standard_spec(s, 100));
    worst_z = std::max(worst_z, std::abs(m(m.spec().z)));
    for (int i = 0; i < 1000; ++i) {
      const Point p = shape::boundary_point(s, (i + 0.5) / 1000.0);
      if (distance(p, m.spec().w) < 1e-12) continue;
      const Complex v = m(p);
      worst_im = std::max(worst_im, std::abs(v.imag()) / std::max(1.0, std::abs(v)));
    }
    RngStream r(3, static_cast<std::uint64_t>(s));
    const auto bb = shape::bbox(s);
    const double h = 1e-5;
    for (int i = 0; i < 100;) {
      const Point p{bb[0] + (bb[2] - bb[0]) * r.uniform(), bb[1] + (bb[3] - bb[1]) * r.uniform()};
      if (!shape::contains(s, p) || shape::boundary_distance(s, p) < 0.02) continue;
      ++i;
      const Complex fx = (m({p.x + h, p.y}) - m({p.x - h, p.y})) / (2 * h);
      const Complex fy = (m({p.x, p.y + h}) - m({p.x, p.y - h})) / (2 * h);
      worst_cr = std::max(worst_cr, std::abs(fy - Complex(0, 1) * fx) / std::max(1.0, std::abs(fx)));
    }
    if (s == Shape::square) k2_err = std::abs(m.elliptic_modulus() * m.elliptic_modulus() - 0.5);
  }
  return {worst_z < 1e-10 && worst_im < 1e-8 && worst_cr < 1e-6 && k2_err < 1e-10,
          "max|phi(z)|=" + fmt("%.2e", worst_z) + " max rel|Im| on boundary=" + fmt("%.2e", worst_im) +
              " max CR residual=" + fmt("%.2e", worst_cr) + " |k^2-1/2|=" + fmt("%.2e", k2_err)};
}

RunConfig invariance_config(unsigned workers, const std::string& dir) {
  RunConfig c;
  c.L = 100;
  c.samples = 1000000;
  c.seed = 20240601;
  c.workers = workers;
  c.out = (g_workdir / dir).string();
  return c;
}

struct InvarianceRun {
  RunConfig config;
  CampaignResult result;
  double seconds = 0;
};

InvarianceRun& invariance_run() {
  static InvarianceRun run = [] {
    InvarianceRun r;
    r.config = invariance_config(1, "invariance_w1");
    const auto t0 = Clock::now();
    r.result = run_campaign(r.config, true, true);
    write_campaign(r.config, r.result, g_summary);
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

Outcome criterion4() {
  const auto& r = invariance_run();
  return {r.result.firsthit.size() == 12 && r.result.firsthit_max_distance <= 0.01,
          std::to_string(r.result.firsthit.size()) + " cdfs, max pairwise sup distance=" +
              fmt("%.5f", r.result.firsthit_max_distance) + " (run time " + fmt("%.0fs", r.seconds) + ")"};
}

// Worst |p(theta) + p(pi - theta) - 1| in standard errors over a curve.
double complement_z(const PassRightCurve& c) {
  double worst = 0;
  const std::size_t n = c.theta.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = n - 1 - k;
    const double se = std::hypot(c.std_error[k], c.std_error[j]);
    worst = std::max(worst, std::abs(c.estimate[k] + c.estimate[j] - 1.0) / se);
  }
  return worst;
}

Outcome criterion5() {
  const auto& r = invariance_run();
  double worst_z = 0, worst_discard = 0;
  for (const auto& c : r.result.passright) {
    worst_z = std::max(worst_z, complement_z(c));
    for (double d : c.discard_rate) worst_discard = std::max(worst_discard, d);
  }
  return {r.result.passright.size() == 12 && r.result.passright_max_distance <= 0.015 && worst_z <= 4.0,
          std::to_string(r.result.passright.size()) + " curves, max pairwise sup distance=" +
              fmt("%.5f", r.result.passright_max_distance) + " worst complement asymmetry=" + fmt("%.2f", worst_z) +
              " SE, max discard rate=" + fmt("%.4f", worst_discard)};
}

Outcome criterion6() {
  RunConfig c;
  c.shapes = {Shape::disc};
  c.L = 100;
  c.samples = 1000000;
  c.seed = 66;
  c.raw = true;
  c.passright_intervals = {{0.4, 0.6}};
  c.out = (g_workdir / "sle6").string();
  const auto t0 = Clock::now();
  auto res = run_campaign(c, false, true);
  write_campaign(c, res, g_summary);
  const auto& curve = res.passright.at(0);
  double worst = 0, at = 0, se_at = 0;
  for (std::size_t k = 0; k < curve.theta.size(); ++k) {
    const double dev = std::abs(curve.estimate[k] - schramm_pass_right(curve.theta[k], 6.0));
    if (dev > worst) {
      worst = dev;
      at = curve.theta[k];
      se_at = curve.std_error[k];
    }
  }
  return {worst <= 0.01, "raw disc L=100 t in [0.4,0.6]: sup|P - P_6|=" + fmt("%.5f", worst) + " at theta=" +
                             fmt("%.3f", at) + " (SE " + fmt("%.5f", se_at) + ") time=" + fmt("%.0fs", seconds_since(t0))};
}

Outcome criterion7() {
  const auto& r = invariance_run();
  double min_z = INFINITY;
  std::string weakest;
  for (const auto& c : r.result.passright) {
    double dev = 0;
    std::size_t at = 0;
    for (std::size_t k = 0; k < c.theta.size(); ++k) {
      const double d = std::abs(c.estimate[k] - (1.0 + std::cos(c.theta[k])) / 2.0);
      if (d > dev) {
        dev = d;
        at = k;
      }
    }
    const double z = dev / c.std_error[at];
    if (z < min_z) {
      min_z = z;
      weakest = c.label + " dev=" + fmt("%.4f", dev) + " at theta=" + fmt("%.3f", c.theta[at]);
    }
  }
  const bool c5 = criterion5().pass;
  return {min_z > 10.0 && c5, "smallest deviation from kappa=8/3 over the 12 curves: " + fmt("%.1f", min_z) +
                                  " SE (" + weakest + "); criterion 5 " + (c5 ? "holds" : "fails")};
}

Outcome criterion8() {
  RunConfig c;
  c.shapes = {Shape::triangle};
  c.dimension_L = {36, 50, 71, 100, 141, 200, 282};
  c.samples = 1000000;
  c.seed = 4;
  c.out = (g_workdir / "dimension").string();
  const auto t0 = Clock::now();
  auto res = run_dimension(c);
  write_dimension(c, res, g_summary);
  const auto& f = res.fit;
  return {f.inv_nu >= 1.32 && f.inv_nu <= 1.35,
          "1/nu=" + fmt("%.5f", f.inv_nu) + " +- " + fmt("%.5f", f.se_inv_nu) + " Delta=" + fmt("%.3f", f.corr_exp) +
              (f.at_bracket_edge ? " (at bracket edge)" : "") + " time=" + fmt("%.0fs", seconds_since(t0))};
}

Outcome criterion9() {
  std::vector<double> Ls;
  for (int i = 0; i < 15; ++i) Ls.push_back(std::round(36.0 * std::pow(912.0 / 36.0, i / 14.0)));
  const std::array<double, 4> truth{0.3, 4.0 / 3.0, 0.5, 0.75};
  const FitResult exact = fit_with_exponent_search(synthetic_observations(Ls, truth, 0.0, 1));
  const double noiseless = std::max({std::abs(exact.ln_c - truth[0]), std::abs(exact.inv_nu - truth[1]),
                                     std::abs(exact.a - truth[2])});
  int within_inv_nu = 0, within_ln_c = 0, within_a = 0, within_all = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const auto obs = synthetic_observations(Ls, truth, 0.02, derive_seed(9, "replicate" + std::to_string(rep)));
    const FitResult f = fit_with_exponent_search(obs);
    const bool a = std::abs(f.inv_nu - truth[1]) <= 3 * f.se_inv_nu;
    const bool b = std::abs(f.ln_c - truth[0]) <= 3 * f.se_ln_c;
    const bool cc = std::abs(f.a - truth[2]) <= 3 * f.se_a;
    within_inv_nu += a;
    within_ln_c += b;
    within_a += cc;
    within_all += a && b && cc;
  }
  return {noiseless < 1e-10 && within_inv_nu >= 95 && within_ln_c >= 95 && within_a >= 95,
          "noiseless max error=" + fmt("%.1e", noiseless) + "; 2% noise, 100 replicates within 3 SE: 1/nu " +
              std::to_string(within_inv_nu) + ", ln c " + std::to_string(within_ln_c) + ", a " +
              std::to_string(within_a) + ", all three " + std::to_string(within_all)};
}

Outcome criterion10() {
  boost::math::quadrature::tanh_sinh<double> ts;
  double worst_q = 0, worst_83 = 0, worst_sym = 0;
  for (double b : {0.5, 2.0 / 3.0, 1.0, 1.5})
    for (double x : {0.01, 0.5, 2.0, 30.0, 1e4}) {
      const double q = ts.integrate([&](double s) { return std::pow(1.0 + x * s * s, -b); }, 0.0, 1.0);
      worst_q = std::max(worst_q, std::abs(gauss_2f1_halfline(b, -x) - q));
    }
  for (int i = 1; i < 200; ++i) {
    const double t = std::numbers::pi * i / 200;
    worst_83 = std::max(worst_83, std::abs(schramm_pass_right(t, 8.0 / 3.0) - (1 + std::cos(t)) / 2));
    for (double k : {8.0 / 3.0, 6.0})
      worst_sym = std::max(worst_sym,
                           std::abs(schramm_pass_right(t, k) + schramm_pass_right(std::numbers::pi - t, k) - 1.0));
  }
  return {worst_q < 1e-9 && worst_83 < 1e-10 && worst_sym < 1e-10,
          "2F1 vs quadrature " + fmt("%.1e", worst_q) + ", kappa=8/3 reduction " + fmt("%.1e", worst_83) +
              ", complement symmetry " + fmt("%.1e", worst_sym)};
}

Outcome criterion11() {
  const auto& one = invariance_run();
  RunConfig c = invariance_config(8, "invariance_w8");
  const auto t0 = Clock::now();
  auto res = run_campaign(c, true, true);
  write_campaign(c, res, g_summary);
  std::size_t differ = 0;
  for (const auto& f : one.result.files)
    differ += slurp(fs::path(one.config.out) / f) != slurp(fs::path(c.out) / f);
  const bool same_list = res.files == one.result.files;
  return {same_list && differ == 0 && !res.files.empty(),
          std::to_string(res.files.size()) + " files compared, " + std::to_string(differ) +
              " differ (8-worker run " + fmt("%.0fs", seconds_since(t0)) + ")"};
}

// Pass-right estimates must not move by more than one standard error when
// the t-grid is refined from 21 to 41 points.
Outcome tgrid_check() {
  RunConfig c;
  c.shapes = {Shape::disc};
  c.L = 100;
  c.samples = 200000;
  c.seed = 41;
  CampaignResult r21, r41;
  c.t_grid = 21;
  r21 = run_campaign(c, false, true);
  c.t_grid = 41;
  r41 = run_campaign(c, false, true);
  double worst = 0, worst_abs = 0, mean_z = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < r21.passright.size(); ++i)
    for (std::size_t k = 0; k < r21.passright[i].theta.size(); ++k) {
      const double d = std::abs(r21.passright[i].estimate[k] - r41.passright[i].estimate[k]);
      const double z = d / r21.passright[i].std_error[k];
      if (!std::isfinite(z)) continue;
      worst = std::max(worst, z);
      worst_abs = std::max(worst_abs, d);
      mean_z += z;
      ++n;
    }
  return {worst < 1.0, "disc L=100, 2e5 samples, 21 vs 41 lines: max shift " + fmt("%.3f", worst) + " SE (" +
                           fmt("%.5f", worst_abs) + " absolute), mean " + fmt("%.3f", mean_z / n) + " SE"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lep acceptance criteria"};
  std::string workdir = "acceptance_runs";
  std::vector<std::string> only;
  app.add_option("--workdir", workdir, "directory for campaign outputs");
  app.add_option("--only", only, "criteria to run (1..11, tgrid)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  g_workdir = workdir;
  fs::create_directories(g_workdir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1", criterion1}, {"2", criterion2},  {"3", criterion3},   {"4", criterion4},
      {"5", criterion5}, {"6", criterion6},  {"7", criterion7},   {"8", criterion8},
      {"9", criterion9}, {"10", criterion10}, {"11", criterion11}, {"tgrid", tgrid_check}};
  const std::set<std::string> selected(only.begin(), only.end());
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    if (!selected.empty() && !selected.count(name)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "CRITERION " << name << ' ' << (o.pass ? "PASS" : "FAIL") << ": " << o.detail << std::endl;
  }
  std::ofstream(g_workdir / "summary.jsonl") << g_summary.str();
  return failures == 0 ? 0 : 1;
}
