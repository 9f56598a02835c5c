#pragma once

// Sampling campaigns behind the command line: run configuration, the
// per-domain sampling loop, and the fixed-name output files.

#include <algorithm>
#include <array>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lep/conformal.hpp"
#include "lep/explorer.hpp"
#include "lep/hexlattice.hpp"
#include "lep/looperase.hpp"
#include "lep/observables.hpp"
#include "lep/oracle.hpp"
#include "lep/parallel.hpp"
#include "lep/rng.hpp"
#include "lep/scalingfit.hpp"
#include "lep/sleformula.hpp"
#include "lep/stats.hpp"

namespace lep {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Configuration

struct Interval {
  double lo;
  double hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct RunConfig {
  std::vector<Shape> shapes{kAllShapes.begin(), kAllShapes.end()};
  double L = 100.0;
  std::vector<double> dimension_L{36, 50, 71, 100, 141, 200, 282};
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool raw = false;
  std::string out = "lep_out";
  std::vector<Interval> firsthit_intervals{{0.4, 0.6}, {0.8, 1.2}, {1.6, 2.4}};
  std::vector<Interval> passright_intervals{{0.2, 0.4}, {0.4, 0.6}, {0.6, 0.8}};
  std::size_t theta_grid = 199;
  std::size_t t_grid = 21;
  double discard_radius = 0.1;
  std::optional<Point> z, w, marker, offset;
  bool synthetic = false;
  /// ln c, 1/nu, a, Delta for synthetic dimension data.
  std::array<double, 4> synthetic_params{0.3, 4.0 / 3.0, 0.5, 0.75};
  double synthetic_noise = 0.02;
  bool mutate_eraser = false;
  double oracle_threshold = 0.005;
  std::uint64_t dump_paths = 0;
  /// The dimension run pools n x n lattice translations per L, which smooths
  /// out how the boundary happens to sit on the lattice; 1 disables it.
  std::size_t registration_grid = 4;
  /// Fit against the side length implied by the discrete domain's area rather
  /// than the nominal L.
  bool effective_size = true;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_numbers(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("config: bad number '" + item + "' for " + key);
    out.push_back(x);
  }
  return out;
}

inline double parse_one(const std::string& v, const std::string& key) {
  const auto xs = parse_numbers(v, key);
  if (xs.size() != 1) throw std::invalid_argument("config: " + key + " takes one number");
  return xs[0];
}

inline std::uint64_t parse_count(const std::string& v, const std::string& key) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || v.front() == '-')
    throw std::invalid_argument("config: " + key + " needs a non-negative integer, got '" + v + "'");
  return x;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: " + key + " needs true/false");
}

inline Point parse_point(const std::string& v, const std::string& key) {
  const auto xs = parse_numbers(v, key);
  if (xs.size() != 2) throw std::invalid_argument("config: " + key + " needs x,y");
  return {xs[0], xs[1]};
}

inline Interval parse_interval(const std::string& v, const std::string& key) {
  const auto xs = parse_numbers(v, key);
  if (xs.size() != 2 || !(xs[1] > xs[0])) throw std::invalid_argument("config: " + key + " needs lo,hi with lo < hi");
  return {xs[0], xs[1]};
}

}  // namespace detail

/// Flat `key = value` text; `#` starts a comment; list keys may repeat.
inline RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::map<std::string, bool> reset;  // first use of a list key drops its default
  auto first = [&](const std::string& key) {
    const bool f = !reset[key];
    reset[key] = true;
    return f;
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq)), v = detail::trim(line.substr(eq + 1));
    if (key == "shape") {
      if (first(key)) c.shapes.clear();
      c.shapes.push_back(parse_shape(v));
    } else if (key == "L") {
      c.L = detail::parse_one(v, key);
    } else if (key == "dimension_L") {
      if (first(key)) c.dimension_L.clear();
      for (double x : detail::parse_numbers(v, key)) c.dimension_L.push_back(x);
    } else if (key == "samples") {
      c.samples = detail::parse_count(v, key);
    } else if (key == "seed") {
      c.seed = detail::parse_count(v, key);
    } else if (key == "workers") {
      c.workers = static_cast<unsigned>(detail::parse_count(v, key));
    } else if (key == "raw") {
      c.raw = detail::parse_bool(v, key);
    } else if (key == "out") {
      c.out = v;
    } else if (key == "firsthit_interval") {
      if (first(key)) c.firsthit_intervals.clear();
      c.firsthit_intervals.push_back(detail::parse_interval(v, key));
    } else if (key == "passright_interval") {
      if (first(key)) c.passright_intervals.clear();
      c.passright_intervals.push_back(detail::parse_interval(v, key));
    } else if (key == "theta_grid") {
      c.theta_grid = detail::parse_count(v, key);
    } else if (key == "t_grid") {
      c.t_grid = detail::parse_count(v, key);
    } else if (key == "discard_radius") {
      c.discard_radius = detail::parse_one(v, key);
    } else if (key == "z") {
      c.z = detail::parse_point(v, key);
    } else if (key == "w") {
      c.w = detail::parse_point(v, key);
    } else if (key == "marker") {
      c.marker = detail::parse_point(v, key);
    } else if (key == "offset") {
      c.offset = detail::parse_point(v, key);
    } else if (key == "synthetic") {
      c.synthetic = detail::parse_bool(v, key);
    } else if (key == "synthetic_params") {
      const auto xs = detail::parse_numbers(v, key);
      if (xs.size() != 4) throw std::invalid_argument("config: synthetic_params needs ln_c,inv_nu,a,corr_exp");
      std::copy(xs.begin(), xs.end(), c.synthetic_params.begin());
    } else if (key == "synthetic_noise") {
      c.synthetic_noise = detail::parse_one(v, key);
    } else if (key == "mutate_eraser") {
      c.mutate_eraser = detail::parse_bool(v, key);
    } else if (key == "oracle_threshold") {
      c.oracle_threshold = detail::parse_one(v, key);
    } else if (key == "effective_size") {
      c.effective_size = detail::parse_bool(v, key);
    } else if (key == "registration_grid") {
      c.registration_grid = detail::parse_count(v, key);
    } else if (key == "dump_paths") {
      c.dump_paths = detail::parse_count(v, key);
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse_config(in);
}

inline void validate_config(const RunConfig& c) {
  if (c.samples < 1) throw std::invalid_argument("config: samples must be at least 1");
  if (c.workers < 1) throw std::invalid_argument("config: workers must be at least 1");
  if (c.shapes.empty()) throw std::invalid_argument("config: no shape selected");
  if (!(c.L > 0.0)) throw std::invalid_argument("config: L must be positive");
  for (const auto& iv : c.firsthit_intervals)
    if (!(iv.lo > 0.0)) throw std::invalid_argument("config: first-hit intervals need 0 < lo < hi");
  for (const auto& iv : c.passright_intervals)
    if (!(iv.lo > 0.0 && iv.hi < 1.0)) throw std::invalid_argument("config: pass-right intervals must lie in (0, 1)");
  if (c.theta_grid < 1) throw std::invalid_argument("config: theta_grid must be at least 1");
  if (c.t_grid < 1) throw std::invalid_argument("config: t_grid must be at least 1");
  if (!(c.discard_radius >= 0.0)) throw std::invalid_argument("config: discard_radius must be non-negative");
  if (c.registration_grid < 1) throw std::invalid_argument("config: registration_grid must be at least 1");
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Canonical text of every setting that can change results (worker count and
/// output directory excluded).
inline std::string canonical_config(const RunConfig& c) {
  std::ostringstream os;
  auto pt = [&](const char* key, const std::optional<Point>& p) {
    if (p) os << key << '=' << format_double(p->x) << ',' << format_double(p->y) << '\n';
  };
  for (Shape s : c.shapes) os << "shape=" << shape_name(s) << '\n';
  os << "L=" << format_double(c.L) << '\n';
  for (double l : c.dimension_L) os << "dimension_L=" << format_double(l) << '\n';
  os << "samples=" << c.samples << "\nseed=" << c.seed << "\nraw=" << c.raw << '\n';
  for (const auto& iv : c.firsthit_intervals)
    os << "firsthit_interval=" << format_double(iv.lo) << ',' << format_double(iv.hi) << '\n';
  for (const auto& iv : c.passright_intervals)
    os << "passright_interval=" << format_double(iv.lo) << ',' << format_double(iv.hi) << '\n';
  os << "theta_grid=" << c.theta_grid << "\nt_grid=" << c.t_grid << "\ndiscard_radius=" << format_double(c.discard_radius)
     << '\n';
  pt("z", c.z);
  pt("w", c.w);
  pt("marker", c.marker);
  pt("offset", c.offset);
  os << "synthetic=" << c.synthetic << "\nsynthetic_params=";
  for (double p : c.synthetic_params) os << format_double(p) << ',';
  os << "\nsynthetic_noise=" << format_double(c.synthetic_noise) << "\nmutate_eraser=" << c.mutate_eraser
     << "\noracle_threshold=" << format_double(c.oracle_threshold) << "\ndump_paths=" << c.dump_paths << "\nregistration_grid=" << c.registration_grid
     << "\neffective_size=" << c.effective_size << '\n';
  return os.str();
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string config_hash(const RunConfig& c) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(canonical_config(c)));
  return buf;
}

inline std::string file_header(const RunConfig& c) {
  return std::string("# lep ") + kVersion + " config_hash=" + config_hash(c) + " seed=" + std::to_string(c.seed) + "\n";
}

/// Independent stream seed for a named sub-run (domain, L value, ...).
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& tag) {
  std::uint64_t x = master ^ fnv1a64(tag);
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Domain spec for one shape: symmetric standard discretization unless the
/// config pins anchors or the offset.
inline DomainSpec spec_for(const RunConfig& c, Shape s, double L) {
  DomainSpec spec = c.offset ? DomainSpec::with_defaults(s, L) : standard_spec(s, L);
  if (c.offset) spec.offset = *c.offset;
  if (c.z) spec.z = *c.z;
  if (c.w) spec.w = *c.w;
  if (c.marker) spec.marker = *c.marker;
  spec.validate();
  return spec;
}

inline std::string interval_label(const Interval& iv) { return format_double(iv.lo) + "-" + format_double(iv.hi); }

// ---------------------------------------------------------------------------
// Progress

class Progress {
 public:
  Progress(std::string label, std::uint64_t total, bool enabled) : label_(std::move(label)), total_(total), on_(enabled) {}
  void advance(std::uint64_t n) {
    if (!on_) return;
    const std::uint64_t done = done_ += n;
    const std::uint64_t tenth = done * 10 / std::max<std::uint64_t>(total_, 1);
    std::lock_guard<std::mutex> lock(m_);
    if (tenth > reported_) {
      reported_ = tenth;
      std::cerr << "[lep] " << label_ << ": " << done << "/" << total_ << " samples\n";
    }
  }

 private:
  std::string label_;
  std::uint64_t total_;
  bool on_;
  std::atomic<std::uint64_t> done_{0};
  std::mutex m_;
  std::uint64_t reported_ = 0;
};

// ---------------------------------------------------------------------------
// Per-domain sampling

struct SamplingPlan {
  bool firsthit = false;
  bool passright = false;
  std::vector<Interval> firsthit_intervals;
  std::vector<Interval> passright_intervals;
  std::size_t theta_grid = 199;
  std::size_t t_grid = 21;
  double discard_radius = 0.1;
  bool raw = false;
  Selection selection = Selection::latest;
  std::uint64_t dump_paths = 0;
  bool progress = true;
};

struct DomainRun {
  DomainSpec spec;
  std::size_t hexes = 0;
  std::uint64_t samples = 0;
  /// Fixed-point first-hit values, one vector per interval, in sample order.
  std::vector<std::vector<std::uint32_t>> firsthit;
  std::vector<double> thetas;
  PassRightAccumulator passright;
  std::size_t disabled_lines = 0;
  /// Exact integer moments of the observed curve's step count.
  std::uint64_t steps_sum = 0;
  std::uint64_t steps_sq = 0;
  std::uint64_t revealed_sum = 0;
  std::vector<std::vector<VertexId>> dumped;

  MeanWithError mean_steps() const {
    if (samples < 2) throw std::invalid_argument("mean_steps: need at least 2 samples");
    const double n = static_cast<double>(samples);
    const double mean = static_cast<double>(steps_sum) / n;
    const double var = std::max(0.0, (static_cast<double>(steps_sq) - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
  }
};

/// Unique probe heights shared across intervals, plus each interval's lines.
struct ProbeLayout {
  std::vector<double> ts;
  std::vector<std::vector<std::size_t>> interval_lines;
};

inline ProbeLayout probe_layout(const std::vector<Interval>& intervals, std::size_t points) {
  ProbeLayout p;
  std::vector<std::vector<double>> per;
  for (const auto& iv : intervals) {
    per.push_back(t_grid(iv.lo, iv.hi, points));
    for (double t : per.back()) p.ts.push_back(t);
  }
  std::sort(p.ts.begin(), p.ts.end());
  p.ts.erase(std::unique(p.ts.begin(), p.ts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             p.ts.end());
  for (const auto& g : per) {
    std::vector<std::size_t> idx;
    for (double t : g) {
      const auto it = std::lower_bound(p.ts.begin(), p.ts.end(), t - 1e-12);
      idx.push_back(static_cast<std::size_t>(it - p.ts.begin()));
    }
    p.interval_lines.push_back(std::move(idx));
  }
  return p;
}

inline DomainRun sample_domain(const DomainSpec& spec, std::uint64_t seed, std::uint64_t samples, unsigned workers,
                               const SamplingPlan& plan) {
  const DiscreteDomain d = build_domain(spec);
  DomainRun run;
  run.spec = spec;
  run.hexes = d.size();
  run.samples = samples;

  std::vector<double> modulus, angle;
  if (plan.firsthit) {
    const MapDescriptor m = build_map(spec);
    for (const Complex& v : vertex_images(m, d)) {
      const PolarForm pf = polar(v);
      modulus.push_back(pf.r);
      angle.push_back(pf.theta / std::numbers::pi);
    }
  }
  std::vector<RInterval> rivs;
  if (plan.firsthit)
    for (const auto& iv : plan.firsthit_intervals) rivs.push_back({iv.lo, iv.hi});

  std::optional<PassRightEvaluator> proto;
  if (plan.passright) {
    const MapDescriptor m = build_map(spec);
    run.thetas = uniform_theta_grid(plan.theta_grid);
    const ProbeLayout layout = probe_layout(plan.passright_intervals, plan.t_grid);
    std::vector<SegmentProbe> probes;
    for (double t : layout.ts) {
      probes.push_back(build_probes(m, t, run.thetas));
      if (!probes.back().monotone) ++run.disabled_lines;
    }
    proto.emplace(d, probes, layout.interval_lines, plan.discard_radius);
    run.passright = proto->make_accumulator();
  }

  struct Ctx {
    ColorField field;
    NearLoopEraser eraser;
    std::optional<PassRightEvaluator> eval;
    InterfacePath path;
    ErasedPath erased;
    std::vector<double> fh;
  };
  struct Block {
    std::vector<std::vector<std::uint32_t>> firsthit;
    PassRightAccumulator acc;
    std::uint64_t steps_sum = 0, steps_sq = 0, revealed = 0;
    std::vector<std::vector<VertexId>> dumped;
  };
  Progress progress(std::string(shape_name(spec.shape)) + " L=" + format_double(spec.L), samples, plan.progress);

  auto blocks = run_blocks(
      samples, 1u << 12, workers, [&] { return Ctx{ColorField(d), NearLoopEraser(d), proto, {}, {}, {}}; },
      [&](Ctx& c, std::size_t begin, std::size_t end) {
        Block b;
        b.firsthit.resize(rivs.size());
        for (auto& v : b.firsthit) v.reserve(end - begin);
        if (c.eval) b.acc = c.eval->make_accumulator();
        for (std::size_t i = begin; i < end; ++i) {
          RngStream rng(seed, i);
          RandomColors src{rng};
          explore(d, c.field, src, c.path);
          b.revealed += c.field.revealed();
          const std::vector<std::uint32_t>* curve = &c.path.vertices;
          if (!plan.raw) {
            c.eraser.erase(c.path.vertices, c.erased, plan.selection);
            curve = &c.erased.vertices;
          }
          const std::uint64_t steps = curve->size() - 1;
          b.steps_sum += steps;
          b.steps_sq += steps * steps;
          if (i < plan.dump_paths) b.dumped.push_back(to_vertex_ids(d, *curve));
          if (plan.firsthit) {
            const auto& cv = *curve;
            const bool ok = averaged_first_hits(
                cv.size(), [&](std::size_t k) { return modulus[cv[k]]; }, [&](std::size_t k) { return angle[cv[k]]; },
                rivs, c.fh);
            if (!ok)
              throw std::runtime_error("sample " + std::to_string(i) +
                                       ": curve never reaches the largest first-hit radius");
            for (std::size_t k = 0; k < rivs.size(); ++k) b.firsthit[k].push_back(to_fixed(c.fh[k]));
          }
          if (c.eval) {
            c.eval->classify(*curve);
            c.eval->accumulate(b.acc);
          }
        }
        progress.advance(end - begin);
        return b;
      });

  run.firsthit.resize(rivs.size());
  for (auto& v : run.firsthit) v.reserve(samples);
  for (auto& b : blocks) {
    for (std::size_t k = 0; k < rivs.size(); ++k)
      run.firsthit[k].insert(run.firsthit[k].end(), b.firsthit[k].begin(), b.firsthit[k].end());
    if (plan.passright) run.passright.merge(b.acc);
    run.steps_sum += b.steps_sum;
    run.steps_sq += b.steps_sq;
    run.revealed_sum += b.revealed;
    for (auto& p : b.dumped) run.dumped.push_back(std::move(p));
  }
  return run;
}

// ---------------------------------------------------------------------------
// Output helpers

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
  if (!os) throw std::runtime_error("write failed for " + p.string());
}

inline std::filesystem::path prepare_out(const RunConfig& c) {
  std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + c.out + ": " + ec.message());
  return dir;
}

/// One line per vertex address "q r corner", one blank-separated path per line.
inline void write_dump(const std::filesystem::path& p, const RunConfig& c, const DomainRun& run, bool erased) {
  std::ostringstream os;
  os << file_header(c) << "# " << (erased ? "erased" : "raw") << " paths; vertex = q,r,corner\n";
  for (const auto& path : run.dumped) {
    for (std::size_t i = 0; i < path.size(); ++i)
      os << (i ? " " : "") << path[i].hex.q << ',' << path[i].hex.r << ',' << int(path[i].corner);
    os << '\n';
  }
  write_file(p, os.str());
}

inline std::string domain_tag(const DomainSpec& s) { return std::string(shape_name(s.shape)); }

// ---------------------------------------------------------------------------
// firsthit

struct FirstHitCurve {
  std::string label;  ///< <domain>_<interval>
  EmpiricalCdf cdf;
};

struct FirstHitResult {
  std::vector<DomainRun> runs;
  std::vector<FirstHitCurve> curves;
  std::vector<std::vector<double>> distances;
  double max_distance = 0.0;
};

inline SamplingPlan plan_from(const RunConfig& c) {
  SamplingPlan p;
  p.firsthit_intervals = c.firsthit_intervals;
  p.passright_intervals = c.passright_intervals;
  p.theta_grid = c.theta_grid;
  p.t_grid = c.t_grid;
  p.discard_radius = c.discard_radius;
  p.raw = c.raw;
  p.selection = c.mutate_eraser ? Selection::earliest : Selection::latest;
  p.dump_paths = c.dump_paths;
  return p;
}

inline std::vector<std::vector<double>> pairwise_sup(const std::vector<std::vector<double>>& curves, double& max_off) {
  const std::size_t n = curves.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  max_off = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < curves[a].size(); ++i)
        if (std::isfinite(curves[a][i]) && std::isfinite(curves[b][i])) s = std::max(s, std::abs(curves[a][i] - curves[b][i]));
      m[a][b] = s;
      if (a != b) max_off = std::max(max_off, s);
    }
  return m;
}

inline std::string matrix_csv(const RunConfig& c, const std::vector<std::string>& labels,
                              const std::vector<std::vector<double>>& m) {
  std::ostringstream os;
  os << file_header(c) << "label";
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  for (std::size_t a = 0; a < labels.size(); ++a) {
    os << labels[a];
    for (double v : m[a]) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

struct PassRightCurve {
  std::string label;
  std::vector<double> theta, estimate, std_error, n_effective, discard_rate;
};

struct CampaignResult {
  std::vector<DomainRun> runs;
  std::vector<FirstHitCurve> firsthit;
  std::vector<std::vector<double>> firsthit_distances;
  double firsthit_max_distance = 0.0;
  std::vector<PassRightCurve> passright;
  std::vector<std::vector<double>> passright_distances;
  double passright_max_distance = 0.0;
  std::vector<std::string> files;
};

/// Sample every configured domain once and derive the requested observables.
inline CampaignResult run_campaign(const RunConfig& c, bool want_firsthit, bool want_passright,
                                   bool progress = true) {
  validate_config(c);
  SamplingPlan plan = plan_from(c);
  plan.firsthit = want_firsthit;
  plan.passright = want_passright;
  plan.progress = progress;
  CampaignResult res;
  for (Shape s : c.shapes) {
    const DomainSpec spec = spec_for(c, s, c.L);
    const std::uint64_t seed = derive_seed(c.seed, std::string(shape_name(s)) + "@" + format_double(c.L));
    res.runs.push_back(sample_domain(spec, seed, c.samples, c.workers, plan));
  }
  for (const auto& run : res.runs) {
    for (std::size_t k = 0; k < run.firsthit.size(); ++k)
      res.firsthit.push_back({domain_tag(run.spec) + "_" + interval_label(c.firsthit_intervals[k]),
                              EmpiricalCdf::from_fixed_samples(run.firsthit[k])});
    if (want_passright) {
      for (std::size_t iv = 0; iv < c.passright_intervals.size(); ++iv) {
        PassRightCurve pc;
        pc.label = domain_tag(run.spec) + "_" + interval_label(c.passright_intervals[iv]);
        for (std::size_t k = 0; k < run.thetas.size(); ++k) {
          const auto e = run.passright.estimate(iv, k);
          pc.theta.push_back(run.thetas[k]);
          pc.estimate.push_back(e.estimate);
          pc.std_error.push_back(e.std_error);
          pc.n_effective.push_back(e.n_effective);
          pc.discard_rate.push_back(e.discard_rate);
        }
        res.passright.push_back(std::move(pc));
      }
    }
  }
  if (want_firsthit) {
    std::vector<std::vector<double>> g;
    for (const auto& f : res.firsthit) g.push_back(f.cdf.grid_values());
    res.firsthit_distances = pairwise_sup(g, res.firsthit_max_distance);
  }
  if (want_passright) {
    std::vector<std::vector<double>> g;
    for (const auto& p : res.passright) g.push_back(p.estimate);
    res.passright_distances = pairwise_sup(g, res.passright_max_distance);
  }
  return res;
}

inline void write_campaign(const RunConfig& c, CampaignResult& res, std::ostream& summary) {
  const auto dir = prepare_out(c);
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    res.files.push_back(name);
  };
  for (std::size_t i = 0; i < res.firsthit.size(); ++i) {
    const auto& f = res.firsthit[i];
    std::ostringstream os;
    os << file_header(c) << "x,F\n";
    for (std::size_t k = 0; k < kCdfGridSize; ++k)
      os << format_double(cdf_grid_point(k)) << ',' << format_double(f.cdf.at_grid(k)) << '\n';
    emit("firsthit_" + f.label + ".csv", os.str());
    summary << nlohmann::json{{"kind", "firsthit"}, {"curve", f.label}, {"n", f.cdf.count()},
                              {"seed", c.seed},     {"config_hash", config_hash(c)}}
                   .dump()
            << '\n';
  }
  if (!res.firsthit.empty()) {
    std::vector<std::string> labels;
    for (const auto& f : res.firsthit) labels.push_back(f.label);
    emit("distances.csv", matrix_csv(c, labels, res.firsthit_distances));
    summary << nlohmann::json{{"kind", "firsthit_distances"}, {"curves", labels.size()},
                              {"max_offdiagonal", res.firsthit_max_distance}}
                   .dump()
            << '\n';
  }
  for (const auto& p : res.passright) {
    std::ostringstream os;
    os << file_header(c) << "theta,estimate,std_error,n_effective,schramm_kappa_8_3";
    if (c.raw) os << ",schramm_kappa_6";
    os << '\n';
    double max_discard = 0.0;
    for (std::size_t k = 0; k < p.theta.size(); ++k) {
      os << format_double(p.theta[k]) << ',' << format_double(p.estimate[k]) << ',' << format_double(p.std_error[k])
         << ',' << format_double(p.n_effective[k]) << ',' << format_double(schramm_pass_right(p.theta[k], 8.0 / 3.0));
      if (c.raw) os << ',' << format_double(schramm_pass_right(p.theta[k], 6.0));
      os << '\n';
      max_discard = std::max(max_discard, p.discard_rate[k]);
    }
    emit("passright_" + p.label + ".csv", os.str());
    std::cerr << "[lep] passright " << p.label << ": max discard rate " << format_double(max_discard) << '\n';
    summary << nlohmann::json{{"kind", "passright"}, {"curve", p.label}, {"n", c.samples},
                              {"max_discard_rate", max_discard}, {"seed", c.seed}, {"config_hash", config_hash(c)}}
                   .dump()
            << '\n';
  }
  if (!res.passright.empty()) {
    std::vector<std::string> labels;
    for (const auto& p : res.passright) labels.push_back(p.label);
    emit("passright_distances.csv", matrix_csv(c, labels, res.passright_distances));
    summary << nlohmann::json{{"kind", "passright_distances"}, {"curves", labels.size()},
                              {"max_offdiagonal", res.passright_max_distance}}
                   .dump()
            << '\n';
  }
  if (c.dump_paths > 0)
    for (const auto& run : res.runs) {
      const std::string name = std::string("paths_") + (c.raw ? "raw_" : "erased_") + domain_tag(run.spec) + ".txt";
      write_dump(dir / name, c, run, !c.raw);
      res.files.push_back(name);
    }
}

// ---------------------------------------------------------------------------
// dimension

struct DimensionResult {
  std::vector<LengthObservation> observations;
  std::vector<double> nominal_L;  ///< parallel to observations
  FitResult fit;
  std::vector<std::string> files;
};

/// Ansatz data with multiplicative Gaussian noise (Box-Muller on the run's
/// counter-based stream, so replicates are reproducible).
inline std::vector<LengthObservation> synthetic_observations(const std::vector<double>& Ls,
                                                             const std::array<double, 4>& params, double noise,
                                                             std::uint64_t seed) {
  std::vector<LengthObservation> obs;
  RngStream rng(seed, 0);
  for (double L : Ls) {
    const double truth = std::exp(params[0] + params[1] * std::log(L) + params[2] * std::pow(L, -params[3]));
    double eps = 0.0;
    if (noise > 0.0) {
      const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
      eps = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    // Noiseless data still needs positive weights; any common relative error works.
    obs.push_back({L, truth * std::exp(noise * eps), truth * (noise > 0.0 ? noise : 1e-3)});
  }
  return obs;
}

inline DimensionResult run_dimension(const RunConfig& c, bool progress = true) {
  validate_config(c);
  std::set<double> distinct(c.dimension_L.begin(), c.dimension_L.end());
  if (distinct.size() < 4)
    throw std::invalid_argument("dimension: need at least 4 distinct L values (got " +
                                std::to_string(distinct.size()) + "); add more dimension_L entries");
  DimensionResult res;
  if (c.synthetic) {
    res.observations = synthetic_observations(c.dimension_L, c.synthetic_params, c.synthetic_noise,
                                              derive_seed(c.seed, "synthetic"));
    res.nominal_L = c.dimension_L;
  } else {
    SamplingPlan plan = plan_from(c);
    plan.progress = progress;
    const Shape s = c.shapes.front();
    const std::size_t n = c.registration_grid;
    for (double L : c.dimension_L) {
      const std::string tag = std::string(shape_name(s)) + "@" + format_double(L);
      std::uint64_t count = 0, sum = 0, sq = 0;
      double hexes = 0.0;  // sample-weighted
      auto one = [&](const RunConfig& cj, const std::string& key, std::uint64_t share) {
        const DomainSpec spec = spec_for(cj, s, L);
        const auto run = sample_domain(spec, derive_seed(c.seed, key), share, c.workers, plan);
        count += run.samples, sum += run.steps_sum, sq += run.steps_sq;
        hexes += static_cast<double>(share) * static_cast<double>(build_domain(spec).size());
      };
      if (n == 1) {
        one(c, tag, c.samples);
      } else {
        // Translations on an n x n grid over one cell of the hexagon-center
        // lattice, spanned by (sqrt3, 0) and (sqrt3/2, 3/2).
        for (std::size_t j = 0; j < n * n; ++j) {
          const double u = (static_cast<double>(j % n) + 0.5) / static_cast<double>(n);
          const double v = (static_cast<double>(j / n) + 0.5) / static_cast<double>(n);
          RunConfig cj = c;
          const Point base = c.offset.value_or(Point{0.0, 0.0});
          cj.offset = Point{base.x + u * kSqrt3 + v * kHalfSqrt3, base.y + 1.5 * v};
          const std::uint64_t share = c.samples / (n * n) + (j < c.samples % (n * n) ? 1 : 0);
          if (share > 0) one(cj, tag + "#" + std::to_string(j), share);
        }
      }
      DomainRun pooled;
      pooled.samples = count, pooled.steps_sum = sum, pooled.steps_sq = sq;
      const auto m = pooled.mean_steps();
      // Trimming at the boundary shrinks the domain by a roughly constant
      // margin, which would otherwise show up as a spurious 1/L correction.
      const double area = hexes / static_cast<double>(count) * 1.5 * kSqrt3;
      const double size = c.effective_size ? std::sqrt(area / shape::unit_area(s)) : L;
      res.observations.push_back({size, m.mean, m.std_error});
      res.nominal_L.push_back(L);
    }
  }
  res.fit = fit_with_exponent_search(res.observations);
  return res;
}

inline void write_dimension(const RunConfig& c, DimensionResult& res, std::ostream& summary) {
  const auto dir = prepare_out(c);
  std::ostringstream obs, diag;
  obs << file_header(c) << "L,size,mean,stderr\n";
  diag << file_header(c) << "size,ln_size,ln_mean,ln_mean_minus_4_3_ln_size,stderr_ln_mean,fit_ln_mean,residual\n";
  const auto& f = res.fit;
  for (std::size_t i = 0; i < res.observations.size(); ++i) {
    const auto& o = res.observations[i];
    obs << format_double(res.nominal_L[i]) << ',' << format_double(o.L) << ',' << format_double(o.mean_steps) << ',' << format_double(o.std_error) << '\n';
    const double lnL = std::log(o.L), lnm = std::log(o.mean_steps);
    const double model = f.ln_c + f.inv_nu * lnL + f.a * std::pow(o.L, -f.corr_exp);
    diag << format_double(o.L) << ',' << format_double(lnL) << ',' << format_double(lnm) << ','
         << format_double(lnm - 4.0 / 3.0 * lnL) << ',' << format_double(o.std_error / o.mean_steps) << ','
         << format_double(model) << ',' << format_double(lnm - model) << '\n';
  }
  write_file(dir / "dimension_obs.csv", obs.str());
  write_file(dir / "dimension_diag.csv", diag.str());
  nlohmann::ordered_json j{{"version", kVersion},      {"config_hash", config_hash(c)}, {"seed", c.seed},
                           {"ln_c", f.ln_c},           {"inv_nu", f.inv_nu},            {"a", f.a},
                           {"corr_exp", f.corr_exp},   {"se_ln_c", f.se_ln_c},          {"se_inv_nu", f.se_inv_nu},
                           {"se_a", f.se_a},           {"rss", f.rss},                  {"at_bracket_edge", f.at_bracket_edge}};
  write_file(dir / "fit.json", j.dump(2) + "\n");
  res.files = {"dimension_obs.csv", "dimension_diag.csv", "fit.json"};
  summary << nlohmann::json{{"kind", "dimension"}, {"inv_nu", f.inv_nu}, {"se_inv_nu", f.se_inv_nu},
                            {"corr_exp", f.corr_exp}, {"observations", res.observations.size()},
                            {"seed", c.seed}, {"config_hash", config_hash(c)}}
                 .dump()
          << '\n';
}

// ---------------------------------------------------------------------------
// oracle

inline OracleReport run_oracle_config(const RunConfig& c, std::ostream& summary, bool write_files = true) {
  validate_config(c);
  const DomainSpec spec = spec_for(c, c.shapes.front(), c.L);
  const DiscreteDomain d = build_domain(spec);
  check_oracle_size(d);
  const Selection sel = c.mutate_eraser ? Selection::earliest : Selection::latest;
  const OracleReport r = run_oracle(d, derive_seed(c.seed, "oracle"), c.samples, c.workers, c.oracle_threshold, sel);
  if (write_files) {
    const auto dir = prepare_out(c);
    const ExactPair exact = enumerate_both(d, c.workers);
    std::ostringstream raw, er;
    raw << file_header(c);
    write_distribution_csv(raw, exact.raw);
    er << file_header(c);
    write_distribution_csv(er, exact.erased);
    write_file(dir / "oracle_raw.csv", raw.str());
    write_file(dir / "oracle_erased.csv", er.str());
  }
  summary << nlohmann::json{{"kind", "oracle"},           {"interior", r.interior},
                            {"raw_support", r.raw_support}, {"erased_support", r.erased_support},
                            {"tv_raw", r.tv_raw},         {"tv_erased", r.tv_erased},
                            {"threshold", r.threshold},   {"pass", r.pass()},
                            {"seed", c.seed},             {"config_hash", config_hash(c)}}
                 .dump()
          << '\n';
  return r;
}

// ---------------------------------------------------------------------------
// sle-curve

inline void write_sle_curve(const RunConfig& c, const std::vector<double>& kappas, std::ostream& summary) {
  const auto dir = prepare_out(c);
  const auto thetas = uniform_theta_grid(c.theta_grid);
  std::ostringstream os;
  os << file_header(c) << "theta";
  for (double k : kappas) os << ",kappa_" << format_double(k);
  os << '\n';
  for (double t : thetas) {
    os << format_double(t);
    for (double k : kappas) os << ',' << format_double(schramm_pass_right(t, k));
    os << '\n';
  }
  write_file(dir / "sle_curve.csv", os.str());
  summary << nlohmann::json{{"kind", "sle-curve"}, {"points", thetas.size()}, {"kappas", kappas}}.dump() << '\n';
}

}  // namespace lep
