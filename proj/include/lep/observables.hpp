#pragma once

// Conformal-invariance observables: the r-averaged first-hit angle and the
// pass-right function on horizontal probe segments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "lep/conformal.hpp"
#include "lep/hexlattice.hpp"

namespace lep {

// ---------------------------------------------------------------------------
// First hit

/// theta / pi of the first curve point with modulus >= r.
inline double first_hit_angle(const MappedCurve& curve, double r) {
  for (const Complex& z : curve.points)
    if (std::abs(z) >= r) return polar(z).theta / std::numbers::pi;
  throw std::domain_error("first_hit_angle: curve never reaches modulus r");
}

struct RInterval {
  double lo;
  double hi;
};

/// Exact r-average of the first-hit step function over several intervals in
/// one pass. `modulus(i)` and `angle(i)` (already divided by pi) describe the
/// i-th curve point; returns false if the curve never reaches every hi.
template <class Modulus, class Angle>
bool averaged_first_hits(std::size_t n, Modulus modulus, Angle angle, const std::vector<RInterval>& intervals,
                         std::vector<double>& out) {
  out.assign(intervals.size(), 0.0);
  double rmax = -1.0;
  for (const auto& iv : intervals) rmax = std::max(rmax, iv.hi);
  double prev = 0.0;  // running maximum before the current record
  for (std::size_t i = 0; i < n; ++i) {
    const double m = modulus(i);
    if (m <= prev) continue;
    // theta(r) = angle(i) for r in (prev, m].
    const double a = angle(i);
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      const double lo = std::max(prev, intervals[k].lo), hi = std::min(m, intervals[k].hi);
      if (hi > lo) out[k] += a * (hi - lo);
    }
    prev = m;
    if (prev >= rmax) break;
  }
  if (prev < rmax) return false;
  for (std::size_t k = 0; k < intervals.size(); ++k) out[k] /= intervals[k].hi - intervals[k].lo;
  return true;
}

inline double averaged_first_hit(const MappedCurve& curve, double r_lo, double r_hi) {
  if (!(r_hi > r_lo && r_lo > 0.0)) throw std::invalid_argument("averaged_first_hit: need 0 < r_lo < r_hi");
  std::vector<double> out;
  const bool ok = averaged_first_hits(
      curve.points.size(), [&](std::size_t i) { return std::abs(curve.points[i]); },
      [&](std::size_t i) { return polar(curve.points[i]).theta / std::numbers::pi; }, {{r_lo, r_hi}}, out);
  if (!ok) throw std::domain_error("averaged_first_hit: curve never reaches r_hi");
  return out[0];
}

// ---------------------------------------------------------------------------
// Side of a point

enum class Side { left, right };

inline double segment_point_distance(Point p, Point a, Point b) { return shape::segment_distance(p, a, b); }

/// Which side of the curve q lies on. The curve (z -> w) is closed by the
/// boundary return from w to z through the black arc; q is on the right
/// (black) side iff that loop winds around it. Throws if q is within `tol`
/// of the curve itself.
inline Side side_of_point(const std::vector<Point>& path, const std::vector<Point>& black_return, Point q,
                          double tol) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (segment_point_distance(q, path[i], path[i + 1]) < tol)
      throw std::domain_error("side_of_point: point too close to the path");
  std::vector<Point> loop(path);
  loop.insert(loop.end(), black_return.begin(), black_return.end());
  int winding = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point a = loop[i], b = loop[(i + 1) % loop.size()];
    const double side = cross(b - a, q - a);
    if (a.y <= q.y) {
      if (b.y > q.y && side > 0) ++winding;
    } else if (b.y <= q.y && side < 0) {
      --winding;
    }
  }
  return winding != 0 ? Side::right : Side::left;
}

// ---------------------------------------------------------------------------
// Probes

/// Height (unit coordinates) of the t-segment: t = 0 through z, t = 1 through w.
inline double segment_height(const DomainSpec& spec, double t) { return (1.0 - t) * spec.z.y + t * spec.w.y; }

struct SegmentProbe {
  double t = 0.0;
  double y = 0.0;                ///< unit-domain height
  std::vector<double> theta;     ///< requested angles
  std::vector<double> x;         ///< unit-domain abscissae (NaN if absent)
  std::vector<char> present;
  bool monotone = true;
};

inline std::vector<double> uniform_theta_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = std::numbers::pi * static_cast<double>(k + 1) / static_cast<double>(n + 1);
  return g;
}

/// For each theta, the point of the height-t chord whose image has polar
/// angle theta (bracketed root finding along the chord).
inline SegmentProbe build_probes(const MapDescriptor& m, double t, const std::vector<double>& theta_grid) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("build_probes: t must lie in (0, 1)");
  const DomainSpec& spec = m.spec();
  if (spec.z.x != spec.w.x) throw std::invalid_argument("build_probes: anchors must be vertically aligned");
  SegmentProbe p;
  p.t = t;
  p.y = segment_height(spec, t);
  p.theta = theta_grid;
  p.x.assign(theta_grid.size(), std::nan(""));
  p.present.assign(theta_grid.size(), 0);
  const auto [xl, xr] = shape::x_range(spec.shape, p.y);
  if (!(xr > xl)) throw std::invalid_argument("build_probes: segment misses the domain");

  auto angle = [&](double x) {
    const Complex v = m({x, p.y});
    return std::atan2(v.imag(), v.real());
  };
  constexpr int kScan = 2000;
  std::vector<double> xs(kScan + 1), th(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    xs[i] = xl + (xr - xl) * i / kScan;
    const Complex v = m({xs[i], p.y});
    th[i] = (i == 0) ? std::numbers::pi : (i == kScan ? 0.0 : std::atan2(v.imag(), v.real()));
  }
  for (int i = 0; i < kScan; ++i)
    if (!(th[i + 1] < th[i])) p.monotone = false;
  if (!p.monotone) return p;

  for (std::size_t k = 0; k < theta_grid.size(); ++k) {
    const double target = theta_grid[k];
    // th decreases along the chord: find the scan cell with th[i] >= target > th[i+1].
    const auto it = std::lower_bound(th.begin(), th.end(), target, [](double a, double b) { return a > b; });
    const auto i1 = static_cast<std::size_t>(it - th.begin());
    if (i1 == 0 || i1 > static_cast<std::size_t>(kScan)) continue;
    double a = xs[i1 - 1], b = xs[i1];
    auto f = [&](double x) {
      if (x <= xl) return std::numbers::pi - target;
      if (x >= xr) return -target;
      return angle(x) - target;
    };
    double fa = f(a), fb = f(b);
    if (fa == 0.0) {
      b = a;
    } else if (fb != 0.0) {
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                                       boost::math::tools::eps_tolerance<double>(50), iters);
      a = r.first;
      b = r.second;
    } else {
      a = b;
    }
    p.x[k] = 0.5 * (a + b);
    p.present[k] = 1;
  }
  return p;
}

/// t values of a uniform grid with `points` entries over [lo, hi].
inline std::vector<double> t_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = points == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

// ---------------------------------------------------------------------------
// Pass-right accumulation

/// Integer sufficient statistics of the per-sample counts R (right) and N
/// (valid probes) for each (interval, theta); the estimate is sum R / sum N.
struct PassRightAccumulator {
  std::size_t intervals = 0;
  std::size_t thetas = 0;
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> r, n, rr, nn, rn, present;

  PassRightAccumulator() = default;
  PassRightAccumulator(std::size_t n_intervals, std::size_t n_thetas)
      : intervals(n_intervals), thetas(n_thetas), r(n_intervals * n_thetas), n(r.size()), rr(r.size()),
        nn(r.size()), rn(r.size()), present(r.size()) {}

  void merge(const PassRightAccumulator& o) {
    samples += o.samples;
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] += o.r[i];
      n[i] += o.n[i];
      rr[i] += o.rr[i];
      nn[i] += o.nn[i];
      rn[i] += o.rn[i];
      present[i] += o.present[i];
    }
  }

  struct Estimate {
    double estimate;
    double std_error;
    double n_effective;
    double discard_rate;
  };

  /// Ratio estimator with its delta-method standard error; n_effective is the
  /// number of independent Bernoulli trials that would give the same error.
  Estimate estimate(std::size_t interval, std::size_t theta) const {
    const std::size_t i = interval * thetas + theta;
    Estimate e{std::nan(""), std::nan(""), 0.0, 0.0};
    if (present[i] > 0) e.discard_rate = 1.0 - static_cast<double>(n[i]) / static_cast<double>(present[i]);
    if (n[i] == 0 || samples < 2) return e;
    const double S = static_cast<double>(samples);
    const double p = static_cast<double>(r[i]) / static_cast<double>(n[i]);
    const double nbar = static_cast<double>(n[i]) / S;
    const double ss = static_cast<double>(rr[i]) - 2.0 * p * static_cast<double>(rn[i]) +
                      p * p * static_cast<double>(nn[i]);
    const double var = std::max(ss, 0.0) / (S - 1.0);
    e.estimate = p;
    e.std_error = std::sqrt(var / S) / nbar;
    e.n_effective = e.std_error > 0.0 ? p * (1.0 - p) / (e.std_error * e.std_error) : static_cast<double>(n[i]);
    return e;
  }
};

/// Per-sample classification of every probe of a set of horizontal lines.
/// Lines are shared between t-intervals; interval_lines maps each interval to
/// its line indices.
class PassRightEvaluator {
 public:
  struct Line {
    double y_lattice;
    std::vector<double> x_lattice;    ///< per theta; NaN if absent
    std::vector<std::uint32_t> order;  ///< present thetas sorted by x
  };

  PassRightEvaluator(const DiscreteDomain& d, const std::vector<SegmentProbe>& probes,
                     std::vector<std::vector<std::size_t>> interval_lines, double discard_radius = 0.1)
      : domain_(&d), interval_lines_(std::move(interval_lines)), radius_(discard_radius) {
    if (probes.empty()) throw std::invalid_argument("pass-right: no probe lines");
    thetas_ = probes.front().theta.size();
    for (const auto& p : probes) {
      if (p.theta.size() != thetas_) throw std::invalid_argument("pass-right: inconsistent theta grids");
      Line line;
      line.y_lattice = d.spec.to_lattice({0.0, p.y}).y;
      line.x_lattice.assign(thetas_, std::nan(""));
      for (std::size_t k = 0; k < thetas_; ++k) {
        if (!p.present[k]) continue;
        const Point q = d.spec.to_lattice({p.x[k], p.y});
        if (!d.contains(hex_at(q))) continue;
        line.x_lattice[k] = q.x;
        line.order.push_back(static_cast<std::uint32_t>(k));
      }
      std::sort(line.order.begin(), line.order.end(),
                [&](std::uint32_t a, std::uint32_t b) { return line.x_lattice[a] < line.x_lattice[b]; });
      lines_.push_back(std::move(line));
    }
    for (std::size_t j = 0; j + 1 < lines_.size(); ++j)
      if (!(lines_[j].y_lattice < lines_[j + 1].y_lattice))
        throw std::invalid_argument("pass-right: probe lines must have strictly increasing heights");
    crossings_.resize(lines_.size());
    near_.resize(lines_.size());
    state_.assign(lines_.size() * thetas_, kAbsent);
  }

  std::size_t lines() const { return lines_.size(); }
  std::size_t thetas() const { return thetas_; }
  const Line& line(std::size_t j) const { return lines_[j]; }

  PassRightAccumulator make_accumulator() const { return {interval_lines_.size(), thetas_}; }

  static constexpr std::uint8_t kLeft = 0, kRight = 1, kDiscarded = 2, kAbsent = 3;

  /// Classify all probes for one curve (domain vertex indices).
  void classify(const std::vector<std::uint32_t>& path) {
    const auto& pts = domain_->vertex_points;
    for (auto& c : crossings_) c.clear();
    for (auto& c : near_) c.clear();
    auto add_crossings = [&](Point a, Point b) {
      const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
      for (std::size_t j = first_line_at_or_above(lo); j < lines_.size() && lines_[j].y_lattice < hi; ++j) {
        const double y = lines_[j].y_lattice;
        crossings_[j].push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    };
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const Point a = pts[path[i]], b = pts[path[i + 1]];
      add_crossings(a, b);
      add_near_intervals(a, b);
    }
    const auto& closure = domain_->black_closure;
    if (path.back() != closure.front()) throw std::invalid_argument("pass-right: curve does not end at w");
    for (std::size_t i = 0; i + 1 < closure.size(); ++i) add_crossings(pts[closure[i]], pts[closure[i + 1]]);

    for (std::size_t j = 0; j < lines_.size(); ++j) {
      auto& xs = crossings_[j];
      std::sort(xs.begin(), xs.end());
      auto& iv = near_[j];
      std::sort(iv.begin(), iv.end());
      std::uint8_t* st = &state_[j * thetas_];
      std::fill(st, st + thetas_, kAbsent);
      std::size_t c = 0, v = 0;
      double cover_hi = -INFINITY;
      for (const std::uint32_t k : lines_[j].order) {
        const double x = lines_[j].x_lattice[k];
        while (c < xs.size() && xs[c] < x) ++c;
        while (v < iv.size() && iv[v].first <= x) cover_hi = std::max(cover_hi, iv[v++].second);
        if (x <= cover_hi) st[k] = kDiscarded;
        else st[k] = (c & 1u) ? kRight : kLeft;
      }
    }
  }

  std::uint8_t state(std::size_t line, std::size_t theta) const { return state_[line * thetas_ + theta]; }

  /// Add the last classification to an accumulator.
  void accumulate(PassRightAccumulator& acc) const {
    ++acc.samples;
    for (std::size_t iv = 0; iv < interval_lines_.size(); ++iv) {
      for (std::size_t k = 0; k < thetas_; ++k) {
        std::uint64_t r = 0, n = 0, pres = 0;
        for (const std::size_t j : interval_lines_[iv]) {
          const std::uint8_t s = state_[j * thetas_ + k];
          r += s == kRight;
          n += s <= kRight;
          pres += s != kAbsent;
        }
        const std::size_t i = iv * thetas_ + k;
        acc.r[i] += r;
        acc.n[i] += n;
        acc.rr[i] += r * r;
        acc.nn[i] += n * n;
        acc.rn[i] += r * n;
        acc.present[i] += pres;
      }
    }
  }

 private:
  std::size_t first_line_at_or_above(double y) const {
    const auto it = std::lower_bound(lines_.begin(), lines_.end(), y,
                                     [](const Line& l, double v) { return l.y_lattice < v; });
    return static_cast<std::size_t>(it - lines_.begin());
  }

  // x-interval of each line within radius_ of segment ab (capsule-line cut).
  void add_near_intervals(Point a, Point b) {
    const double rho = radius_;
    const double lo = std::min(a.y, b.y) - rho, hi = std::max(a.y, b.y) + rho;
    for (std::size_t j = first_line_at_or_above(lo); j < lines_.size() && lines_[j].y_lattice <= hi; ++j) {
      const double y = lines_[j].y_lattice;
      double xmin = INFINITY, xmax = -INFINITY;
      auto take = [&](double x) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
      };
      for (const Point e : {a, b}) {
        const double dy = y - e.y;
        if (std::abs(dy) <= rho) {
          const double h = std::sqrt(rho * rho - dy * dy);
          take(e.x - h);
          take(e.x + h);
        }
      }
      const Point d = b - a;
      const double len = norm(d);
      const Point nrm{-d.y / len * rho, d.x / len * rho};
      for (const double s : {1.0, -1.0}) {
        const Point a2 = a + s * nrm, b2 = b + s * nrm;
        if ((a2.y <= y && y <= b2.y) || (b2.y <= y && y <= a2.y)) {
          if (b2.y != a2.y) take(a2.x + (y - a2.y) * (b2.x - a2.x) / (b2.y - a2.y));
          else {
            take(a2.x);
            take(b2.x);
          }
        }
      }
      if (xmin <= xmax) near_[j].emplace_back(xmin, xmax);
    }
  }

  const DiscreteDomain* domain_;
  std::vector<std::vector<std::size_t>> interval_lines_;
  double radius_;
  std::size_t thetas_ = 0;
  std::vector<Line> lines_;
  std::vector<std::vector<double>> crossings_;
  std::vector<std::vector<std::pair<double, double>>> near_;
  std::vector<std::uint8_t> state_;
};

}  // namespace lep
