#pragma once

// Honeycomb geometry and discretized domains.
//
// Hexagons are pointy-top with edge length 1, so honeycomb vertices sit at
// unit distance from their neighbours and adjacent hexagon centers are sqrt(3)
// apart. Positions are carried internally as integers (x in units of
// sqrt(3)/2, y in units of 1/2) so that left-right mirror images are exact.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lep {

inline constexpr double kSqrt3 = 1.7320508075688772935;
inline constexpr double kHalfSqrt3 = 0.86602540378443864676;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

// ---------------------------------------------------------------------------
// Hexagons and vertices

struct HexCoord {
  int q = 0;
  int r = 0;

  friend auto operator<=>(const HexCoord&, const HexCoord&) = default;
  friend HexCoord operator+(HexCoord a, HexCoord b) { return {a.q + b.q, a.r + b.r}; }
};

/// Neighbour offsets in counter-clockwise order, starting due east.
inline constexpr std::array<HexCoord, 6> kHexDirections = {
    {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

/// Integer lattice position: x = xi * sqrt(3)/2, y = yi / 2.
struct LatticePos {
  int xi = 0;
  int yi = 0;
  friend auto operator<=>(const LatticePos&, const LatticePos&) = default;
};

inline Point to_point(LatticePos p) { return {kHalfSqrt3 * p.xi, 0.5 * p.yi}; }

inline LatticePos hex_center_pos(HexCoord c) { return {2 * c.q + c.r, 3 * c.r}; }

inline Point hex_center(HexCoord c) { return to_point(hex_center_pos(c)); }

// Corner k of a hexagon sits at angle 30 + 60k degrees from its center.
inline constexpr std::array<LatticePos, 6> kCornerOffsets = {
    {{1, 1}, {0, 2}, {-1, 1}, {-1, -1}, {0, -2}, {1, -1}}};

/// Hexagon containing a planar point (cube rounding of fractional axial coordinates).
inline HexCoord hex_at(Point p) {
  const double rf = p.y / 1.5;
  const double qf = p.x / kSqrt3 - rf / 2.0;
  const double sf = -qf - rf;
  double q = std::round(qf), r = std::round(rf), s = std::round(sf);
  const double dq = std::abs(q - qf), dr = std::abs(r - rf), ds = std::abs(s - sf);
  if (dq > dr && dq > ds) {
    q = -r - s;
  } else if (dr > ds) {
    r = -q - s;
  }
  return {static_cast<int>(q), static_cast<int>(r)};
}

/// A honeycomb vertex, canonically named as the top (corner = 0) or bottom
/// (corner = 1) vertex of exactly one hexagon.
struct VertexId {
  HexCoord hex;
  int corner = 0;

  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

inline LatticePos vertex_pos(VertexId v) {
  const LatticePos c = hex_center_pos(v.hex);
  return {c.xi, c.yi + (v.corner == 0 ? 2 : -2)};
}

inline Point vertex_position(VertexId v) { return to_point(vertex_pos(v)); }

/// Canonical name of corner k (0..5) of hexagon h.
inline VertexId hex_corner(HexCoord h, int k) {
  switch (((k % 6) + 6) % 6) {
    case 0: return {{h.q, h.r + 1}, 1};
    case 1: return {{h.q, h.r}, 0};
    case 2: return {{h.q - 1, h.r + 1}, 1};
    case 3: return {{h.q, h.r - 1}, 0};
    case 4: return {{h.q, h.r}, 1};
    default: return {{h.q + 1, h.r - 1}, 0};
  }
}

/// The three honeycomb neighbours of v, each at distance 1.
inline std::array<VertexId, 3> vertex_neighbors(VertexId v) {
  const auto [q, r] = v.hex;
  if (v.corner == 0) return {{{{q, r + 1}, 1}, {{q - 1, r + 1}, 1}, {{q - 1, r + 2}, 1}}};
  return {{{{q, r - 1}, 0}, {{q + 1, r - 1}, 0}, {{q + 1, r - 2}, 0}}};
}

// ---------------------------------------------------------------------------
// Continuum shapes (unit scale)

enum class Shape { triangle, square, disc, half_disc };

inline constexpr std::array<Shape, 4> kAllShapes = {Shape::triangle, Shape::square, Shape::disc,
                                                    Shape::half_disc};

inline std::string_view shape_name(Shape s) {
  switch (s) {
    case Shape::triangle: return "triangle";
    case Shape::square: return "square";
    case Shape::disc: return "disc";
    case Shape::half_disc: return "half_disc";
  }
  return "?";
}

inline Shape parse_shape(std::string_view name) {
  for (Shape s : kAllShapes)
    if (shape_name(s) == name) return s;
  throw std::invalid_argument("unknown shape '" + std::string(name) + "'");
}

// Geometry of the unit domains:
//   triangle   equilateral, side 1, base on y = 0 centered at x = 0, apex up
//   square     [-1/2, 1/2]^2
//   disc       unit disc
//   half_disc  upper half of the unit disc
// Default anchors run up the vertical symmetry axis: z at the bottom, w at the top.
namespace shape {

inline bool contains(Shape s, Point p) {
  switch (s) {
    case Shape::triangle: return p.y > 0.0 && std::abs(p.x) < (kHalfSqrt3 - p.y) / kSqrt3;
    case Shape::square: return std::abs(p.x) < 0.5 && std::abs(p.y) < 0.5;
    case Shape::disc: return p.x * p.x + p.y * p.y < 1.0;
    case Shape::half_disc: return p.y > 0.0 && p.x * p.x + p.y * p.y < 1.0;
  }
  return false;
}

inline double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double t = len2 > 0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

inline std::vector<Point> polygon(Shape s) {
  switch (s) {
    case Shape::triangle: return {{-0.5, 0.0}, {0.5, 0.0}, {0.0, kHalfSqrt3}};
    case Shape::square: return {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
    default: return {};
  }
}

/// Unsigned distance from p to the boundary of the unit domain.
inline double boundary_distance(Shape s, Point p) {
  switch (s) {
    case Shape::triangle:
    case Shape::square: {
      const auto poly = polygon(s);
      double d = INFINITY;
      for (std::size_t i = 0; i < poly.size(); ++i)
        d = std::min(d, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
      return d;
    }
    case Shape::disc: return std::abs(1.0 - norm(p));
    case Shape::half_disc: {
      const double seg = segment_distance(p, {-1.0, 0.0}, {1.0, 0.0});
      const double arc = p.y >= 0.0 ? std::abs(1.0 - norm(p))
                                    : std::min(distance(p, {-1.0, 0.0}), distance(p, {1.0, 0.0}));
      return std::min(seg, arc);
    }
  }
  return INFINITY;
}

inline Point default_z(Shape s) {
  switch (s) {
    case Shape::square: return {0.0, -0.5};
    case Shape::disc: return {0.0, -1.0};
    default: return {0.0, 0.0};
  }
}

inline Point default_w(Shape s) {
  switch (s) {
    case Shape::triangle: return {0.0, kHalfSqrt3};
    case Shape::square: return {0.0, 0.5};
    default: return {0.0, 1.0};
  }
}

inline Point centroid(Shape s) {
  switch (s) {
    case Shape::triangle: return {0.0, kHalfSqrt3 / 3.0};
    case Shape::half_disc: return {0.0, 4.0 / (3.0 * std::numbers::pi)};
    default: return {0.0, 0.0};
  }
}

/// Bounding box {xmin, ymin, xmax, ymax}.
inline std::array<double, 4> bbox(Shape s) {
  switch (s) {
    case Shape::triangle: return {-0.5, 0.0, 0.5, kHalfSqrt3};
    case Shape::square: return {-0.5, -0.5, 0.5, 0.5};
    case Shape::disc: return {-1.0, -1.0, 1.0, 1.0};
    case Shape::half_disc: return {-1.0, 0.0, 1.0, 1.0};
  }
  return {};
}

/// Open x-interval of the unit domain at height y (empty pair if y misses it).
inline std::pair<double, double> x_range(Shape s, double y) {
  switch (s) {
    case Shape::triangle: {
      const double h = (kHalfSqrt3 - y) / kSqrt3;
      if (y <= 0.0 || h <= 0.0) return {0.0, 0.0};
      return {-h, h};
    }
    case Shape::square:
      if (std::abs(y) >= 0.5) return {0.0, 0.0};
      return {-0.5, 0.5};
    case Shape::disc:
    case Shape::half_disc: {
      if (std::abs(y) >= 1.0 || (s == Shape::half_disc && y <= 0.0)) return {0.0, 0.0};
      const double h = std::sqrt(1.0 - y * y);
      return {-h, h};
    }
  }
  return {0.0, 0.0};
}

/// Point on the boundary, parameterized by normalized arc length u in [0, 1),
/// counter-clockwise starting from the bottom of the symmetry axis.
inline Point boundary_point(Shape s, double u) {
  u -= std::floor(u);
  switch (s) {
    case Shape::disc: {
      const double a = -std::numbers::pi / 2 + 2 * std::numbers::pi * u;
      return {std::cos(a), std::sin(a)};
    }
    case Shape::half_disc: {
      const double total = 2.0 + std::numbers::pi;
      double l = u * total;
      if (l < 1.0) return {l, 0.0};
      l -= 1.0;
      if (l < std::numbers::pi) return {std::cos(l), std::sin(l)};
      l -= std::numbers::pi;
      return {-1.0 + l, 0.0};
    }
    default: {
      // Polygons: start at the bottom midpoint, walk counter-clockwise.
      auto poly = polygon(s);
      const Point start = default_z(s);
      std::vector<Point> ring{start};
      for (std::size_t i = 1; i < poly.size(); ++i) ring.push_back(poly[i]);
      ring.push_back(poly[0]);
      ring.push_back(start);
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < ring.size(); ++i) total += distance(ring[i], ring[i + 1]);
      double l = u * total;
      for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const double len = distance(ring[i], ring[i + 1]);
        if (l <= len) return ring[i] + (l / len) * (ring[i + 1] - ring[i]);
        l -= len;
      }
      return start;
    }
  }
}

inline double unit_area(Shape s) {
  switch (s) {
    case Shape::triangle: return kSqrt3 / 4.0;
    case Shape::square: return 1.0;
    case Shape::disc: return std::numbers::pi;
    case Shape::half_disc: return std::numbers::pi / 2.0;
  }
  return 0.0;
}

}  // namespace shape

// ---------------------------------------------------------------------------
// Domain specification and discretization

struct DomainSpec {
  Shape shape = Shape::square;
  double L = 10.0;  ///< scale factor: side (triangle, square) or radius (disc, half_disc)
  Point z;          ///< start anchor on the unit boundary
  Point w;          ///< terminal anchor on the unit boundary
  Point marker;     ///< interior point pinned to |phi| = 1
  Point offset;     ///< lattice-unit translation of the scaled domain

  static DomainSpec with_defaults(Shape s, double L) {
    return {s, L, shape::default_z(s), shape::default_w(s), shape::centroid(s), {}};
  }

  /// Unit-domain coordinates of a lattice-unit point.
  Point to_unit(Point lattice) const {
    return {(lattice.x - offset.x) / L, (lattice.y - offset.y) / L};
  }
  Point to_lattice(Point unit) const { return {L * unit.x + offset.x, L * unit.y + offset.y}; }

  void validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("domain scale L must be positive");
    constexpr double tol = 1e-9;
    if (shape::boundary_distance(shape, z) > tol || shape::boundary_distance(shape, w) > tol)
      throw std::invalid_argument("anchors z and w must lie on the domain boundary");
    if (distance(z, w) < tol) throw std::invalid_argument("anchors z and w coincide");
    if (!shape::contains(shape, marker) || shape::boundary_distance(shape, marker) < tol)
      throw std::invalid_argument("marker must lie in the domain interior");
  }

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

enum class Color : std::uint8_t { white = 0, black = 1 };

inline constexpr std::int8_t kInteriorHex = -1;

/// The hexagon set D_delta with boundary arcs and anchor vertices. Immutable
/// after build_domain; index-based tables back the hot sampling loops.
struct DiscreteDomain {
  DomainSpec spec;

  std::vector<HexCoord> hexes;                     ///< sorted lexicographically
  std::vector<std::array<std::int32_t, 6>> hex_neighbors;  ///< -1 outside
  std::vector<std::array<std::uint32_t, 6>> hex_corners;   ///< vertex indices
  std::vector<std::int8_t> fixed_color;            ///< arc color or kInteriorHex
  std::vector<std::uint32_t> interior;             ///< indices of non-boundary hexes

  std::vector<VertexId> vertices;
  std::vector<Point> vertex_points;                ///< lattice-unit positions
  std::vector<std::array<std::int32_t, 3>> vertex_adjacent;  ///< -1 if not a domain vertex

  std::vector<HexCoord> boundary_white;  ///< clockwise from z_delta to w_delta
  std::vector<HexCoord> boundary_black;  ///< clockwise from w_delta to z_delta
  VertexId start_vertex;
  VertexId end_vertex;
  std::uint32_t start_index = 0;
  std::uint32_t end_index = 0;
  std::uint32_t start_left = 0;  ///< white hexagon left of the first edge
  int start_dir = 0;             ///< direction from start_left to the black hexagon on the right

  /// Outer boundary polyline from end_vertex clockwise to start_vertex (black side).
  std::vector<std::uint32_t> black_closure;
  /// Full outer boundary cycle, clockwise, as vertex indices.
  std::vector<std::uint32_t> outer_boundary;

  // Dense lookup grids.
  int q0 = 0, r0 = 0, qn = 0, rn = 0;
  std::vector<std::int32_t> hex_grid;
  int vq0 = 0, vr0 = 0, vqn = 0, vrn = 0;
  std::vector<std::int32_t> vertex_grid;

  std::size_t size() const { return hexes.size(); }
  std::size_t interior_count() const { return interior.size(); }

  std::int32_t hex_index(HexCoord c) const {
    const int a = c.q - q0, b = c.r - r0;
    if (a < 0 || b < 0 || a >= qn || b >= rn) return -1;
    return hex_grid[static_cast<std::size_t>(a) * rn + b];
  }
  bool contains(HexCoord c) const { return hex_index(c) >= 0; }

  std::int32_t vertex_index(VertexId v) const {
    const int a = v.hex.q - vq0, b = v.hex.r - vr0;
    if (a < 0 || b < 0 || a >= vqn || b >= vrn || v.corner < 0 || v.corner > 1) return -1;
    return vertex_grid[(static_cast<std::size_t>(a) * vrn + b) * 2 + v.corner];
  }

  bool is_boundary(std::uint32_t h) const { return fixed_color[h] != kInteriorHex; }

  /// True when the domain is exactly mirror symmetric about x = 0 with both
  /// anchor vertices on the axis.
  bool mirror_symmetric() const {
    return spec.offset.x == 0.0 && vertex_pos(start_vertex).xi == 0 &&
           vertex_pos(end_vertex).xi == 0 && spec.z.x == 0.0 && spec.w.x == 0.0;
  }
};

namespace detail {

inline bool hex_fits(Shape s, const DomainSpec& spec, HexCoord h) {
  const LatticePos c = hex_center_pos(h);
  for (const LatticePos& o : kCornerOffsets) {
    const Point p = to_point({c.xi + o.xi, c.yi + o.yi});
    if (!shape::contains(s, spec.to_unit(p))) return false;
  }
  return true;
}

inline std::optional<HexCoord> assemble(DiscreteDomain& d, int qmin, int qmax, int rmin, int rmax);

}  // namespace detail

/// Discretize a domain: a hexagon belongs to D_delta iff all six of its
/// corners lie strictly inside the scaled continuum domain. The boundary ring
/// is split at the outer-boundary junction vertices nearest to L*z and L*w;
/// the clockwise arc from z to w is white, the return arc black.
inline DiscreteDomain build_domain(const DomainSpec& spec) {
  spec.validate();
  DiscreteDomain d;
  d.spec = spec;

  const auto box = shape::bbox(spec.shape);
  const Point lo = spec.to_lattice({box[0], box[1]});
  const Point hi = spec.to_lattice({box[2], box[3]});
  const int rmin = static_cast<int>(std::floor(lo.y / 1.5)) - 2;
  const int rmax = static_cast<int>(std::ceil(hi.y / 1.5)) + 2;
  const int qmin = static_cast<int>(std::floor(lo.x / kSqrt3 - rmax / 2.0)) - 2;
  const int qmax = static_cast<int>(std::ceil(hi.x / kSqrt3 - rmin / 2.0)) + 2;

  std::vector<HexCoord> members;
  for (int q = qmin; q <= qmax; ++q)
    for (int r = rmin; r <= rmax; ++r)
      if (detail::hex_fits(spec.shape, spec, {q, r})) members.push_back({q, r});

  // A lone hexagon at an anchor tip has its two junctions tied as nearest;
  // trimming it puts the anchor junction on the tip's axis.
  for (int pass = 0; pass < 8; ++pass) {
    if (members.empty()) throw std::invalid_argument("domain contains no hexagon at this L");
    d = DiscreteDomain{};
    d.spec = spec;
    d.hexes = members;
    const auto trim = detail::assemble(d, qmin, qmax, rmin, rmax);
    if (!trim) return d;
    members.erase(std::find(members.begin(), members.end(), *trim));
  }
  throw std::invalid_argument("could not resolve anchor junctions");
}

namespace detail {

inline std::optional<HexCoord> assemble(DiscreteDomain& d, int qmin, int qmax, int rmin, int rmax) {
  const DomainSpec& spec = d.spec;
  d.q0 = qmin;
  d.r0 = rmin;
  d.qn = qmax - qmin + 1;
  d.rn = rmax - rmin + 1;
  d.hex_grid.assign(static_cast<std::size_t>(d.qn) * d.rn, -1);
  for (std::size_t i = 0; i < d.hexes.size(); ++i)
    d.hex_grid[static_cast<std::size_t>(d.hexes[i].q - qmin) * d.rn + (d.hexes[i].r - rmin)] =
        static_cast<std::int32_t>(i);

  const std::size_t n = d.hexes.size();
  d.hex_neighbors.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 6; ++k) d.hex_neighbors[i][k] = d.hex_index(d.hexes[i] + kHexDirections[k]);

  // Connectivity (flood fill).
  {
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const auto h = stack.back();
      stack.pop_back();
      for (auto nb : d.hex_neighbors[h])
        if (nb >= 0 && !seen[nb]) {
          seen[nb] = 1;
          ++count;
          stack.push_back(static_cast<std::uint32_t>(nb));
        }
    }
    if (count != n) throw std::invalid_argument("discretized domain is not connected");
  }

  // Vertex tables over the corner set of all domain hexagons.
  d.vq0 = qmin - 2;
  d.vr0 = rmin - 2;
  d.vqn = d.qn + 4;
  d.vrn = d.rn + 4;
  d.vertex_grid.assign(static_cast<std::size_t>(d.vqn) * d.vrn * 2, -1);
  auto vertex_slot = [&](VertexId v) -> std::int32_t& {
    return d.vertex_grid[(static_cast<std::size_t>(v.hex.q - d.vq0) * d.vrn + (v.hex.r - d.vr0)) *
                             2 +
                         v.corner];
  };
  d.hex_corners.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 6; ++k) {
      const VertexId v = hex_corner(d.hexes[i], k);
      auto& slot = vertex_slot(v);
      if (slot < 0) {
        slot = static_cast<std::int32_t>(d.vertices.size());
        d.vertices.push_back(v);
        d.vertex_points.push_back(vertex_position(v));
      }
      d.hex_corners[i][k] = static_cast<std::uint32_t>(slot);
    }
  d.vertex_adjacent.resize(d.vertices.size());
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    const auto nb = vertex_neighbors(d.vertices[i]);
    for (int k = 0; k < 3; ++k) d.vertex_adjacent[i][k] = d.vertex_index(nb[k]);
  }

  // Trace the outer boundary clockwise. A boundary edge is stored as
  // (outside hex O on the left, direction to the inside hex on the right);
  // the successor rule is the exploration rule with "outside" playing white.
  std::size_t boundary_edges = 0;
  std::int32_t first_in = -1;
  int first_dir = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 6; ++k)
      if (d.hex_neighbors[i][k] < 0) {
        ++boundary_edges;
        if (first_in < 0) {
          first_in = static_cast<std::int32_t>(i);
          first_dir = k;
        }
      }

  struct Record {
    std::uint32_t inside;
    std::uint32_t head;
  };
  std::vector<Record> records;
  {
    HexCoord out = d.hexes[first_in] + kHexDirections[first_dir];
    int dir = (first_dir + 3) % 6;
    const HexCoord out0 = out;
    const int dir0 = dir;
    do {
      const HexCoord in = out + kHexDirections[dir];
      const auto head = vertex_slot(hex_corner(out, dir));
      records.push_back({static_cast<std::uint32_t>(d.hex_index(in)), static_cast<std::uint32_t>(head)});
      const HexCoord ahead = out + kHexDirections[(dir + 1) % 6];
      if (!d.contains(ahead)) {
        out = ahead;
        dir = (dir + 5) % 6;
      } else {
        dir = (dir + 1) % 6;
      }
      if (records.size() > boundary_edges) break;
    } while (!(out == out0 && dir == dir0));
  }
  if (records.size() != boundary_edges)
    throw std::invalid_argument("discretized domain is not simply connected");

  {
    double area2 = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const Point a = d.vertex_points[records[i].head];
      const Point b = d.vertex_points[records[(i + 1) % records.size()].head];
      area2 += cross(a, b);
    }
    if (!(area2 < 0.0)) throw std::logic_error("outer boundary trace is not clockwise");
  }

  // Rotate so the trace starts right after an inside-hex change, then collapse
  // into runs of equal inside hexagons.
  std::size_t shift = 0;
  while (records[shift].inside == records[(shift + records.size() - 1) % records.size()].inside) {
    if (++shift == records.size()) throw std::invalid_argument("domain has a single boundary hexagon");
  }
  std::rotate(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(shift), records.end());
  for (const auto& rec : records) d.outer_boundary.push_back(rec.head);

  struct Run {
    std::uint32_t hex;
    std::size_t last;  // index of last record in the run
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (runs.empty() || runs.back().hex != records[i].inside) runs.push_back({records[i].inside, i});
    else runs.back().last = i;
  }
  {
    std::vector<std::uint32_t> seen;
    for (const auto& run : runs) seen.push_back(run.hex);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw std::invalid_argument("discretized domain boundary is pinched (one-hexagon neck)");
  }
  const std::size_t m = runs.size();

  // Junction j sits between run j-1 and run j: head of the last record of run j-1.
  auto junction = [&](std::size_t j) { return records[runs[(j + m - 1) % m].last].head; };
  std::optional<HexCoord> trim;
  auto nearest_junction = [&](Point anchor) {
    const Point target = spec.to_lattice(anchor);
    std::size_t best = 0;
    double best_d = INFINITY;
    std::vector<std::size_t> tied;
    for (std::size_t j = 0; j < m; ++j) {
      const auto v = junction(j);
      const double dist = distance(d.vertex_points[v], target);
      if (dist < best_d - 1e-9) tied.clear();
      if (dist < best_d + 1e-9) tied.push_back(j);
      if (dist < best_d - 1e-12 ||
          (std::abs(dist - best_d) <= 1e-12 && d.vertices[v] < d.vertices[junction(best)])) {
        best = j;
        best_d = dist;
      }
    }
    if (tied.size() == 2) {
      const std::size_t a = tied[0], b = tied[1];
      std::optional<std::uint32_t> tip;
      if (b == a + 1) tip = runs[a].hex;
      else if (a == 0 && b == m - 1) tip = runs[b].hex;
      if (tip) {
        int inside = 0;
        for (auto nb : d.hex_neighbors[*tip]) inside += nb >= 0;
        if (inside <= 2) trim = d.hexes[*tip];
      }
    }
    return best;
  };
  const std::size_t iz = nearest_junction(spec.z);
  const std::size_t iw = nearest_junction(spec.w);
  if (trim) return trim;
  if (iz == iw) throw std::invalid_argument("anchors z and w discretize to the same boundary point");

  d.fixed_color.assign(n, kInteriorHex);
  for (std::size_t j = iz; j != iw; j = (j + 1) % m) {
    d.boundary_white.push_back(d.hexes[runs[j].hex]);
    d.fixed_color[runs[j].hex] = static_cast<std::int8_t>(Color::white);
  }
  for (std::size_t j = iw; j != iz; j = (j + 1) % m) {
    d.boundary_black.push_back(d.hexes[runs[j].hex]);
    d.fixed_color[runs[j].hex] = static_cast<std::int8_t>(Color::black);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (d.fixed_color[i] == kInteriorHex) {
      bool on_boundary = false;
      for (auto nb : d.hex_neighbors[i]) on_boundary |= nb < 0;
      if (on_boundary) throw std::logic_error("boundary hexagon missing from the outer trace");
      d.interior.push_back(static_cast<std::uint32_t>(i));
    }

  d.start_index = junction(iz);
  d.end_index = junction(iw);
  d.start_vertex = d.vertices[d.start_index];
  d.end_vertex = d.vertices[d.end_index];

  // First edge: white z_delta on the left, the preceding black hexagon on the right.
  d.start_left = runs[iz].hex;
  const std::uint32_t right = runs[(iz + m - 1) % m].hex;
  d.start_dir = -1;
  for (int k = 0; k < 6; ++k)
    if (d.hex_neighbors[d.start_left][k] == static_cast<std::int32_t>(right)) d.start_dir = k;
  if (d.start_dir < 0 || d.hex_corners[d.start_left][(d.start_dir + 5) % 6] != d.start_index)
    throw std::logic_error("start edge orientation inconsistent with boundary trace");

  // Black closure: from the end junction through the black runs to the start junction.
  d.black_closure.push_back(d.end_index);
  for (std::size_t j = iw; j != iz; j = (j + 1) % m) {
    const std::size_t first = runs[(j + m - 1) % m].last + 1;
    for (std::size_t i = first; i <= runs[j].last; ++i) d.black_closure.push_back(records[i % records.size()].head);
  }
  return std::nullopt;
}

}  // namespace detail

/// DomainSpec with the default anchors, translated vertically (in steps of
/// 1/8 lattice unit) until both anchor junctions fall on the symmetry axis,
/// which makes the discretization exactly mirror symmetric.
inline DomainSpec standard_spec(Shape s, double L) {
  DomainSpec spec = DomainSpec::with_defaults(s, L);
  for (int k = 0; k < 24; ++k) {
    spec.offset = {0.0, 0.125 * k};
    try {
      if (build_domain(spec).mirror_symmetric()) return spec;
    } catch (const std::invalid_argument&) {
    }
  }
  spec.offset = {};
  return spec;
}

}  // namespace lep
