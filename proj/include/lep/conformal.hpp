#pragma once

// Conformal maps phi: D -> H with phi(z) = 0, phi(w) = infinity, |phi(marker)| = 1.
//
// Each shape has a canonical map psi0 onto H; a real Moebius transform then
// places the anchors and lambda fixes the normalization:
//   disc       Cayley transform
//   half_disc  ((1 + c) / (1 - c))^2
//   square     sn(u)^2 with the lemniscatic modulus (K' = K)
//   triangle   inverse Schwarz-Christoffel map (Newton on the SC integral)

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "lep/hexlattice.hpp"

namespace lep {

using Complex = std::complex<double>;

struct PolarForm {
  double r;
  double theta;
};

/// Modulus and argument in (0, pi) of a point of the open upper half plane.
inline PolarForm polar(Complex z) {
  if (!(z.imag() > 0.0)) throw std::domain_error("polar: point not in the open upper half plane");
  return {std::abs(z), std::atan2(z.imag(), z.real())};
}

namespace detail {

inline constexpr Complex kI{0.0, 1.0};

/// Gauss-Legendre nodes and weights on [0, 1].
struct UnitGauss30 {
  std::array<double, 30> x{}, w{};
  UnitGauss30() {
    using G = boost::math::quadrature::gauss<double, 30>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      x[k] = 0.5 * (1.0 + a[i]);
      w[k++] = 0.5 * wt[i];
      if (a[i] != 0.0) {
        x[k] = 0.5 * (1.0 - a[i]);
        w[k++] = 0.5 * wt[i];
      }
    }
  }
  static const UnitGauss30& get() {
    static const UnitGauss30 g;
    return g;
  }
};

// Square: complex Jacobi functions from real ones by the addition theorems.
struct JacobiComplex {
  Complex sn, cn, dn;
};

// dn is rebuilt from sn: Boost 1.74 loses ~1e-3 in dn near the quarter period.
inline JacobiComplex jacobi_complex(Complex u, double k, double kp) {
  double c, d, c1, d1;
  const double s = boost::math::jacobi_elliptic(k, u.real(), &c, &d);
  const double s1 = boost::math::jacobi_elliptic(kp, u.imag(), &c1, &d1);
  d = std::sqrt(1.0 - k * k * s * s);
  d1 = std::sqrt(1.0 - kp * kp * s1 * s1);
  const double delta = c1 * c1 + k * k * s * s * s1 * s1;
  return {Complex(s * d1, c * d * s1 * c1) / delta, Complex(c * c1, -s * d * s1 * d1) / delta,
          Complex(d * c1 * d1, -k * k * s * c * s1) / delta};
}

}  // namespace detail

/// Per-domain conformal map. Immutable after build; map_point is pure.
class MapDescriptor {
 public:
  static MapDescriptor build(const DomainSpec& spec) {
    spec.validate();
    MapDescriptor m;
    m.spec_ = spec;
    if (spec.shape == Shape::square) m.solve_square_modulus();
    if (spec.shape == Shape::triangle) {
      const double b = std::tgamma(1.0 / 3.0) * std::tgamma(1.0 / 3.0) / std::tgamma(2.0 / 3.0);
      m.sc_scale_ = 1.0 / b;
    }
    m.setup_moebius();
    const Complex at_marker = m.moebius(m.canonical(spec.marker));
    if (!(at_marker.imag() > 0.0) || !std::isfinite(std::abs(at_marker)))
      throw std::runtime_error("conformal map: marker does not map into H");
    m.lambda_ = 1.0 / std::abs(at_marker);
    return m;
  }

  const DomainSpec& spec() const { return spec_; }
  double lambda() const { return lambda_; }
  double elliptic_modulus() const { return k_; }

  /// Same map with lambda multiplied by `factor`.
  MapDescriptor scaled(double factor) const {
    MapDescriptor m = *this;
    m.lambda_ *= factor;
    return m;
  }

  /// phi at a unit-domain point (closed domain, tolerance 1e-9).
  Complex operator()(Point p) const {
    if (!shape::contains(spec_.shape, p) && shape::boundary_distance(spec_.shape, p) > 1e-9)
      throw std::domain_error("map_point: point outside the domain");
    return lambda_ * moebius(canonical(p));
  }

  /// Canonical map psi0 onto H before anchor placement.
  Complex canonical(Point p) const {
    const Complex c(p.x, p.y);
    switch (spec_.shape) {
      case Shape::disc: return cayley(c);
      case Shape::half_disc: {
        const Complex s = (1.0 + c) / (1.0 - c);
        return s * s;
      }
      case Shape::square: return square_canonical(c);
      case Shape::triangle: return triangle_prevertex(c);
    }
    return {};
  }

  /// phi^{-1} where a closed form exists (disc, half_disc).
  std::optional<Point> inverse(Complex value) const {
    const Complex psi = inverse_moebius(value / lambda_);
    Complex c;
    switch (spec_.shape) {
      case Shape::disc: c = (1.0 + detail::kI * psi) / (psi + detail::kI); break;
      case Shape::half_disc: {
        const Complex s = std::sqrt(psi);
        c = (s - 1.0) / (s + 1.0);
        break;
      }
      default: return std::nullopt;
    }
    return Point{c.real(), c.imag()};
  }

  /// Forward Schwarz-Christoffel map for the triangle: H -> triangle.
  Complex sc_forward(Complex zeta) const { return sc_cube_root_form(std::pow(zeta, 1.0 / 3.0)); }

  /// The same map written in eta = zeta^(1/3), which keeps the left corner
  /// regular: f = left + 3 A eta * int_0^1 (1 + eta^3 s^3)^(-2/3) ds.
  Complex sc_cube_root_form(Complex eta) const {
    const auto& g = detail::UnitGauss30::get();
    const Complex zeta = eta * eta * eta;
    Complex j = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double s = g.x[i];
      j += g.w[i] * std::pow(1.0 + zeta * (s * s * s), -2.0 / 3.0);
    }
    return kTriangleLeft + 3.0 * sc_scale_ * eta * j;
  }

 private:
  static constexpr Complex kTriangleLeft{-0.5, 0.0};

  static Complex cayley(Complex c) { return -detail::kI * (c + detail::kI) / (c - detail::kI); }

  // Boundary point whose canonical image is infinity.
  Point canonical_infinity() const {
    switch (spec_.shape) {
      case Shape::disc: return {0.0, 1.0};
      case Shape::half_disc: return {1.0, 0.0};
      case Shape::square: return {-0.5, 0.5};
      case Shape::triangle: return {0.5, 0.0};
    }
    return {};
  }

  void setup_moebius() {
    const Point inf = canonical_infinity();
    a_inf_ = distance(spec_.z, inf) < 1e-12;
    b_inf_ = distance(spec_.w, inf) < 1e-12;
    if (!a_inf_) a_ = canonical(spec_.z).real();
    if (!b_inf_) b_ = canonical(spec_.w).real();
    sign_ = (!a_inf_ && !b_inf_ && a_ < b_) ? -1.0 : 1.0;
  }

  Complex moebius(Complex zeta) const {
    if (b_inf_) return zeta - a_;
    if (a_inf_) return -1.0 / (zeta - b_);
    return sign_ * (zeta - a_) / (zeta - b_);
  }

  Complex inverse_moebius(Complex mu) const {
    if (b_inf_) return mu + a_;
    if (a_inf_) return b_ - 1.0 / mu;
    return (sign_ * a_ - mu * b_) / (sign_ - mu);
  }

  void solve_square_modulus() {
    // Bisection on K'(k)/K(k) = 1; the ratio decreases in k.
    double lo = 0.05, hi = 0.999;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double ratio =
          boost::math::ellint_1(std::sqrt(1.0 - mid * mid)) / boost::math::ellint_1(mid);
      (ratio > 1.0 ? lo : hi) = mid;
    }
    k_ = 0.5 * (lo + hi);
    kp_ = std::sqrt(1.0 - k_ * k_);
    K_ = boost::math::ellint_1(k_);
    Kp_ = boost::math::ellint_1(kp_);
  }

  // [-1/2, 1/2]^2 shifted onto [0, K] x [0, K']: sn maps it onto the first
  // quadrant (corners to 0, 1, 1/k, infinity), and squaring opens that to H.
  Complex square_canonical(Complex p) const {
    const Complex u = K_ * (p + Complex(0.5, 0.5));
    const Complex sn = detail::jacobi_complex(u, k_, kp_).sn;
    return sn * sn;
  }

  // Triangle prevertex by kite: rotate into the left-corner kite, solve there,
  // and undo the rotation with the order-3 Moebius map on prevertices.
  Complex triangle_prevertex(Complex c) const {
    constexpr Complex left{-0.5, 0.0}, right{0.5, 0.0}, apex{0.0, kHalfSqrt3};
    const Complex g{0.0, kHalfSqrt3 / 3.0};
    const Complex rot = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const double dl = std::abs(c - left), dr = std::abs(c - right), da = std::abs(c - apex);
    if (dl <= dr && dl <= da) return solve_left_kite(c);
    if (da <= dr) {
      const Complex zp = solve_left_kite(g + rot * (c - g));
      return -1.0 / (1.0 + zp);
    }
    const Complex zp = solve_left_kite(g + std::conj(rot) * (c - g));
    if (std::abs(zp) == 0.0) return {INFINITY, 0.0};
    return -(1.0 + zp) / zp;
  }

  Complex solve_left_kite(Complex c) const {
    const Complex offset = c - kTriangleLeft;
    if (std::abs(offset) == 0.0) return 0.0;
    Complex eta = offset / (3.0 * sc_scale_);
    for (int it = 0; it < 50; ++it) {
      const Complex f = sc_cube_root_form(eta) - c;
      const Complex df = 3.0 * sc_scale_ * std::pow(1.0 + eta * eta * eta, -2.0 / 3.0);
      const Complex step = f / df;
      eta -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(eta))) break;
    }
    if (std::abs(sc_cube_root_form(eta) - c) > 1e-12)
      throw std::runtime_error("triangle map: Newton inversion did not converge");
    return eta * eta * eta;
  }

  DomainSpec spec_;
  double lambda_ = 1.0;
  double k_ = 0.0, kp_ = 0.0, K_ = 0.0, Kp_ = 0.0;
  double sc_scale_ = 0.0;
  double a_ = 0.0, b_ = 0.0, sign_ = 1.0;
  bool a_inf_ = false, b_inf_ = false;
};

inline MapDescriptor build_map(const DomainSpec& spec) { return MapDescriptor::build(spec); }

inline Complex map_point(const MapDescriptor& m, Point unit_point) { return m(unit_point); }

struct MappedCurve {
  std::vector<Complex> points;
};

/// Map a lattice-unit vertex sequence (positions divided by L before mapping).
inline MappedCurve map_curve(const MapDescriptor& m, const std::vector<Point>& lattice_points) {
  MappedCurve out;
  out.points.reserve(lattice_points.size());
  for (const Point& p : lattice_points) out.points.push_back(m(m.spec().to_unit(p)));
  return out;
}

/// phi evaluated at every vertex of a discretized domain, indexed like
/// DiscreteDomain::vertices.
inline std::vector<Complex> vertex_images(const MapDescriptor& m, const DiscreteDomain& d) {
  std::vector<Complex> out;
  out.reserve(d.vertex_points.size());
  for (const Point& p : d.vertex_points) out.push_back(m(d.spec.to_unit(p)));
  return out;
}

}  // namespace lep
