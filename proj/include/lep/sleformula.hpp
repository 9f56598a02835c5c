#pragma once

// Schramm's pass-right probability for SLE_kappa:
//   P(theta) = 1/2 + Gamma(4/k) / (sqrt(pi) Gamma((8-k)/(2k))) cot(theta) 2F1(1/2, 4/k; 3/2; -cot^2 theta)
// It tends to 1 as theta -> 0, i.e. it is the probability that the curve
// leaves the point on the side of the positive real axis.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace lep {

/// 2F1(1/2, b; 3/2; x) for x <= 0. Near the origin the Pfaff-transformed
/// series (1-x)^(-b) 2F1(1, b; 3/2; x/(x-1)) is used. For larger |x| the
/// integral int_0^1 (1 - x s^2)^(-b) ds becomes, with t = 1/(1 + u^2),
/// an upper incomplete beta: B_c(b - 1/2, 1/2; 1/(1-x)) / (2 sqrt(-x)).
inline double gauss_2f1_halfline(double b, double x) {
  if (!(x <= 0.0)) throw std::domain_error("gauss_2f1_halfline: x must be <= 0");
  if (x == 0.0) return 1.0;
  const double y = x / (x - 1.0);  // in (0, 1)
  if (y > 0.75) {
    if (b == 0.5) return std::asinh(std::sqrt(-x)) / std::sqrt(-x);
    if (!(b > 0.5)) throw std::domain_error("gauss_2f1_halfline: b must exceed 1/2 for large |x|");
    return boost::math::betac(b - 0.5, 0.5, 1.0 / (1.0 - x)) / (2.0 * std::sqrt(-x));
  }
  // Successive term ratios approach y monotonically, so max(ratio, y)
  // bounds the geometric tail.
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 100000; ++n) {
    term *= (b + n) / (1.5 + n) * y;
    sum += term;
    const double ratio = std::max((b + n + 1) / (2.5 + n) * y, y);
    if (std::abs(term) * ratio / (1.0 - ratio) <= 1e-16 * std::abs(sum)) return std::pow(1.0 - x, -b) * sum;
  }
  throw std::runtime_error("gauss_2f1_halfline: series did not converge");
}

inline double schramm_pass_right(double theta, double kappa) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) throw std::domain_error("schramm_pass_right: theta outside (0, pi)");
  if (!(kappa > 0.0 && kappa < 8.0)) throw std::domain_error("schramm_pass_right: kappa outside (0, 8)");
  const double cot = std::cos(theta) / std::sin(theta);
  const double b = 4.0 / kappa;
  const double pref = std::tgamma(b) / (std::sqrt(std::numbers::pi) * std::tgamma((8.0 - kappa) / (2.0 * kappa)));
  return 0.5 + pref * cot * gauss_2f1_halfline(b, -cot * cot);
}

struct SchrammCurve {
  double kappa;
  std::vector<double> theta;
  std::vector<double> probability;
};

inline SchrammCurve schramm_curve(double kappa, const std::vector<double>& thetas) {
  SchrammCurve c{kappa, thetas, {}};
  c.probability.reserve(thetas.size());
  for (double t : thetas) c.probability.push_back(schramm_pass_right(t, kappa));
  return c;
}

}  // namespace lep
