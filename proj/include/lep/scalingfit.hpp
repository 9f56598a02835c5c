#pragma once

// Step-count scaling fit: ln N(L) = ln c + (1/nu) ln L + a L^(-Delta),
// weighted least squares in (ln c, 1/nu, a) at fixed Delta, with Delta chosen
// by minimizing the weighted residual sum of squares.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace lep {

struct LengthObservation {
  double L;
  double mean_steps;
  double std_error;
};

struct LinearFit {
  double ln_c = 0.0;
  double inv_nu = 0.0;
  double a = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double rss = 0.0;
};

struct FitResult {
  double ln_c = 0.0;
  double inv_nu = 0.0;
  double a = 0.0;
  double corr_exp = 0.0;
  double se_ln_c = 0.0;
  double se_inv_nu = 0.0;
  double se_a = 0.0;
  double rss = 0.0;
  bool at_bracket_edge = false;
  std::vector<std::pair<double, double>> coarse_scan;  ///< (Delta, RSS)
};

inline constexpr double kCorrExpLo = 0.05;
inline constexpr double kCorrExpHi = 2.0;

inline void validate_observations(const std::vector<LengthObservation>& obs) {
  if (obs.size() < 4) throw std::invalid_argument("scaling fit needs at least 4 observations (got " +
                                                  std::to_string(obs.size()) + ")");
  std::set<double> ls;
  for (const auto& o : obs) {
    if (!(o.L > 0.0 && o.mean_steps > 0.0 && o.std_error > 0.0))
      throw std::invalid_argument("scaling fit: L, mean and stderr must be positive");
    ls.insert(o.L);
  }
  if (ls.size() < 4) throw std::invalid_argument("scaling fit needs at least 4 distinct L values");
}

inline LinearFit fit_linear_given_exp(const std::vector<LengthObservation>& obs, double corr_exp) {
  validate_observations(obs);
  const auto n = static_cast<Eigen::Index>(obs.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& o = obs[static_cast<std::size_t>(i)];
    X(i, 0) = 1.0;
    X(i, 1) = std::log(o.L);
    X(i, 2) = std::pow(o.L, -corr_exp);
    y(i) = std::log(o.mean_steps);
    w(i) = (o.mean_steps / o.std_error) * (o.mean_steps / o.std_error);
  }
  // QR on the weighted, column-normalized design avoids squaring the condition
  // number the way the normal equations would.
  const Eigen::VectorXd sw = w.cwiseSqrt();
  Eigen::MatrixXd A = sw.asDiagonal() * X;
  const Eigen::Vector3d colnorm = A.colwise().norm().transpose();
  A = A * colnorm.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < 3) throw std::invalid_argument("scaling fit: singular design");
  const Eigen::Vector3d beta = colnorm.cwiseInverse().asDiagonal() * qr.solve(Eigen::VectorXd(sw.asDiagonal() * y));
  const Eigen::Matrix3d R = qr.matrixR().topLeftCorner(3, 3).template triangularView<Eigen::Upper>();
  const Eigen::Matrix3d Rinv = R.inverse();
  const Eigen::Matrix3d P = qr.colsPermutation();
  const Eigen::Matrix3d cov_scaled = P * Rinv * Rinv.transpose() * P.transpose();
  LinearFit f;
  f.ln_c = beta(0);
  f.inv_nu = beta(1);
  f.a = beta(2);
  f.covariance = colnorm.cwiseInverse().asDiagonal() * cov_scaled * colnorm.cwiseInverse().asDiagonal();
  const Eigen::VectorXd r = y - X * beta;
  f.rss = r.dot(w.asDiagonal() * r);
  return f;
}

inline FitResult fit_with_exponent_search(const std::vector<LengthObservation>& obs) {
  validate_observations(obs);
  auto rss_at = [&](double e) {
    try {
      return fit_linear_given_exp(obs, e).rss;
    } catch (const std::invalid_argument&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  FitResult out;
  constexpr int kScan = 40;
  std::size_t best = 0;
  for (int i = 0; i < kScan; ++i) {
    const double e = kCorrExpLo + (kCorrExpHi - kCorrExpLo) * i / (kScan - 1);
    out.coarse_scan.emplace_back(e, rss_at(e));
    if (out.coarse_scan.back().second < out.coarse_scan[best].second) best = out.coarse_scan.size() - 1;
  }
  if (!std::isfinite(out.coarse_scan[best].second)) throw std::invalid_argument("scaling fit: singular at every exponent");

  // Golden-section refinement inside the neighbouring scan cells.
  const double step = (kCorrExpHi - kCorrExpLo) / (kScan - 1);
  double lo = std::max(kCorrExpLo, out.coarse_scan[best].first - step);
  double hi = std::min(kCorrExpHi, out.coarse_scan[best].first + step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = rss_at(x1), f2 = rss_at(x2);
  while (hi - lo > 1e-4) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = rss_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = rss_at(x2);
    }
  }
  double e = 0.5 * (lo + hi);
  // Never return worse than the best scan point.
  if (rss_at(e) > out.coarse_scan[best].second) e = out.coarse_scan[best].first;

  const LinearFit f = fit_linear_given_exp(obs, e);
  out.ln_c = f.ln_c;
  out.inv_nu = f.inv_nu;
  out.a = f.a;
  out.corr_exp = e;
  out.se_ln_c = std::sqrt(f.covariance(0, 0));
  out.se_inv_nu = std::sqrt(f.covariance(1, 1));
  out.se_a = std::sqrt(f.covariance(2, 2));
  out.rss = f.rss;
  out.at_bracket_edge = e - kCorrExpLo < 1e-3 || kCorrExpHi - e < 1e-3;
  return out;
}

}  // namespace lep
