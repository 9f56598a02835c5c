#pragma once

// Empirical cdfs on a fixed grid, sup distances, streaming moments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lep {

inline constexpr std::size_t kCdfGridSize = 1001;

inline double cdf_grid_point(std::size_t i) { return static_cast<double>(i) / (kCdfGridSize - 1); }

/// Values in [0, 1] kept as 32-bit fixed point (resolution 2^-32).
inline std::uint32_t to_fixed(double v) {
  if (!(v >= 0.0)) return 0;
  if (v >= 1.0) return UINT32_MAX;
  return static_cast<std::uint32_t>(std::ldexp(v, 32));
}
inline double from_fixed(std::uint32_t u) { return std::ldexp(static_cast<double>(u), -32); }

/// Right-continuous empirical cdf, F(x) = #{samples <= x} / n, tabulated on
/// the grid i / 1000.
class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;

  static EmpiricalCdf from_fixed_samples(std::vector<std::uint32_t> samples) {
    if (samples.empty()) throw std::invalid_argument("cdf: empty sample");
    EmpiricalCdf f;
    std::sort(samples.begin(), samples.end());
    f.sorted_ = std::move(samples);
    f.grid_.resize(kCdfGridSize);
    for (std::size_t i = 0; i < kCdfGridSize; ++i) f.grid_[i] = f.evaluate(cdf_grid_point(i));
    return f;
  }

  std::size_t count() const { return sorted_.size(); }
  const std::vector<double>& grid_values() const { return grid_; }
  double at_grid(std::size_t i) const { return grid_.at(i); }

  /// F(x) by direct lookup in the sorted sample.
  double evaluate(double x) const {
    if (x < 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const auto threshold = static_cast<std::uint32_t>(std::floor(std::ldexp(x, 32)));
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), threshold);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
  }

 private:
  std::vector<std::uint32_t> sorted_;
  std::vector<double> grid_;
};

inline EmpiricalCdf cdf(const std::vector<double>& samples) {
  std::vector<std::uint32_t> fixed;
  fixed.reserve(samples.size());
  for (double v : samples) fixed.push_back(to_fixed(v));
  return EmpiricalCdf::from_fixed_samples(std::move(fixed));
}

inline double sup_distance(const EmpiricalCdf& f, const EmpiricalCdf& g) {
  if (f.grid_values().size() != g.grid_values().size()) throw std::invalid_argument("sup_distance: grid mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < f.grid_values().size(); ++i)
    d = std::max(d, std::abs(f.grid_values()[i] - g.grid_values()[i]));
  return d;
}

/// Streaming count / mean / second central moment (Welford, Chan merge).
class MomentAccumulator {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const MomentAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct MeanWithError {
  double mean;
  double std_error;
};

inline MeanWithError mean_with_error(const MomentAccumulator& acc) {
  if (acc.count() < 2) throw std::invalid_argument("mean_with_error: need at least 2 samples");
  return {acc.mean(), std::sqrt(acc.variance() / static_cast<double>(acc.count()))};
}

}  // namespace lep
