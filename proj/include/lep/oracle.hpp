#pragma once

// Brute-force ground truth on tiny domains: every interior coloring is traced,
// giving exact path probabilities as integer counts over 2^k.

#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lep/explorer.hpp"
#include "lep/looperase.hpp"
#include "lep/parallel.hpp"
#include "lep/rng.hpp"

namespace lep {

inline constexpr std::size_t kOracleMaxInterior = 24;

/// Canonical path key: the first character is the slot ('0'..'2') of the first
/// step among the start vertex's neighbours, then one 'L' or 'R' per turn.
inline std::string encode_path(const DiscreteDomain& d, const std::vector<std::uint32_t>& path) {
  std::string key;
  if (path.size() < 2) return key;
  key.reserve(path.size());
  const auto& adj = d.vertex_adjacent[path[0]];
  int slot = -1;
  for (int i = 0; i < 3; ++i)
    if (adj[i] == static_cast<std::int32_t>(path[1])) slot = i;
  if (slot < 0) throw std::invalid_argument("encode_path: first step is not a honeycomb edge");
  key.push_back(static_cast<char>('0' + slot));
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const LatticePos a = vertex_pos(d.vertices[path[i - 1]]);
    const LatticePos b = vertex_pos(d.vertices[path[i]]);
    const LatticePos c = vertex_pos(d.vertices[path[i + 1]]);
    const long long cr = static_cast<long long>(b.xi - a.xi) * (c.yi - b.yi) -
                         static_cast<long long>(b.yi - a.yi) * (c.xi - b.xi);
    if (cr == 0) throw std::invalid_argument("encode_path: straight or reversing step");
    key.push_back(cr > 0 ? 'L' : 'R');
  }
  return key;
}

/// Path counts over a common denominator. For exact distributions the
/// denominator is 2^k; for samples it is the sample count.
struct PathDistribution {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t denominator = 0;

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& [key, c] : counts) s += c;
    return s;
  }
  double probability(const std::string& key) const {
    const auto it = counts.find(key);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(denominator);
  }
  void merge(const PathDistribution& o) {
    for (const auto& [key, c] : o.counts) counts[key] += c;
    denominator += o.denominator;
  }
};

struct ExactDistribution : PathDistribution {
  unsigned k = 0;
};

struct ExactPair {
  ExactDistribution raw;
  ExactDistribution erased;
};

inline void check_oracle_size(const DiscreteDomain& d) {
  if (d.interior_count() > kOracleMaxInterior)
    throw std::invalid_argument("oracle: " + std::to_string(d.interior_count()) +
                                " interior hexagons exceeds the cap of 24");
}

/// Both exact distributions from one pass over the 2^k colorings.
inline ExactPair enumerate_both(const DiscreteDomain& d, unsigned workers = 1, Selection sel = Selection::latest) {
  check_oracle_size(d);
  const auto k = static_cast<unsigned>(d.interior_count());
  const std::uint64_t n = std::uint64_t{1} << k;
  const auto rank = interior_ranks(d);
  struct Ctx {
    ColorField field;
    NearLoopEraser eraser;
    InterfacePath path;
    ErasedPath erased;
  };
  const auto blocks = run_blocks(
      n, 1u << 12, workers, [&] { return Ctx{ColorField(d), NearLoopEraser(d), {}, {}}; },
      [&](Ctx& c, std::size_t begin, std::size_t end) {
        std::pair<PathDistribution, PathDistribution> out;
        for (std::size_t m = begin; m < end; ++m) {
          MaskColors src{rank, m};
          explore(d, c.field, src, c.path);
          c.eraser.erase(c.path.vertices, c.erased, sel);
          ++out.first.counts[encode_path(d, c.path.vertices)];
          ++out.second.counts[encode_path(d, c.erased.vertices)];
        }
        out.first.denominator = out.second.denominator = end - begin;
        return out;
      });
  ExactPair res;
  res.raw.k = res.erased.k = k;
  for (const auto& b : blocks) {
    res.raw.merge(b.first);
    res.erased.merge(b.second);
  }
  return res;
}

inline ExactDistribution enumerate_interfaces(const DiscreteDomain& d, unsigned workers = 1) {
  return enumerate_both(d, workers).raw;
}

inline ExactDistribution enumerate_erased(const DiscreteDomain& d, unsigned workers = 1,
                                          Selection sel = Selection::latest) {
  return enumerate_both(d, workers, sel).erased;
}

struct SampledPair {
  PathDistribution raw;
  PathDistribution erased;
};

/// Monte Carlo path frequencies with lazily revealed colors; sample i draws
/// from RngStream(seed, i).
inline SampledPair sample_paths(const DiscreteDomain& d, std::uint64_t seed, std::uint64_t samples,
                                unsigned workers = 1, Selection sel = Selection::latest) {
  struct Ctx {
    ColorField field;
    NearLoopEraser eraser;
    InterfacePath path;
    ErasedPath erased;
  };
  const auto blocks = run_blocks(
      samples, 1u << 14, workers, [&] { return Ctx{ColorField(d), NearLoopEraser(d), {}, {}}; },
      [&](Ctx& c, std::size_t begin, std::size_t end) {
        SampledPair out;
        for (std::size_t i = begin; i < end; ++i) {
          RngStream rng(seed, i);
          RandomColors src{rng};
          explore(d, c.field, src, c.path);
          c.eraser.erase(c.path.vertices, c.erased, sel);
          ++out.raw.counts[encode_path(d, c.path.vertices)];
          ++out.erased.counts[encode_path(d, c.erased.vertices)];
        }
        out.raw.denominator = out.erased.denominator = end - begin;
        return out;
      });
  SampledPair res;
  for (const auto& b : blocks) {
    res.raw.merge(b.raw);
    res.erased.merge(b.erased);
  }
  return res;
}

inline double total_variation(const PathDistribution& p, const PathDistribution& q) {
  if (p.denominator == 0 || q.denominator == 0) throw std::invalid_argument("total_variation: empty distribution");
  double s = 0.0;
  for (const auto& [key, c] : p.counts) s += std::abs(p.probability(key) - q.probability(key));
  for (const auto& [key, c] : q.counts)
    if (!p.counts.count(key)) s += q.probability(key);
  return 0.5 * s;
}

/// CSV dump: path,count,k.
inline void write_distribution_csv(std::ostream& os, const ExactDistribution& dist) {
  os << "path,count,k\n";
  for (const auto& [key, c] : dist.counts) os << (key.empty() ? "-" : key) << ',' << c << ',' << dist.k << '\n';
}

struct OracleReport {
  std::size_t interior = 0;
  std::size_t raw_support = 0;
  std::size_t erased_support = 0;
  double tv_raw = 0.0;
  double tv_erased = 0.0;
  double threshold = 0.005;
  bool pass() const { return tv_raw < threshold && tv_erased < threshold; }
};

/// Exact enumeration against Monte Carlo. `sel` perturbs the sampled side
/// only, so a corrupted eraser shows up as a distance.
inline OracleReport run_oracle(const DiscreteDomain& d, std::uint64_t seed, std::uint64_t samples, unsigned workers,
                               double threshold = 0.005, Selection sel = Selection::latest) {
  const ExactPair exact = enumerate_both(d, workers);
  const SampledPair mc = sample_paths(d, seed, samples, workers, sel);
  OracleReport r;
  r.interior = d.interior_count();
  r.raw_support = exact.raw.counts.size();
  r.erased_support = exact.erased.counts.size();
  r.tv_raw = total_variation(exact.raw, mc.raw);
  r.tv_erased = total_variation(exact.erased, mc.erased);
  r.threshold = threshold;
  return r;
}

}  // namespace lep
