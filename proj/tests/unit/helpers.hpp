#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "lep/lep.hpp"

namespace lep::testutil {

/// Colors of every hexagon for a bitmask coloring of the interior.
inline std::vector<Color> mask_coloring(const DiscreteDomain& d, std::uint64_t mask) {
  std::vector<Color> c(d.size());
  for (std::size_t h = 0; h < d.size(); ++h) c[h] = d.is_boundary(static_cast<std::uint32_t>(h)) ? static_cast<Color>(d.fixed_color[h]) : Color::white;
  for (std::size_t i = 0; i < d.interior.size(); ++i)
    c[d.interior[i]] = ((mask >> i) & 1u) ? Color::black : Color::white;
  return c;
}

/// Smallest-scale domain of a shape with exactly `k` interior hexagons, found
/// by scanning L and vertical offsets (deterministic).
inline std::optional<DomainSpec> find_domain_with_interior(Shape s, std::size_t k) {
  for (double L = 1.0; L < 20.0; L += 0.125)
    for (int j = 0; j < 16; ++j) {
      DomainSpec spec = DomainSpec::with_defaults(s, L);
      spec.offset = {0.0, 0.125 * j};
      try {
        if (build_domain(spec).interior_count() == k) return spec;
      } catch (const std::exception&) {
      }
    }
  return std::nullopt;
}

/// The k = 12 half-disc used for the enumeration oracle.
inline DomainSpec oracle_toy_spec() {
  DomainSpec s = DomainSpec::with_defaults(Shape::half_disc, 9.5);
  s.offset = {kHalfSqrt3 / 2.0, 0.5};
  s.z = shape::boundary_point(Shape::half_disc, 16.0 / 24.0 + 0.001);
  s.w = shape::boundary_point(Shape::half_disc, 22.0 / 24.0 + 0.001);
  return s;
}

}  // namespace lep::testutil
