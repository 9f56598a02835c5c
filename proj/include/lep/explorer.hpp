#pragma once

// Percolation exploration interface with lazily revealed hexagon colors.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lep/hexlattice.hpp"
#include "lep/rng.hpp"

namespace lep {

/// Vertex sequence omega(0..n), stored as indices into DiscreteDomain::vertices.
struct InterfacePath {
  std::vector<std::uint32_t> vertices;

  std::size_t steps() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

inline std::vector<VertexId> to_vertex_ids(const DiscreteDomain& d, const std::vector<std::uint32_t>& idx) {
  std::vector<VertexId> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(d.vertices[i]);
  return out;
}

/// Color sources decide a fresh interior hexagon's color; `true` means black.
struct RandomColors {
  RngStream& rng;
  bool draw(std::uint32_t) { return rng.bit(); }
};

struct ConstantColors {
  Color color;
  bool draw(std::uint32_t) const { return color == Color::black; }
};

/// Colors read from a bitmask over interior hexagons (bit i = black for the
/// i-th entry of DiscreteDomain::interior).
struct MaskColors {
  const std::vector<std::int32_t>& interior_rank;
  std::uint64_t mask;
  bool draw(std::uint32_t h) const { return (mask >> interior_rank[h]) & 1u; }
};

inline std::vector<std::int32_t> interior_ranks(const DiscreteDomain& d) {
  std::vector<std::int32_t> rank(d.size(), -1);
  for (std::size_t i = 0; i < d.interior.size(); ++i) rank[d.interior[i]] = static_cast<std::int32_t>(i);
  return rank;
}

/// Per-sample color memory over the domain's hexagons. Cleared in O(1) by
/// bumping an epoch instead of reallocating.
class ColorField {
 public:
  explicit ColorField(const DiscreteDomain& d) : domain_(&d), stamp_(d.size(), 0), color_(d.size(), 0) {}

  void reset() {
    revealed_ = 0;
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0u);
      epoch_ = 1;
    }
  }

  template <class Source>
  Color reveal(std::uint32_t h, Source& src) {
    if (h >= stamp_.size()) throw std::out_of_range("reveal: hexagon outside the domain");
    return reveal_unchecked(h, src);
  }

  template <class Source>
  Color reveal(HexCoord c, Source& src) {
    const auto h = domain_->hex_index(c);
    if (h < 0) throw std::out_of_range("reveal: hexagon outside the domain");
    return reveal_unchecked(static_cast<std::uint32_t>(h), src);
  }

  template <class Source>
  Color reveal_unchecked(std::uint32_t h, Source& src) {
    const std::int8_t fixed = domain_->fixed_color[h];
    if (fixed != kInteriorHex) return static_cast<Color>(fixed);
    if (stamp_[h] != epoch_) {
      stamp_[h] = epoch_;
      color_[h] = src.draw(h) ? 1 : 0;
      ++revealed_;
    }
    return static_cast<Color>(color_[h]);
  }

  bool is_revealed(std::uint32_t h) const {
    return domain_->fixed_color[h] != kInteriorHex || stamp_[h] == epoch_;
  }

  /// Interior hexagons revealed since the last reset.
  std::size_t revealed() const { return revealed_; }

 private:
  const DiscreteDomain* domain_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> color_;
  std::uint32_t epoch_ = 1;
  std::size_t revealed_ = 0;
};

/// Trace the interface from z_delta to w_delta keeping white on the left.
/// The walk stands on a directed edge between a white hexagon `left` and a
/// black one in direction `dir`; the hexagon ahead decides the turn.
template <class Source>
void explore(const DiscreteDomain& d, ColorField& field, Source& src, InterfacePath& out) {
  field.reset();
  out.vertices.clear();
  std::uint32_t left = d.start_left;
  int dir = d.start_dir;
  out.vertices.push_back(d.start_index);
  std::uint32_t head = d.hex_corners[left][dir];
  out.vertices.push_back(head);
  const std::size_t cap = 10 * d.size();
  while (head != d.end_index) {
    const int ahead_dir = dir == 5 ? 0 : dir + 1;
    const std::int32_t ahead = d.hex_neighbors[left][ahead_dir];
    if (ahead < 0) throw std::logic_error("explorer left the domain before reaching w");
    if (field.reveal_unchecked(static_cast<std::uint32_t>(ahead), src) == Color::white) {
      left = static_cast<std::uint32_t>(ahead);
      dir = dir == 0 ? 5 : dir - 1;
    } else {
      dir = ahead_dir;
    }
    head = d.hex_corners[left][dir];
    out.vertices.push_back(head);
    if (out.vertices.size() > cap) throw std::logic_error("explorer exceeded its step cap");
  }
}

inline InterfacePath explore(const DiscreteDomain& d, RngStream& rng) {
  ColorField field(d);
  RandomColors src{rng};
  InterfacePath path;
  explore(d, field, src, path);
  return path;
}

}  // namespace lep
