#pragma once

// Chronological near-loop erasure:
//   t_0 = 0,  t_{j+1} = max { i : t_j < i <= n, omega(i) adjacent to omega(t_j) },
// stopping once omega(t_j) = omega(n).

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "lep/explorer.hpp"
#include "lep/hexlattice.hpp"

namespace lep {

/// eta(0..m) with the retained original indices t_0..t_m.
template <class V>
struct BasicErasedPath {
  std::vector<V> vertices;
  std::vector<std::uint32_t> times;

  std::size_t steps() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

using ErasedPath = BasicErasedPath<std::uint32_t>;

/// Which neighbour occurrence to follow. `latest` is the definition;
/// `earliest` exists only as a mutation hook for the oracle harness.
enum class Selection { latest, earliest };

/// Linear-time eraser over domain vertex indices; keeps its scratch arrays
/// between calls, so one instance per worker.
class NearLoopEraser {
 public:
  explicit NearLoopEraser(const DiscreteDomain& d)
      : domain_(&d), stamp_(d.vertices.size(), 0), occurrence_(d.vertices.size(), 0) {}

  void erase(const std::vector<std::uint32_t>& path, ErasedPath& out, Selection sel = Selection::latest) {
    out.vertices.clear();
    out.times.clear();
    if (path.empty()) return;
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0u);
      epoch_ = 1;
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (stamp_[path[i]] == epoch_) throw std::invalid_argument("path is not self-avoiding");
      stamp_[path[i]] = epoch_;
      occurrence_[path[i]] = static_cast<std::uint32_t>(i);
    }
    const auto n = static_cast<std::uint32_t>(path.size() - 1);
    std::uint32_t t = 0;
    out.vertices.push_back(path[0]);
    out.times.push_back(0);
    while (t != n) {
      std::uint32_t next = sel == Selection::latest ? 0 : UINT32_MAX;
      bool found = false;
      for (const std::int32_t u : domain_->vertex_adjacent[path[t]]) {
        if (u < 0 || stamp_[u] != epoch_) continue;
        const std::uint32_t i = occurrence_[u];
        if (i <= t) continue;
        found = true;
        next = sel == Selection::latest ? std::max(next, i) : std::min(next, i);
      }
      if (!found) throw std::invalid_argument("corrupt path: no later neighbour of a retained vertex");
      t = next;
      out.vertices.push_back(path[t]);
      out.times.push_back(t);
    }
  }

 private:
  const DiscreteDomain* domain_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> occurrence_;
  std::uint32_t epoch_ = 0;
};

inline ErasedPath erase_near_loops(const DiscreteDomain& d, const InterfacePath& path,
                                   Selection sel = Selection::latest) {
  NearLoopEraser eraser(d);
  ErasedPath out;
  eraser.erase(path.vertices, out, sel);
  return out;
}

/// Domain-free version over lattice addresses.
inline BasicErasedPath<VertexId> erase_near_loops(const std::vector<VertexId>& path,
                                                  Selection sel = Selection::latest) {
  BasicErasedPath<VertexId> out;
  if (path.empty()) return out;
  std::map<VertexId, std::uint32_t> occurrence;
  for (std::size_t i = 0; i < path.size(); ++i)
    if (!occurrence.emplace(path[i], static_cast<std::uint32_t>(i)).second)
      throw std::invalid_argument("path is not self-avoiding");
  const auto n = static_cast<std::uint32_t>(path.size() - 1);
  std::uint32_t t = 0;
  out.vertices.push_back(path[0]);
  out.times.push_back(0);
  while (t != n) {
    bool found = false;
    std::uint32_t next = sel == Selection::latest ? 0 : UINT32_MAX;
    for (const VertexId& u : vertex_neighbors(path[t])) {
      const auto it = occurrence.find(u);
      if (it == occurrence.end() || it->second <= t) continue;
      found = true;
      next = sel == Selection::latest ? std::max(next, it->second) : std::min(next, it->second);
    }
    if (!found) throw std::invalid_argument("corrupt path: no later neighbour of a retained vertex");
    t = next;
    out.vertices.push_back(path[t]);
    out.times.push_back(t);
  }
  return out;
}

}  // namespace lep
