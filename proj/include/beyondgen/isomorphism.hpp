#pragma once

#include <cstring>
#include <string>
#include <unordered_set>
#include <vector>

#include "beyondgen/core.hpp"
#include "beyondgen/embedding.hpp"

namespace beyondgen {

struct EdgeTypeCensus {
  int real_real = 0;
  int real_cross = 0;
  int cross_cross = 0;

  bool operator==(const EdgeTypeCensus&) const = default;
  int total() const { return real_real + real_cross + cross_cross; }
};

namespace detail {

inline int segment_type(const Drawing& d, DartId dart) {
  bool a = d.vertices[d.darts[dart].origin].kind == VertexKind::Crossing;
  bool b = d.vertices[d.darts[d.darts[dart].twin].origin].kind == VertexKind::Crossing;
  return static_cast<int>(a) + static_cast<int>(b);  // 0 rr, 1 rc, 2 cc
}

// Type with the smallest positive number of segments; ties prefer rr < rc < cc.
inline int rarest_type(const EdgeTypeCensus& c) {
  int counts[3] = {c.real_real, c.real_cross, c.cross_cross};
  int best = -1;
  for (int t = 0; t < 3; ++t)
    if (counts[t] > 0 && (best < 0 || counts[t] < counts[best])) best = t;
  return best;
}

}  // namespace detail

// Counts planarization segments by endpoint kinds.
inline EdgeTypeCensus edge_type_census(const Drawing& d) {
  EdgeTypeCensus c;
  for (DartId dart = 0; dart < static_cast<DartId>(d.darts.size()); ++dart) {
    if (dart > d.darts[dart].twin) continue;
    switch (detail::segment_type(d, dart)) {
      case 0: ++c.real_real; break;
      case 1: ++c.real_cross; break;
      default: ++c.cross_cross; break;
    }
  }
  return c;
}

// Seed of a valid bijection: dart d1 of g1 is mapped onto dart d2 of g2, i.e.
// segment to segment with origin(d1) -> origin(d2). The opposite endpoint
// order is the base mapping with d2's twin. `reflect` walks g2 against its
// rotation order (orientation-reversing candidate).
struct BaseMapping {
  DartId d1 = kInvalidId;
  DartId d2 = kInvalidId;
  bool reflect = false;
};

// Flood-extends the base mapping: mapped darts force their twins and rotation
// successors, which realizes the boundary walk of P.1/P.2 across all faces.
// `swap_sides` admits bijections exchanging the partite classes.
inline bool try_extend(const BaseMapping& base, const Drawing& g1, const Drawing& g2,
                       bool swap_sides = false) {
  const int nd = static_cast<int>(g1.darts.size());
  if (nd != static_cast<int>(g2.darts.size()) || g1.vertices.size() != g2.vertices.size())
    return false;

  auto vertex_compatible = [&](VertexId v1, VertexId v2) {
    const Vertex& a = g1.vertices[v1];
    const Vertex& b = g2.vertices[v2];
    if (a.kind != b.kind) return false;
    if (a.kind == VertexKind::Real) {
      int want = swap_sides ? 1 - a.side : a.side;
      if (b.side != want) return false;
    }
    return true;
  };

  std::vector<DartId> m12(nd, kInvalidId), m21(nd, kInvalidId);
  std::vector<VertexId> vm12(g1.vertices.size(), kInvalidId), vm21(g2.vertices.size(), kInvalidId);
  std::vector<DartId> queue;
  queue.reserve(nd);
  int mapped = 0;

  auto assign = [&](DartId a, DartId b) {
    if (m12[a] != kInvalidId || m21[b] != kInvalidId) return m12[a] == b && m21[b] == a;
    VertexId va = g1.darts[a].origin, vb = g2.darts[b].origin;
    if (vm12[va] != kInvalidId || vm21[vb] != kInvalidId) {
      if (vm12[va] != vb || vm21[vb] != va) return false;
    } else {
      if (!vertex_compatible(va, vb)) return false;
      vm12[va] = vb;
      vm21[vb] = va;
    }
    m12[a] = b;
    m21[b] = a;
    queue.push_back(a);
    ++mapped;
    return true;
  };

  if (!assign(base.d1, base.d2)) return false;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    DartId a = queue[i];
    DartId b = m12[a];
    if (!assign(g1.darts[a].twin, g2.darts[b].twin)) return false;
    DartId bn = base.reflect ? g2.darts[b].rot_prev : g2.darts[b].rot_next;
    if (!assign(g1.darts[a].rot_next, bn)) return false;
  }
  return mapped == nd;
}

// Isomorphism of planarized drawings per the base-mapping extension
// procedure: censuses must match, then base mappings over the rarest segment
// type are tried in both endpoint orders (and both orientations when the mode
// includes reflections). Bipartite drawings map side to side; when the sides
// have equal size the side-exchanged mappings are tried as well.
inline bool are_isomorphic(const Drawing& g1, const Drawing& g2, IsoMode mode) {
  if (g1.graph != g2.graph) return false;
  if (g1.darts.size() != g2.darts.size() || g1.vertices.size() != g2.vertices.size() ||
      g1.edges.size() != g2.edges.size())
    return false;
  EdgeTypeCensus c1 = edge_type_census(g1);
  if (!(c1 == edge_type_census(g2))) return false;

  const int type = detail::rarest_type(c1);
  DartId d1 = kInvalidId;
  for (DartId d = 0; d < static_cast<DartId>(g1.darts.size()); ++d)
    if (detail::segment_type(g1, d) == type) {
      d1 = d;
      break;
    }
  if (d1 == kInvalidId) return false;

  const bool allow_swap =
      !g1.graph.is_complete() && g1.graph.a == g1.graph.b;
  for (DartId d2 = 0; d2 < static_cast<DartId>(g2.darts.size()); ++d2) {
    if (detail::segment_type(g2, d2) != type) continue;
    for (int reflect = 0; reflect <= (mode == IsoMode::IncludeReflections ? 1 : 0); ++reflect) {
      for (int swap = 0; swap <= (allow_swap ? 1 : 0); ++swap) {
        if (try_extend({d1, d2, reflect != 0}, g1, g2, swap != 0)) return true;
      }
    }
  }
  return false;
}

namespace detail {

// Relabels the map in traversal order from `start` and emits the transition
// table plus vertex codes: equal encodings <=> dart-level isomorphism.
inline void canon_encode(const Drawing& d, DartId start, bool reflect, bool swap_sides,
                         std::vector<std::int32_t>& out) {
  const int nd = static_cast<int>(d.darts.size());
  static thread_local std::vector<std::int32_t> ids;
  static thread_local std::vector<DartId> order;
  ids.assign(nd, -1);
  order.clear();
  order.reserve(nd);
  ids[start] = 0;
  order.push_back(start);
  for (std::size_t i = 0; i < order.size(); ++i) {
    DartId cur = order[i];
    for (DartId nb : {d.darts[cur].twin, reflect ? d.darts[cur].rot_prev : d.darts[cur].rot_next}) {
      if (ids[nb] < 0) {
        ids[nb] = static_cast<std::int32_t>(order.size());
        order.push_back(nb);
      }
    }
  }
  out.clear();
  out.reserve(3 * nd);
  for (DartId cur : order) {
    out.push_back(ids[d.darts[cur].twin]);
    out.push_back(ids[reflect ? d.darts[cur].rot_prev : d.darts[cur].rot_next]);
    const Vertex& v = d.vertices[d.darts[cur].origin];
    if (v.kind == VertexKind::Crossing)
      out.push_back(2);
    else
      out.push_back(swap_sides ? 1 - v.side : v.side);
  }
}

}  // namespace detail

// Canonical form of the isomorphism class: the lexicographically smallest
// traversal encoding over all base darts of the rarest segment type and all
// admissible orientation / side-exchange variants. Two drawings are
// isomorphic (per are_isomorphic) iff their keys are equal.
inline std::string canonical_key(const Drawing& d, IsoMode mode) {
  EdgeTypeCensus c = edge_type_census(d);
  const int type = detail::rarest_type(c);
  const bool allow_swap = !d.graph.is_complete() && d.graph.a == d.graph.b;

  std::vector<std::int32_t> best, cur;
  for (DartId start = 0; start < static_cast<DartId>(d.darts.size()); ++start) {
    if (detail::segment_type(d, start) != type) continue;
    for (int reflect = 0; reflect <= (mode == IsoMode::IncludeReflections ? 1 : 0); ++reflect) {
      for (int swap = 0; swap <= (allow_swap ? 1 : 0); ++swap) {
        detail::canon_encode(d, start, reflect != 0, swap != 0, cur);
        if (best.empty() || cur < best) best.swap(cur);
      }
    }
  }
  std::string key(reinterpret_cast<const char*>(best.data()),
                  best.size() * sizeof(std::int32_t));
  return key;
}

// Keeps the first representative of every isomorphism class, in input order.
inline std::vector<Drawing> dedupe(const std::vector<Drawing>& drawings, IsoMode mode) {
  std::vector<Drawing> out;
  std::unordered_set<std::string> seen;
  for (const Drawing& d : drawings)
    if (seen.insert(canonical_key(d, mode)).second) out.push_back(d);
  return out;
}

// Reference implementation of dedupe: pairwise base-mapping tests against the
// kept representatives. Quadratic; used to cross-check the keyed dedupe.
inline std::vector<Drawing> dedupe_pairwise(const std::vector<Drawing>& drawings, IsoMode mode) {
  std::vector<Drawing> out;
  for (const Drawing& d : drawings) {
    bool dup = false;
    for (const Drawing& r : out)
      if (are_isomorphic(d, r, mode)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(d);
  }
  return out;
}

}  // namespace beyondgen
