#pragma once

// Test-only reference implementations, kept independent of the
// flood/canonical machinery they are used to check.

#include <algorithm>
#include <vector>

#include "beyondgen/embedding.hpp"

namespace beyondgen::oracles {

// Decides drawing isomorphism by enumerating all kind-, side- and
// adjacency-preserving vertex bijections and checking that every rotation
// maps to the image rotation as a cyclic sequence (reversed cyclic sequence
// for orientation-reversing maps). A vertex bijection with consistent
// rotations extends to a dart bijection commuting with twin and rotation,
// which is exactly a valid bijection of the planarizations.
inline bool brute_force_isomorphic(const Drawing& g1, const Drawing& g2, IsoMode mode) {
  const int n = static_cast<int>(g1.vertices.size());
  if (n != static_cast<int>(g2.vertices.size()) || g1.darts.size() != g2.darts.size())
    return false;

  // Adjacency (planarizations are simple graphs).
  auto neighbors = [](const Drawing& g, VertexId v) {
    std::vector<VertexId> out;
    for (DartId d : g.darts_at(v)) out.push_back(g.darts[g.darts[d].twin].origin);
    return out;
  };
  std::vector<std::vector<VertexId>> adj1(n), adj2(n);
  for (VertexId v = 0; v < n; ++v) {
    adj1[v] = neighbors(g1, v);
    adj2[v] = neighbors(g2, v);
  }

  auto rotation_compatible = [&](const std::vector<VertexId>& map, VertexId v, bool reflect) {
    // rotation of v mapped entry-wise must equal the rotation of map[v] up to
    // a cyclic shift (in reverse order for reflections).
    std::vector<VertexId> want;
    for (VertexId w : adj1[v]) want.push_back(map[w]);
    std::vector<VertexId> have = adj2[map[v]];
    if (reflect) std::reverse(have.begin(), have.end());
    if (want.size() != have.size()) return false;
    for (std::size_t s = 0; s < have.size(); ++s) {
      bool ok = true;
      for (std::size_t i = 0; i < want.size() && ok; ++i)
        ok = want[i] == have[(s + i) % have.size()];
      if (ok) return true;
    }
    return false;
  };

  for (int reflect = 0; reflect <= (mode == IsoMode::IncludeReflections ? 1 : 0); ++reflect) {
    const bool allow_swap = !g1.graph.is_complete() && g1.graph.a == g1.graph.b;
    for (int swap = 0; swap <= (allow_swap ? 1 : 0); ++swap) {
      std::vector<VertexId> map(n, kInvalidId), used(n, 0);
      auto compatible = [&](VertexId v1, VertexId v2) {
        const Vertex& a = g1.vertices[v1];
        const Vertex& b = g2.vertices[v2];
        if (a.kind != b.kind) return false;
        if (a.kind == VertexKind::Real && b.side != (swap ? 1 - a.side : a.side)) return false;
        return adj1[v1].size() == adj2[v2].size();
      };
      // Backtracking over vertex images; rotations checked once the whole
      // neighborhood of a vertex is mapped.
      auto rec = [&](auto&& self, VertexId v) -> bool {
        if (v == n) {
          for (VertexId u = 0; u < n; ++u)
            if (!rotation_compatible(map, u, reflect != 0)) return false;
          return true;
        }
        for (VertexId w = 0; w < n; ++w) {
          if (used[w] || !compatible(v, w)) continue;
          bool ok = true;  // mapped neighbors must stay neighbors
          for (VertexId x : adj1[v])
            if (map[x] != kInvalidId &&
                std::find(adj2[w].begin(), adj2[w].end(), map[x]) == adj2[w].end()) {
              ok = false;
              break;
            }
          if (!ok) continue;
          map[v] = w;
          used[w] = 1;
          if (self(self, v + 1)) return true;
          map[v] = kInvalidId;
          used[w] = 0;
        }
        return false;
      };
      if (rec(rec, 0)) return true;
    }
  }
  return false;
}

}  // namespace beyondgen::oracles
