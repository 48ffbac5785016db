#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "beyondgen/core.hpp"
#include "beyondgen/embedding.hpp"

namespace beyondgen {

enum class ClassKind : std::uint8_t {
  KPlanar,          // every edge crossed at most k times
  Quasiplanar,      // no three pairwise crossing edges
  FanPlanar,        // relaxed: the crossers of every edge are pairwise adjacent
  FanCrossingFree,  // the crossers of every edge are pairwise non-adjacent
  GapPlanar,        // crossings assignable to incident edges, at most one each
  Unrestricted,     // simplicity only; used by oracles and filter tests
};

struct ClassSpec {
  ClassKind kind = ClassKind::KPlanar;
  int k = 1;  // parameter of KPlanar
  // Drawing isomorphism is by sphere homeomorphism, which admits reflections;
  // orientation-preserving-only comparison is available for reporting.
  IsoMode iso_mode = IsoMode::IncludeReflections;

  bool operator==(const ClassSpec& o) const { return kind == o.kind && k == o.k; }

  std::string name() const {
    switch (kind) {
      case ClassKind::KPlanar:
        return std::to_string(k) + "planar";
      case ClassKind::Quasiplanar:
        return "quasiplanar";
      case ClassKind::FanPlanar:
        return "fanplanar";
      case ClassKind::FanCrossingFree:
        return "fancrossingfree";
      case ClassKind::GapPlanar:
        return "gapplanar";
      case ClassKind::Unrestricted:
        return "simple";
    }
    return "?";
  }

  // Accepts 1planar, 2planar, ... plus quasiplanar, fanplanar,
  // fancrossingfree and gapplanar.
  static ClassSpec parse(const std::string& s) {
    ClassSpec spec;
    if (s == "quasiplanar")
      spec.kind = ClassKind::Quasiplanar;
    else if (s == "fanplanar")
      spec.kind = ClassKind::FanPlanar;
    else if (s == "fancrossingfree")
      spec.kind = ClassKind::FanCrossingFree;
    else if (s == "gapplanar")
      spec.kind = ClassKind::GapPlanar;
    else if (s == "simple")
      spec.kind = ClassKind::Unrestricted;
    else if (s.size() > 6 && s.substr(s.size() - 6) == "planar") {
      try {
        std::size_t used = 0;
        spec.k = std::stoi(s, &used);
        if (used != s.size() - 6) throw ArgumentError("unknown class: " + s);
      } catch (const std::invalid_argument&) {
        throw ArgumentError("unknown class: " + s);
      }
      if (spec.k < 1) throw ArgumentError("k-planar needs k >= 1");
      spec.kind = ClassKind::KPlanar;
    } else {
      throw ArgumentError("unknown class: " + s);
    }
    return spec;
  }
};

// Nodes are original edges, links are crossings.
struct CrossingGraph {
  int nodes = 0;
  std::vector<std::pair<EdgeId, EdgeId>> links;

  static CrossingGraph from(const Drawing& d) {
    CrossingGraph g;
    g.nodes = static_cast<int>(d.edges.size());
    for (const auto& v : d.vertices)
      if (v.kind == VertexKind::Crossing) g.links.emplace_back(v.cross_a, v.cross_b);
    return g;
  }
};

namespace detail {

// Kuhn augmenting-path matching: can every link be assigned to one of its two
// endpoint nodes, no node taking more than one link?
inline bool gap_feasible_matching(const CrossingGraph& g) {
  std::vector<int> owner(g.nodes, -1);  // node -> link
  std::vector<char> visited;
  // Augment from `link`; nodes reachable by alternating paths get re-owned.
  auto augment = [&](auto&& self, int link) -> bool {
    for (EdgeId node : {g.links[link].first, g.links[link].second}) {
      if (visited[node]) continue;
      visited[node] = 1;
      if (owner[node] < 0 || self(self, owner[node])) {
        owner[node] = link;
        return true;
      }
    }
    return false;
  };
  for (int l = 0; l < static_cast<int>(g.links.size()); ++l) {
    visited.assign(g.nodes, 0);
    if (!augment(augment, l)) return false;
  }
  return true;
}

// Pseudoforest criterion: feasible iff every connected component has at most
// as many links as nodes.
inline bool gap_feasible_components(const CrossingGraph& g) {
  std::vector<int> parent(g.nodes);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> link_count(g.nodes, 0);
  std::vector<int> node_count(g.nodes, 1);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : g.links) {
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[rb] = ra;
      link_count[ra] += link_count[rb];
      node_count[ra] += node_count[rb];
    }
    ++link_count[ra];
  }
  for (int v = 0; v < g.nodes; ++v)
    if (find(v) == v && link_count[v] > node_count[v]) return false;
  return true;
}

}  // namespace detail

inline bool gap_assignment_exists(const CrossingGraph& g) {
  bool by_matching = detail::gap_feasible_matching(g);
  if (by_matching != detail::gap_feasible_components(g))
    throw std::logic_error("gap feasibility routes disagree");
  return by_matching;
}

// True iff some assignment of crossings to their incident edges gives every
// edge at most one crossing.
inline bool gap_assignment_exists(const Drawing& d) {
  return gap_assignment_exists(CrossingGraph::from(d));
}

// Global class predicate.
inline bool drawing_satisfies(const ClassSpec& spec, const Drawing& d) {
  switch (spec.kind) {
    case ClassKind::Unrestricted:
      return true;
    case ClassKind::KPlanar: {
      for (const auto& e : d.edges)
        if (static_cast<int>(e.crossings.size()) > spec.k) return false;
      return true;
    }
    case ClassKind::Quasiplanar: {
      // A violating triple contains some crossing pair (e, f) plus a third
      // edge crossing both.
      for (const auto& v : d.vertices) {
        if (v.kind != VertexKind::Crossing) continue;
        for (EdgeId g : d.edge_crossers(v.cross_a))
          if (g != v.cross_b && d.edge_crosses(v.cross_b, g)) return false;
      }
      return true;
    }
    case ClassKind::FanPlanar: {
      // The crossers of every edge form a fan: they share a common vertex.
      for (EdgeId e = 0; e < static_cast<EdgeId>(d.edges.size()); ++e) {
        auto cr = d.edge_crossers(e);
        if (cr.size() < 2) continue;
        bool apex = false;
        for (VertexId v : {d.edges[cr[0]].u, d.edges[cr[0]].w}) {
          bool all = true;
          for (EdgeId q : cr)
            if (d.edges[q].u != v && d.edges[q].w != v) {
              all = false;
              break;
            }
          apex |= all;
        }
        if (!apex) return false;
      }
      return true;
    }
    case ClassKind::FanCrossingFree: {
      for (EdgeId e = 0; e < static_cast<EdgeId>(d.edges.size()); ++e) {
        auto cr = d.edge_crossers(e);
        for (std::size_t i = 0; i < cr.size(); ++i)
          for (std::size_t j = i + 1; j < cr.size(); ++j)
            if (d.edges_adjacent(cr[i], cr[j])) return false;
      }
      return true;
    }
    case ClassKind::GapPlanar:
      return gap_assignment_exists(d);
  }
  return false;
}

// Diagnostic for the fan-planar reading: true when the crossers of every edge
// are pairwise adjacent but some edge's crossers share no common vertex, i.e.
// the pairwise-adjacency relaxation and the common-apex (fan) reading
// disagree on this drawing.
inline bool fan_definitions_differ(const Drawing& d) {
  bool pairwise = true;
  for (EdgeId e = 0; e < static_cast<EdgeId>(d.edges.size()) && pairwise; ++e) {
    auto cr = d.edge_crossers(e);
    for (std::size_t i = 0; i < cr.size() && pairwise; ++i)
      for (std::size_t j = i + 1; j < cr.size(); ++j)
        if (!d.edges_adjacent(cr[i], cr[j])) {
          pairwise = false;
          break;
        }
  }
  if (!pairwise) return false;
  return !drawing_satisfies({ClassKind::FanPlanar, 1, IsoMode::IncludeReflections}, d);
}

// The growing edge during pathway search. The working drawing records it with
// a tip endpoint; adjacency checks must use the intended endpoints instead.
struct PartialNewEdge {
  EdgeId edge = kInvalidId;
  VertexId end_a = kInvalidId;
  VertexId end_b = kInvalidId;  // target vertex, or the new vertex itself
};

// Decides whether crossing `candidate` next would violate simplicity or the
// class restriction on the extended drawing. Exact, not heuristic: false
// guarantees the one-step extension still satisfies every class condition.
inline bool crossing_prohibited(const ClassSpec& spec, const Drawing& d,
                                const PartialNewEdge& partial, EdgeId candidate) {
  if (candidate == partial.edge) return true;
  const auto& ce = d.edges[candidate];
  if (ce.u == partial.end_a || ce.w == partial.end_a || ce.u == partial.end_b ||
      ce.w == partial.end_b)
    return true;  // adjacent edges never cross
  if (d.edge_crosses(partial.edge, candidate)) return true;  // at most one crossing per pair

  switch (spec.kind) {
    case ClassKind::Unrestricted:
      return false;
    case ClassKind::KPlanar:
      return static_cast<int>(ce.crossings.size()) + 1 > spec.k ||
             static_cast<int>(d.edges[partial.edge].crossings.size()) + 1 > spec.k;
    case ClassKind::Quasiplanar: {
      for (EdgeId e : d.edge_crossers(partial.edge))
        if (d.edge_crosses(candidate, e)) return true;
      return false;
    }
    case ClassKind::FanPlanar: {
      auto all_incident = [&](const std::vector<EdgeId>& es, VertexId v) {
        if (v == kInvalidId) return false;
        for (EdgeId q : es)
          if (d.edges[q].u != v && d.edges[q].w != v) return false;
        return true;
      };
      // The crossers of `candidate` gain the new edge: they must keep a
      // common vertex, which then has to be an endpoint of the new edge.
      auto cr_c = d.edge_crossers(candidate);
      if (!cr_c.empty() && !all_incident(cr_c, partial.end_a) &&
          !all_incident(cr_c, partial.end_b))
        return true;
      // Likewise the new edge's crossers gain `candidate`.
      auto cr_n = d.edge_crossers(partial.edge);
      if (!cr_n.empty() && !all_incident(cr_n, ce.u) && !all_incident(cr_n, ce.w)) return true;
      return false;
    }
    case ClassKind::FanCrossingFree: {
      auto adjacent_to_partial = [&](EdgeId q) {
        const auto& qe = d.edges[q];
        return qe.u == partial.end_a || qe.w == partial.end_a || qe.u == partial.end_b ||
               qe.w == partial.end_b;
      };
      for (EdgeId q : d.edge_crossers(candidate))
        if (adjacent_to_partial(q)) return true;
      for (EdgeId e : d.edge_crossers(partial.edge))
        if (d.edges_adjacent(e, candidate)) return true;
      return false;
    }
    case ClassKind::GapPlanar: {
      CrossingGraph g = CrossingGraph::from(d);
      g.links.emplace_back(std::min(partial.edge, candidate), std::max(partial.edge, candidate));
      return !detail::gap_feasible_matching(g);
    }
  }
  return false;
}

}  // namespace beyondgen
