#pragma once

#include <random>
#include <vector>

#include "beyondgen/constraints.hpp"
#include "beyondgen/embedding.hpp"

namespace beyondgen {

// A valid way of drawing the first edge (u1, v) of a new vertex v: the curve
// state with v placed at the destination. `destination` is the corner of v in
// `drawing`, whose face orbit is the destination face.
struct HalfPathway {
  CornerId anchor = kInvalidId;
  std::vector<DartId> crossed;
  EdgeSet prohibited;
  CornerId destination = kInvalidId;
  Drawing drawing;

  int length() const { return static_cast<int>(crossed.size()); }
};

// A valid way of drawing edge (v, target) between existing vertices. `attach`
// is the corner of the target the curve ends at (dart id valid in `drawing`).
struct Pathway {
  CornerId anchor = kInvalidId;
  std::vector<DartId> crossed;
  EdgeSet prohibited;
  CornerId attach = kInvalidId;
  Drawing drawing;

  int length() const { return static_cast<int>(crossed.size()); }
};

namespace detail {

// Walks the destination face once per state, emitting completions and trying
// extensions in boundary order. An RNG, when given, shuffles that order
// (sampling mode); otherwise the orbit order keeps runs reproducible.
template <typename StateFn>
bool explore_curve(const CurveBuilder& cb, const ClassSpec& spec, const PartialNewEdge& partial,
                   VertexId attach_target, std::mt19937_64* rng, StateFn&& fn) {
  if (attach_target == kInvalidId) {
    if (!fn(cb, kInvalidId)) return false;
  }
  std::vector<DartId> boundary = cb.destination_boundary();
  if (rng) std::shuffle(boundary.begin(), boundary.end(), *rng);
  const Drawing& d = cb.drawing();
  for (DartId bd : boundary) {
    if (attach_target != kInvalidId && d.darts[bd].origin == attach_target) {
      if (!fn(cb, bd)) return false;
    }
    EdgeId c = d.darts[bd].edge;
    if (cb.prohibited().contains(c)) continue;
    if (crossing_prohibited(spec, d, partial, c)) continue;
    if (!explore_curve(cb.crossed(bd), spec, partial, attach_target, rng, fn)) return false;
  }
  return true;
}

}  // namespace detail

// Visits every valid curve state for a first edge (u1, v), where v is a new
// vertex labeled (side, index) under the drawing's graph spec. fn receives the
// CurveBuilder; returning false stops the enumeration. Returns false if
// stopped early.
template <typename Fn>
bool visit_half_pathways(const Drawing& d, VertexId u1, const ClassSpec& spec, int side, int index,
                         Fn&& fn, std::mt19937_64* rng = nullptr) {
  if (u1 < 0 || u1 >= static_cast<VertexId>(d.vertices.size()) ||
      d.vertices[u1].kind != VertexKind::Real)
    throw ArgumentError("half-pathway anchor must be a real vertex");
  if (index >= d.graph.side_size(side))
    throw ArgumentError("graph spec does not cover the new vertex; grow it first");
  std::vector<CornerId> anchors = d.darts_at(u1);
  if (rng) std::shuffle(anchors.begin(), anchors.end(), *rng);
  for (CornerId a : anchors) {
    CurveBuilder cb = CurveBuilder::begin_new_vertex(d, a, side, index);
    PartialNewEdge partial{cb.new_edge(), u1, cb.tip()};
    auto emit = [&](const CurveBuilder& state, CornerId) { return fn(state); };
    if (!detail::explore_curve(cb, spec, partial, kInvalidId, rng, emit)) return false;
  }
  return true;
}

// Visits every valid pathway completion for edge (v, target): fn receives the
// curve state and the attachment corner of the target on its destination
// face. Returning false stops the enumeration.
template <typename Fn>
bool visit_pathways(const Drawing& d, VertexId v, VertexId target, const ClassSpec& spec, Fn&& fn,
                    std::mt19937_64* rng = nullptr) {
  if (v == target) throw ArgumentError("pathway endpoints coincide");
  for (const auto& e : d.edges)
    if ((e.u == v && e.w == target) || (e.w == v && e.u == target))
      throw ArgumentError("edge already present");
  std::vector<CornerId> anchors = d.darts_at(v);
  if (rng) std::shuffle(anchors.begin(), anchors.end(), *rng);
  for (CornerId a : anchors) {
    CurveBuilder cb = CurveBuilder::begin_to_target(d, a, target);
    PartialNewEdge partial{cb.new_edge(), v, target};
    if (!detail::explore_curve(cb, spec, partial, target, rng, fn)) return false;
  }
  return true;
}

// All valid half-pathways for the first edge of a new vertex at u1. The new
// vertex is labeled with the next free index on the side opposite to u1 (the
// same side for complete graphs); the drawing's graph spec must already
// account for it.
inline std::vector<HalfPathway> enumerate_half_pathways(const Drawing& d, VertexId u1,
                                                        const ClassSpec& spec) {
  int side = d.graph.is_complete() ? 0 : 1 - d.vertices[u1].side;
  int index = 0;
  for (const auto& v : d.vertices)
    if (v.kind == VertexKind::Real && v.side == side) index = std::max(index, v.index + 1);
  Drawing grown = d;
  if (grown.graph.is_complete())
    grown.graph.a = std::max(grown.graph.a, index + 1);
  else if (side == 0)
    grown.graph.a = std::max(grown.graph.a, index + 1);
  else
    grown.graph.b = std::max(grown.graph.b, index + 1);
  std::vector<HalfPathway> out;
  visit_half_pathways(grown, u1, spec, side, index, [&](const CurveBuilder& cb) {
    HalfPathway hp;
    hp.anchor = cb.anchor();
    hp.crossed = cb.crossed_darts();
    hp.prohibited = cb.prohibited();
    hp.destination = cb.tip_dart();
    hp.drawing = cb.finish_new_vertex();
    out.push_back(std::move(hp));
    return true;
  });
  return out;
}

// All valid pathways for edge (v, target), one per attachment corner.
inline std::vector<Pathway> enumerate_pathways(const Drawing& d, VertexId v, VertexId target,
                                               const ClassSpec& spec) {
  std::vector<Pathway> out;
  visit_pathways(d, v, target, spec, [&](const CurveBuilder& cb, CornerId attach) {
    Pathway p;
    p.anchor = cb.anchor();
    p.crossed = cb.crossed_darts();
    p.prohibited = cb.prohibited();
    p.attach = attach;
    p.drawing = cb.finish_at_corner(attach);
    out.push_back(std::move(p));
    return true;
  });
  return out;
}

}  // namespace beyondgen
