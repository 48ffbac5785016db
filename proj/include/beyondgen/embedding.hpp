#pragma once

#include <algorithm>
#include <cassert>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "beyondgen/core.hpp"
#include "beyondgen/graph_spec.hpp"

namespace beyondgen {

enum class VertexKind : std::uint8_t { Real, Crossing };

// Side value of a curve tip that has not been attached to its target yet.
inline constexpr std::int8_t kPendingSide = -1;

struct Vertex {
  VertexKind kind = VertexKind::Real;
  std::int8_t side = 0;     // real: partite side (0 = u, 1 = w)
  std::int16_t index = 0;   // real: position within its side
  EdgeId cross_a = kInvalidId;  // crossing: the two crossed edges, cross_a < cross_b
  EdgeId cross_b = kInvalidId;
  DartId head = kInvalidId;  // some dart leaving this vertex
};

// Half-segment of the planarization. Twins form one segment; rot_next walks
// the cyclic rotation around the origin vertex.
struct Dart {
  VertexId origin = kInvalidId;
  DartId twin = kInvalidId;
  DartId rot_next = kInvalidId;
  DartId rot_prev = kInvalidId;
  EdgeId edge = kInvalidId;  // original edge this segment belongs to
};

struct OriginalEdge {
  VertexId u = kInvalidId;
  VertexId w = kInvalidId;
  DartId dart_u = kInvalidId;           // segment dart leaving u along this edge
  std::vector<VertexId> crossings;      // crossing vertices in order from u to w
};

struct Face {
  DartId start = kInvalidId;
  int degree = 0;
};

struct FaceIndex {
  std::vector<FaceId> face_of_dart;
  std::vector<Face> faces;
};

// A planarized drawing as a combinatorial map on the sphere. No face is
// distinguished as outer; rendering picks one at export time.
//
// Face boundaries are the orbits of phi(d) = rot_next(twin(d)). The orbit
// containing dart d passes the corner of d (the gap between rot_prev(d) and d
// at origin(d)), so CornerId == DartId throughout.
struct Drawing {
  GraphSpec graph;
  std::vector<Vertex> vertices;
  std::vector<Dart> darts;
  std::vector<OriginalEdge> edges;

  int num_segments() const { return static_cast<int>(darts.size()) / 2; }

  int num_crossing_vertices() const {
    int c = 0;
    for (const auto& v : vertices) c += v.kind == VertexKind::Crossing;
    return c;
  }

  DartId phi(DartId d) const { return darts[darts[d].twin].rot_next; }

  int degree(VertexId v) const {
    DartId h = vertices[v].head;
    if (h == kInvalidId) return 0;
    int deg = 0;
    DartId d = h;
    do {
      ++deg;
      d = darts[d].rot_next;
    } while (d != h);
    return deg;
  }

  // Darts leaving v, in rotation order starting at the stored head.
  std::vector<DartId> darts_at(VertexId v) const {
    std::vector<DartId> out;
    DartId h = vertices[v].head;
    if (h == kInvalidId) return out;
    DartId d = h;
    do {
      out.push_back(d);
      d = darts[d].rot_next;
    } while (d != h);
    return out;
  }

  std::vector<DartId> walk_face(DartId start) const {
    std::vector<DartId> out;
    DartId d = start;
    do {
      out.push_back(d);
      d = phi(d);
      if (out.size() > darts.size())
        throw StructureError("face walk does not close (twin mismatch)");
    } while (d != start);
    return out;
  }

  FaceIndex faces() const {
    FaceIndex fx;
    fx.face_of_dart.assign(darts.size(), kInvalidId);
    for (DartId d = 0; d < static_cast<DartId>(darts.size()); ++d) {
      if (fx.face_of_dart[d] != kInvalidId) continue;
      FaceId f = static_cast<FaceId>(fx.faces.size());
      int deg = 0;
      DartId cur = d;
      do {
        if (fx.face_of_dart[cur] != kInvalidId)
          throw StructureError("face orbits are not a partition (twin mismatch)");
        fx.face_of_dart[cur] = f;
        ++deg;
        cur = phi(cur);
        if (deg > static_cast<int>(darts.size()))
          throw StructureError("face walk does not close (twin mismatch)");
      } while (cur != d);
      fx.faces.push_back(Face{d, deg});
    }
    return fx;
  }

  // One entry per boundary segment of f: the segment (as its canonical dart)
  // and the face on the other side. A bridge reports f itself.
  std::vector<std::pair<DartId, FaceId>> dual_neighbors(const FaceIndex& fx, FaceId f) const {
    if (f < 0 || f >= static_cast<FaceId>(fx.faces.size()))
      throw ArgumentError("unknown face id " + std::to_string(f));
    std::vector<std::pair<DartId, FaceId>> out;
    for (DartId d : walk_face(fx.faces[f].start)) {
      DartId t = darts[d].twin;
      out.emplace_back(std::min(d, t), fx.face_of_dart[t]);
    }
    return out;
  }

  bool edges_adjacent(EdgeId e, EdgeId f) const {
    const auto& a = edges[e];
    const auto& b = edges[f];
    return a.u == b.u || a.u == b.w || a.w == b.u || a.w == b.w;
  }

  // Other edge involved in each crossing along e, in order from u to w.
  std::vector<EdgeId> edge_crossers(EdgeId e) const {
    std::vector<EdgeId> out;
    out.reserve(edges[e].crossings.size());
    for (VertexId x : edges[e].crossings) {
      const auto& v = vertices[x];
      out.push_back(v.cross_a == e ? v.cross_b : v.cross_a);
    }
    return out;
  }

  bool edge_crosses(EdgeId e, EdgeId f) const {
    for (VertexId x : edges[e].crossings) {
      const auto& v = vertices[x];
      if ((v.cross_a == e ? v.cross_b : v.cross_a) == f) return true;
    }
    return false;
  }

  // Forward darts of e's segments, from u to w.
  std::vector<DartId> walk_edge(EdgeId e) const {
    std::vector<DartId> out;
    const auto& oe = edges[e];
    DartId cur = oe.dart_u;
    for (std::size_t step = 0; step <= oe.crossings.size(); ++step) {
      out.push_back(cur);
      VertexId q = darts[darts[cur].twin].origin;
      if (vertices[q].kind == VertexKind::Real) {
        if (q != oe.w)
          throw InvariantError("edge walk ends at the wrong real vertex");
        if (step != oe.crossings.size())
          throw InvariantError("edge walk shorter than its crossing list");
        return out;
      }
      if (step >= oe.crossings.size())
        throw InvariantError("edge walk longer than its crossing list");
      if (q != oe.crossings[step])
        throw InvariantError("edge walk visits crossings out of order");
      cur = darts[darts[darts[cur].twin].rot_next].rot_next;  // continue straight
      if (darts[cur].edge != e)
        throw InvariantError("crossing rotation does not alternate edges");
    }
    throw InvariantError("edge walk does not terminate");
  }

  // Index of segment {d, twin(d)} along its edge, counted from endpoint u.
  int segment_position(DartId d) const {
    EdgeId e = darts[d].edge;
    DartId cur = edges[e].dart_u;
    DartId t = darts[d].twin;
    int idx = 0;
    while (cur != d && cur != t) {
      VertexId q = darts[darts[cur].twin].origin;
      if (vertices[q].kind == VertexKind::Real)
        throw StructureError("segment not found along its edge");
      cur = darts[darts[darts[cur].twin].rot_next].rot_next;
      ++idx;
      if (idx > static_cast<int>(edges[e].crossings.size()))
        throw StructureError("segment not found along its edge");
    }
    return idx;
  }

  void validate(bool allow_pending_tip = false) const;

  void serialize(std::ostream& os, const std::string& class_name) const;

  // Builds a drawing from per-vertex rotation lists (cyclic neighbor ids) and
  // original edges with their crossing sequences. Validates the result.
  static Drawing from_rotations(GraphSpec graph, const std::vector<Vertex>& vertex_info,
                                const std::vector<std::vector<VertexId>>& rotations,
                                std::vector<OriginalEdge> edge_info);
};

inline void Drawing::validate(bool allow_pending_tip) const {
  const int nv = static_cast<int>(vertices.size());
  const int nd = static_cast<int>(darts.size());
  const int ne = static_cast<int>(edges.size());
  if (nd == 0 || nd % 2 != 0) throw StructureError("dart count must be positive and even");

  for (DartId d = 0; d < nd; ++d) {
    const Dart& dd = darts[d];
    if (dd.origin < 0 || dd.origin >= nv) throw StructureError("dart origin out of range");
    if (dd.twin < 0 || dd.twin >= nd || dd.twin == d) throw StructureError("bad twin");
    if (darts[dd.twin].twin != d) throw StructureError("twin is not an involution");
    if (dd.rot_next < 0 || dd.rot_next >= nd) throw StructureError("bad rot_next");
    if (darts[dd.rot_next].rot_prev != d) throw StructureError("rot_prev mismatch");
    if (darts[dd.rot_next].origin != dd.origin) throw StructureError("rotation leaves vertex");
    if (dd.edge < 0 || dd.edge >= ne) throw StructureError("dart edge out of range");
    if (darts[dd.twin].edge != dd.edge) throw StructureError("twin darts on different edges");
  }

  // Rotation cycles partition the darts.
  std::vector<char> seen(nd, 0);
  int covered = 0;
  for (VertexId v = 0; v < nv; ++v) {
    DartId h = vertices[v].head;
    if (h == kInvalidId) throw StructureError("vertex without darts");
    if (darts[h].origin != v) throw StructureError("head dart has wrong origin");
    DartId d = h;
    do {
      if (seen[d]) throw StructureError("dart in two rotation cycles");
      seen[d] = 1;
      ++covered;
      d = darts[d].rot_next;
    } while (d != h);
  }
  if (covered != nd) throw StructureError("rotation cycles do not cover all darts");

  int pending = 0;
  std::vector<std::pair<int, int>> real_labels;
  for (VertexId v = 0; v < nv; ++v) {
    const Vertex& vx = vertices[v];
    if (vx.kind == VertexKind::Real) {
      if (vx.side == kPendingSide) {
        ++pending;
        continue;
      }
      if (vx.side != 0 && vx.side != 1) throw InvariantError("bad partite side");
      if (graph.is_complete() && vx.side != 0)
        throw InvariantError("complete-graph vertex on side 1");
      if (vx.index < 0 || vx.index >= graph.side_size(vx.side))
        throw InvariantError("vertex index outside graph spec");
      real_labels.emplace_back(vx.side, vx.index);
    } else {
      if (degree(v) != 4) throw InvariantError("crossing vertex degree != 4");
      if (vx.cross_a < 0 || vx.cross_b < 0 || vx.cross_a >= ne || vx.cross_b >= ne ||
          vx.cross_a >= vx.cross_b)
        throw InvariantError("bad crossing edge pair");
      if (edges_adjacent(vx.cross_a, vx.cross_b))
        throw InvariantError("adjacent edges cross");
      // The four incident segments alternate between the two edges.
      DartId d = vx.head;
      for (int i = 0; i < 4; ++i) {
        EdgeId expect = (darts[d].edge == vx.cross_a) ? vx.cross_a : vx.cross_b;
        if (darts[d].edge != expect) throw InvariantError("crossing incident to foreign edge");
        if (darts[darts[d].rot_next].edge == darts[d].edge)
          throw InvariantError("crossing rotation does not alternate edges");
        d = darts[d].rot_next;
      }
    }
  }
  if (pending > (allow_pending_tip ? 1 : 0))
    throw InvariantError("unexpected pending curve tip");
  std::sort(real_labels.begin(), real_labels.end());
  if (std::adjacent_find(real_labels.begin(), real_labels.end()) != real_labels.end())
    throw InvariantError("duplicate vertex label");

  std::vector<std::pair<EdgeId, EdgeId>> crossing_pairs;
  for (EdgeId e = 0; e < ne; ++e) {
    const OriginalEdge& oe = edges[e];
    if (oe.u < 0 || oe.u >= nv || oe.w < 0 || oe.w >= nv || oe.u == oe.w)
      throw InvariantError("bad edge endpoints");
    const Vertex& vu = vertices[oe.u];
    const Vertex& vw = vertices[oe.w];
    if (vu.kind != VertexKind::Real || vw.kind != VertexKind::Real)
      throw InvariantError("edge endpoint is not a real vertex");
    if (!graph.is_complete() && vu.side != kPendingSide && vw.side != kPendingSide &&
        vu.side == vw.side)
      throw InvariantError("bipartite edge within one side");
    for (VertexId x : oe.crossings) {
      if (x < 0 || x >= nv || vertices[x].kind != VertexKind::Crossing)
        throw InvariantError("crossing list entry is not a crossing vertex");
      if (vertices[x].cross_a != e && vertices[x].cross_b != e)
        throw InvariantError("crossing list entry does not involve this edge");
      const Vertex& xv = vertices[x];
      crossing_pairs.emplace_back(xv.cross_a, xv.cross_b);
    }
    auto sorted = oe.crossings;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvariantError("edge crosses a segment twice");
    if (oe.dart_u < 0 || oe.dart_u >= nd || darts[oe.dart_u].edge != e ||
        darts[oe.dart_u].origin != oe.u)
      throw StructureError("edge start dart mismatch");
    walk_edge(e);  // verifies order of crossings along the edge
  }
  // Each crossing pair was collected once per involved edge.
  std::sort(crossing_pairs.begin(), crossing_pairs.end());
  for (std::size_t i = 0; i + 1 < crossing_pairs.size(); i += 2) {
    if (crossing_pairs[i] != crossing_pairs[i + 1])
      throw InvariantError("crossing recorded on only one of its edges");
    if (i + 2 < crossing_pairs.size() && crossing_pairs[i + 2] == crossing_pairs[i])
      throw InvariantError("two edges cross more than once");
  }
  if (crossing_pairs.size() % 2 != 0)
    throw InvariantError("crossing recorded on only one of its edges");

  // Real vertices carry one dart per incident edge, and that edge ends there.
  for (VertexId v = 0; v < nv; ++v) {
    if (vertices[v].kind != VertexKind::Real) continue;
    std::vector<EdgeId> inc;
    for (DartId d : darts_at(v)) {
      EdgeId e = darts[d].edge;
      if (edges[e].u != v && edges[e].w != v)
        throw InvariantError("real vertex carries a dart of a foreign edge");
      inc.push_back(e);
    }
    std::sort(inc.begin(), inc.end());
    if (std::adjacent_find(inc.begin(), inc.end()) != inc.end())
      throw InvariantError("edge passes through a real vertex twice");
  }

  // Euler's formula on the sphere.
  const int nfaces = static_cast<int>(faces().faces.size());
  if (nv - num_segments() + nfaces != 2)
    throw InvariantError("Euler's formula violated");
}

namespace detail {

inline std::string side_letter(int side) { return side == 0 ? "u" : "w"; }

}  // namespace detail

inline void Drawing::serialize(std::ostream& os, const std::string& class_name) const {
  os << "drawing " << class_name << ' ' << graph.to_string() << '\n';
  for (VertexId v = 0; v < static_cast<VertexId>(vertices.size()); ++v) {
    const Vertex& vx = vertices[v];
    if (vx.kind == VertexKind::Real) {
      if (vx.side == kPendingSide)
        throw InvariantError("cannot serialize a drawing with a pending curve tip");
      os << "v " << v << " real " << detail::side_letter(vx.side) << vx.index << '\n';
    } else {
      os << "v " << v << " cross " << vx.cross_a << ' ' << vx.cross_b << '\n';
    }
  }
  for (VertexId v = 0; v < static_cast<VertexId>(vertices.size()); ++v) {
    std::vector<VertexId> nbr;
    for (DartId d : darts_at(v)) nbr.push_back(darts[darts[d].twin].origin);
    // Normalize the cyclic sequence to start at the smallest neighbor id.
    auto mn = std::min_element(nbr.begin(), nbr.end());
    std::rotate(nbr.begin(), mn, nbr.end());
    os << "rot " << v;
    for (VertexId n : nbr) os << ' ' << n;
    os << '\n';
  }
  for (EdgeId e = 0; e < static_cast<EdgeId>(edges.size()); ++e) {
    const OriginalEdge& oe = edges[e];
    os << "e " << e << ' ' << oe.u << ' ' << oe.w << " crossings";
    for (VertexId x : oe.crossings) os << ' ' << x;
    os << '\n';
  }
}

inline Drawing Drawing::from_rotations(GraphSpec graph, const std::vector<Vertex>& vertex_info,
                                       const std::vector<std::vector<VertexId>>& rotations,
                                       std::vector<OriginalEdge> edge_info) {
  if (vertex_info.size() != rotations.size())
    throw ArgumentError("vertex/rotation count mismatch");
  Drawing d;
  d.graph = graph;
  d.vertices = vertex_info;
  d.edges = std::move(edge_info);

  // Segment endpoints, keyed by unordered vertex pair. The planarization of a
  // simple drawing is itself a simple graph, so the key is unique.
  std::map<std::pair<VertexId, VertexId>, EdgeId> seg_edge;
  auto key = [](VertexId a, VertexId b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (EdgeId e = 0; e < static_cast<EdgeId>(d.edges.size()); ++e) {
    OriginalEdge& oe = d.edges[e];
    VertexId prev = oe.u;
    auto push = [&](VertexId nxt) {
      if (!seg_edge.emplace(key(prev, nxt), e).second)
        throw InvariantError("duplicate planarization segment");
      prev = nxt;
    };
    for (VertexId x : oe.crossings) push(x);
    push(oe.w);
  }

  // Derive crossing pairs from the edge chains.
  std::vector<std::vector<EdgeId>> at_crossing(d.vertices.size());
  for (EdgeId e = 0; e < static_cast<EdgeId>(d.edges.size()); ++e)
    for (VertexId x : d.edges[e].crossings) at_crossing[x].push_back(e);
  for (VertexId v = 0; v < static_cast<VertexId>(d.vertices.size()); ++v) {
    if (d.vertices[v].kind != VertexKind::Crossing) continue;
    auto& on = at_crossing[v];
    std::sort(on.begin(), on.end());
    if (on.size() != 2 || on[0] == on[1])
      throw InvariantError("crossing vertex must lie on exactly two edges");
    d.vertices[v].cross_a = on[0];
    d.vertices[v].cross_b = on[1];
  }

  std::map<std::pair<VertexId, VertexId>, DartId> dart_of;
  for (VertexId v = 0; v < static_cast<VertexId>(rotations.size()); ++v) {
    const auto& rot = rotations[v];
    if (rot.empty()) throw ArgumentError("empty rotation list");
    DartId first = static_cast<DartId>(d.darts.size());
    for (std::size_t i = 0; i < rot.size(); ++i) {
      auto it = seg_edge.find(key(v, rot[i]));
      if (it == seg_edge.end())
        throw StructureError("rotation entry is not a planarization segment");
      DartId id = static_cast<DartId>(d.darts.size());
      Dart dart;
      dart.origin = v;
      dart.edge = it->second;
      dart.rot_next = (i + 1 < rot.size()) ? id + 1 : first;
      dart.rot_prev = (i > 0) ? id - 1 : first + static_cast<DartId>(rot.size()) - 1;
      d.darts.push_back(dart);
      if (!dart_of.emplace(std::make_pair(v, rot[i]), id).second)
        throw StructureError("duplicate rotation entry");
    }
    d.vertices[v].head = first;
  }

  for (auto& [vn, id] : dart_of) {
    auto it = dart_of.find(std::make_pair(vn.second, vn.first));
    if (it == dart_of.end()) throw StructureError("segment missing its twin dart");
    d.darts[id].twin = it->second;
  }
  if (d.darts.size() != 2 * seg_edge.size())
    throw StructureError("rotations do not cover every segment");

  for (EdgeId e = 0; e < static_cast<EdgeId>(d.edges.size()); ++e) {
    OriginalEdge& oe = d.edges[e];
    VertexId first = oe.crossings.empty() ? oe.w : oe.crossings.front();
    auto it = dart_of.find(std::make_pair(oe.u, first));
    if (it == dart_of.end()) throw StructureError("edge start segment missing");
    oe.dart_u = it->second;
  }

  d.validate();
  return d;
}

// Grows a new edge one crossing at a time. Every intermediate state is a
// fully formed Drawing in which the partial edge runs from its anchor to a
// degree-1 tip vertex placed in the current destination face; the tip edge
// participates in crossing counts like any other edge.
class CurveBuilder {
 public:
  // Tip doubles as the final new vertex (half-pathway use).
  static CurveBuilder begin_new_vertex(const Drawing& base, CornerId anchor, int side, int index) {
    return CurveBuilder(base, anchor, static_cast<std::int8_t>(side),
                        static_cast<std::int16_t>(index), kInvalidId);
  }

  // Tip is a scratch vertex; finish_at_corner() merges it into `target`.
  static CurveBuilder begin_to_target(const Drawing& base, CornerId anchor, VertexId target) {
    if (target < 0 || target >= static_cast<VertexId>(base.vertices.size()) ||
        base.vertices[target].kind != VertexKind::Real)
      throw ArgumentError("pathway target must be a real vertex");
    return CurveBuilder(base, anchor, kPendingSide, 0, target);
  }

  const Drawing& drawing() const { return d_; }
  EdgeId new_edge() const { return new_edge_; }
  VertexId tip() const { return tip_; }
  DartId tip_dart() const { return tip_dart_; }
  VertexId anchor_vertex() const { return anchor_vertex_; }
  CornerId anchor() const { return anchor_; }
  VertexId target() const { return target_; }
  const std::vector<DartId>& crossed_darts() const { return crossed_; }
  const EdgeSet& prohibited() const { return prohibited_; }
  int length() const { return static_cast<int>(crossed_.size()); }

  // Boundary of the destination face, starting at the tip's corner.
  std::vector<DartId> destination_boundary() const { return d_.walk_face(tip_dart_); }

  // Extends the curve across the segment of `boundary`, which must lie on the
  // destination face. Returns the extended copy.
  CurveBuilder crossed(DartId boundary) const {
    CurveBuilder next(*this);
    Drawing& d = next.d_;
    const DartId bd = boundary;
    const DartId bd_twin = d.darts[bd].twin;
    const EdgeId c = d.darts[bd].edge;
    if (c == new_edge_) throw PathwayError("curve cannot cross itself");
    const int pos = d.segment_position(bd);

    const VertexId x = static_cast<VertexId>(d.vertices.size());
    Vertex xv;
    xv.kind = VertexKind::Crossing;
    xv.cross_a = std::min(c, new_edge_);
    xv.cross_b = std::max(c, new_edge_);
    d.vertices.push_back(xv);

    const DartId g_t = tip_dart_;              // becomes the dart x -> previous anchor
    const DartId n1 = static_cast<DartId>(d.darts.size());
    const DartId n2 = n1 + 1;
    const DartId h_x = n1 + 2;  // x -> tip
    const DartId h_t = n1 + 3;  // tip -> x
    d.darts.resize(d.darts.size() + 4);

    d.darts[n1] = Dart{x, bd, g_t, h_x, c};
    d.darts[n2] = Dart{x, bd_twin, h_x, g_t, c};
    d.darts[h_x] = Dart{x, h_t, n1, n2, new_edge_};
    d.darts[h_t] = Dart{tip_, h_x, h_t, h_t, new_edge_};
    d.darts[bd].twin = n1;
    d.darts[bd_twin].twin = n2;
    d.darts[g_t].origin = x;
    d.darts[g_t].rot_next = n2;
    d.darts[g_t].rot_prev = n1;
    d.vertices[x].head = n1;
    d.vertices[tip_].head = h_t;

    d.edges[c].crossings.insert(d.edges[c].crossings.begin() + pos, x);
    d.edges[new_edge_].crossings.push_back(x);

    next.tip_dart_ = h_t;
    next.crossed_.push_back(bd);
    next.prohibited_.add(c);
    return next;
  }

  // Half-pathway completion: the tip stays as the newly placed vertex.
  Drawing finish_new_vertex() const {
    if (target_ != kInvalidId)
      throw ArgumentError("curve was started toward an existing target");
    Drawing out = d_;
    assert((out.validate(), true));
    return out;
  }

  // Pathway completion: attach the curve at `corner`, a corner of the target
  // on the destination face, and drop the scratch tip.
  Drawing finish_at_corner(CornerId corner) const {
    if (target_ == kInvalidId)
      throw ArgumentError("curve was started toward a new vertex");
    Drawing out = d_;
    if (corner < 0 || corner >= static_cast<DartId>(out.darts.size()) ||
        out.darts[corner].origin != target_)
      throw ArgumentError("attachment corner is not at the target vertex");
    bool on_face = false;
    for (DartId d : out.walk_face(tip_dart_))
      if (d == corner) {
        on_face = true;
        break;
      }
    if (!on_face) throw PathwayError("attachment corner is not on the destination face");

    const DartId h_t = tip_dart_;
    const DartId before = out.darts[corner].rot_prev;
    out.darts[h_t].origin = target_;
    out.darts[h_t].rot_prev = before;
    out.darts[h_t].rot_next = corner;
    out.darts[before].rot_next = h_t;
    out.darts[corner].rot_prev = h_t;
    out.edges[new_edge_].w = target_;
    remove_isolated_vertex(out, tip_);
    assert((out.validate(), true));
    return out;
  }

 private:
  CurveBuilder(const Drawing& base, CornerId anchor, std::int8_t side, std::int16_t index,
               VertexId target)
      : d_(base), anchor_(anchor), target_(target) {
    if (anchor < 0 || anchor >= static_cast<DartId>(d_.darts.size()))
      throw ArgumentError("bad anchor corner");
    anchor_vertex_ = d_.darts[anchor].origin;
    if (d_.vertices[anchor_vertex_].kind != VertexKind::Real)
      throw ArgumentError("curve must start at a real vertex");
    if (target_ == anchor_vertex_) throw ArgumentError("curve endpoints coincide");

    tip_ = static_cast<VertexId>(d_.vertices.size());
    Vertex tv;
    tv.kind = VertexKind::Real;
    tv.side = side;
    tv.index = index;
    d_.vertices.push_back(tv);

    new_edge_ = static_cast<EdgeId>(d_.edges.size());
    const DartId g_p = static_cast<DartId>(d_.darts.size());
    const DartId g_t = g_p + 1;
    const DartId before = d_.darts[anchor].rot_prev;
    d_.darts.push_back(Dart{anchor_vertex_, g_t, anchor, before, new_edge_});
    d_.darts.push_back(Dart{tip_, g_p, g_t, g_t, new_edge_});
    d_.darts[before].rot_next = g_p;
    d_.darts[anchor].rot_prev = g_p;
    d_.vertices[tip_].head = g_t;

    OriginalEdge oe;
    oe.u = anchor_vertex_;
    oe.w = tip_;
    oe.dart_u = g_p;
    d_.edges.push_back(oe);
    tip_dart_ = g_t;

    prohibited_.add(new_edge_);
    for (DartId d : d_.darts_at(anchor_vertex_)) prohibited_.add(d_.darts[d].edge);
    if (target_ != kInvalidId)
      for (DartId d : d_.darts_at(target_)) prohibited_.add(d_.darts[d].edge);
  }

  static void remove_isolated_vertex(Drawing& d, VertexId t) {
    const VertexId last = static_cast<VertexId>(d.vertices.size()) - 1;
    if (t != last) {
      // Relocate the last vertex into the vacated slot.
      DartId h = d.vertices[last].head;
      DartId cur = h;
      do {
        d.darts[cur].origin = t;
        cur = d.darts[cur].rot_next;
      } while (cur != h);
      for (auto& e : d.edges) {
        if (e.u == last) e.u = t;
        if (e.w == last) e.w = t;
      }
      if (d.vertices[last].kind == VertexKind::Crossing) {
        for (EdgeId e : {d.vertices[last].cross_a, d.vertices[last].cross_b})
          for (auto& x : d.edges[e].crossings)
            if (x == last) x = t;
      }
      d.vertices[t] = d.vertices[last];
    }
    d.vertices.pop_back();
  }

  Drawing d_;
  CornerId anchor_ = kInvalidId;
  VertexId anchor_vertex_ = kInvalidId;
  VertexId tip_ = kInvalidId;
  DartId tip_dart_ = kInvalidId;
  EdgeId new_edge_ = kInvalidId;
  VertexId target_ = kInvalidId;
  std::vector<DartId> crossed_;
  EdgeSet prohibited_;
};

namespace detail {

// Simplicity preconditions shared by the two insertion entry points: at most
// one segment per original edge, none adjacent to an endpoint of the new edge.
inline void check_curve_simplicity(const Drawing& d, VertexId end_a, VertexId end_b,
                                   const std::vector<DartId>& crossed) {
  std::vector<EdgeId> used;
  for (DartId s : crossed) {
    if (s < 0 || s >= static_cast<DartId>(d.darts.size()))
      throw ArgumentError("crossed segment out of range");
    EdgeId e = d.darts[s].edge;
    if (std::find(used.begin(), used.end(), e) != used.end())
      throw InvariantError("curve crosses an edge twice");
    used.push_back(e);
    const auto& oe = d.edges[e];
    if (oe.u == end_a || oe.w == end_a || (end_b != kInvalidId && (oe.u == end_b || oe.w == end_b)))
      throw InvariantError("curve crosses an edge adjacent to an endpoint");
  }
}

inline CurveBuilder replay(CurveBuilder cb, const std::vector<DartId>& crossed) {
  for (DartId s : crossed) {
    bool on_face = false;
    for (DartId d : cb.destination_boundary())
      if (d == s) {
        on_face = true;
        break;
      }
    if (!on_face) throw PathwayError("crossed segment is not on the current face");
    cb = cb.crossed(s);
  }
  return cb;
}

}  // namespace detail

struct ParsedDrawing {
  Drawing drawing;
  std::string class_name;
};

// Reads every serialized drawing block from the stream. Each reconstructed
// drawing is validated; a tampered record is rejected with InvariantError.
inline std::vector<ParsedDrawing> parse_drawings(std::istream& is) {
  std::vector<ParsedDrawing> out;
  std::string cls;
  GraphSpec graph;
  std::vector<Vertex> vinfo;
  std::vector<std::vector<VertexId>> rotations;
  std::vector<OriginalEdge> einfo;
  bool open = false;

  auto flush = [&]() {
    if (!open) return;
    if (vinfo.empty()) throw ParseError("drawing record without vertices");
    ParsedDrawing pd;
    try {
      pd.drawing = Drawing::from_rotations(graph, vinfo, rotations, std::move(einfo));
    } catch (const std::exception& ex) {
      throw InvariantError(std::string("corrupt drawing record: ") + ex.what());
    }
    pd.class_name = cls;
    out.push_back(std::move(pd));
    vinfo.clear();
    rotations.clear();
    einfo.clear();
    open = false;
  };
  auto need_index = [](std::size_t have, long id, const char* what) {
    if (id != static_cast<long>(have)) throw ParseError(std::string(what) + " lines out of order");
  };

  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "drawing") {
      flush();
      std::string gspec;
      ls >> cls >> gspec;
      if (!ls || cls.empty() || gspec.empty())
        throw ParseError("expected 'drawing <class> <graphspec>', got: " + line);
      graph = GraphSpec::parse(gspec);
      open = true;
      continue;
    }
    if (!open) throw ParseError("record line before any 'drawing' header: " + line);
    if (tag == "v") {
      long id;
      std::string kind;
      ls >> id >> kind;
      need_index(vinfo.size(), id, "v");
      Vertex v;
      if (kind == "real") {
        std::string label;
        ls >> label;
        if (label.size() < 2 || (label[0] != 'u' && label[0] != 'w'))
          throw ParseError("bad vertex label: " + label);
        v.kind = VertexKind::Real;
        v.side = label[0] == 'u' ? 0 : 1;
        v.index = static_cast<std::int16_t>(std::stoi(label.substr(1)));
      } else if (kind == "cross") {
        v.kind = VertexKind::Crossing;
        ls >> v.cross_a >> v.cross_b;
      } else {
        throw ParseError("bad vertex kind: " + kind);
      }
      if (!ls) throw ParseError("bad vertex line: " + line);
      vinfo.push_back(v);
    } else if (tag == "rot") {
      long id;
      ls >> id;
      need_index(rotations.size(), id, "rot");
      std::vector<VertexId> rot;
      VertexId n;
      while (ls >> n) rot.push_back(n);
      rotations.push_back(std::move(rot));
    } else if (tag == "e") {
      long id;
      OriginalEdge e;
      std::string kw;
      ls >> id >> e.u >> e.w >> kw;
      need_index(einfo.size(), id, "e");
      if (kw != "crossings" || !ls) throw ParseError("bad edge line: " + line);
      VertexId c;
      while (ls >> c) e.crossings.push_back(c);
      einfo.push_back(std::move(e));
    } else {
      throw ParseError("unknown record line: " + line);
    }
  }
  flush();
  return out;
}

// Rebuilds the drawing in its canonical internal numbering (the one produced
// by parsing its serialized form). Kept representatives are normalized this
// way so that runs resumed from storage replay identically.
inline Drawing normalized(const Drawing& d) {
  std::ostringstream os;
  d.serialize(os, "x");
  std::istringstream is(os.str());
  auto parsed = parse_drawings(is);
  return std::move(parsed.at(0).drawing);
}

// Inserts a new edge from the corner `anchor`, crossing the listed segments
// of `base` in order, and places a new real vertex in the destination face.
inline Drawing insert_edge_to_new_vertex(const Drawing& base, CornerId anchor,
                                         const std::vector<DartId>& crossed, int side, int index) {
  detail::check_curve_simplicity(base, base.darts[anchor].origin, kInvalidId, crossed);
  auto cb = detail::replay(CurveBuilder::begin_new_vertex(base, anchor, side, index), crossed);
  return cb.finish_new_vertex();
}

// Inserts a new edge between two existing vertices: from the corner `anchor`,
// across the listed segments, ending at `end_corner` (a corner of the target
// in `base`, still present on the destination face).
inline Drawing insert_edge_to_vertex(const Drawing& base, CornerId anchor,
                                     const std::vector<DartId>& crossed, CornerId end_corner) {
  VertexId target = base.darts[end_corner].origin;
  detail::check_curve_simplicity(base, base.darts[anchor].origin, target, crossed);
  for (const auto& e : base.edges)
    if ((e.u == base.darts[anchor].origin && e.w == target) ||
        (e.w == base.darts[anchor].origin && e.u == target))
      throw ArgumentError("edge already present");
  auto cb = detail::replay(CurveBuilder::begin_to_target(base, anchor, target), crossed);
  return cb.finish_at_corner(end_corner);
}

}  // namespace beyondgen
