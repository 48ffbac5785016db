#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "beyondgen/embedding.hpp"
#include "beyondgen/generator.hpp"

using namespace beyondgen;

namespace {

std::vector<int> face_degrees(const Drawing& d) {
  std::vector<int> out;
  for (const Face& f : d.faces().faces) out.push_back(f.degree);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("planar K3 has two triangular faces") {
  Drawing d = detail::make_triangle();
  CHECK(d.num_segments() == 3);
  CHECK(face_degrees(d) == std::vector<int>{3, 3});
}

TEST_CASE("plane K2,2 has two quadrilateral faces") {
  Drawing d = detail::make_plane_quad();
  CHECK(face_degrees(d) == std::vector<int>{4, 4});
}

TEST_CASE("crossed K2,2 planarization satisfies Euler's formula") {
  Drawing d = detail::make_crossed_quad();
  CHECK(d.vertices.size() == 5);
  CHECK(d.num_segments() == 6);
  CHECK(d.faces().faces.size() == 3);
  CHECK(face_degrees(d) == std::vector<int>{3, 3, 6});
}

TEST_CASE("dual neighbors of planar K3 point at the other face") {
  Drawing d = detail::make_triangle();
  FaceIndex fx = d.faces();
  REQUIRE(fx.faces.size() == 2);
  for (FaceId f = 0; f < 2; ++f) {
    auto nbrs = d.dual_neighbors(fx, f);
    REQUIRE(nbrs.size() == 3);
    for (auto& [seg, g] : nbrs) CHECK(g == 1 - f);
  }
  CHECK_THROWS_AS(d.dual_neighbors(fx, 7), ArgumentError);
}

TEST_CASE("a bridge reports the same face on both sides") {
  // Triangle with a pendant vertex attached to vertex 0.
  std::vector<Vertex> v(4);
  for (int i = 0; i < 4; ++i) v[i] = Vertex{VertexKind::Real, 0, static_cast<std::int16_t>(i)};
  std::vector<std::vector<VertexId>> rot = {{1, 2, 3}, {0, 2}, {0, 1}, {0}};
  std::vector<OriginalEdge> e(4);
  e[0].u = 0, e[0].w = 1;
  e[1].u = 0, e[1].w = 2;
  e[2].u = 1, e[2].w = 2;
  e[3].u = 0, e[3].w = 3;
  Drawing d = Drawing::from_rotations(GraphSpec::complete(4), v, rot, e);
  FaceIndex fx = d.faces();
  bool found_bridge = false;
  for (FaceId f = 0; f < static_cast<FaceId>(fx.faces.size()); ++f)
    for (auto& [seg, g] : d.dual_neighbors(fx, f)) found_bridge |= (g == f);
  CHECK(found_bridge);
}

TEST_CASE("dual neighbors are consistent with the face partition") {
  Drawing d = detail::make_crossed_quad();
  FaceIndex fx = d.faces();
  int total_entries = 0;
  for (FaceId f = 0; f < static_cast<FaceId>(fx.faces.size()); ++f) {
    auto nbrs = d.dual_neighbors(fx, f);
    CHECK(static_cast<int>(nbrs.size()) == fx.faces[f].degree);
    total_entries += static_cast<int>(nbrs.size());
    for (auto& [seg, g] : nbrs) {
      CHECK(g >= 0);
      CHECK(g < static_cast<FaceId>(fx.faces.size()));
    }
  }
  CHECK(total_entries == 2 * d.num_segments());
}

TEST_CASE("crossing-free insertion adds one vertex and one edge") {
  Drawing d = detail::make_triangle();
  std::size_t faces_before = d.faces().faces.size();
  GraphSpec grown = GraphSpec::complete(4);
  Drawing base = d;
  base.graph = grown;
  Drawing out = insert_edge_to_new_vertex(base, d.vertices[0].head, {}, 0, 3);
  out.validate();
  CHECK(out.vertices.size() == d.vertices.size() + 1);
  CHECK(out.edges.size() == d.edges.size() + 1);
  CHECK(out.num_crossing_vertices() == 0);
  CHECK(out.faces().faces.size() == faces_before);
}

TEST_CASE("crossing insertion splices the crossing into the crossed edge") {
  Drawing d = detail::make_triangle();
  Drawing base = d;
  base.graph = GraphSpec::complete(4);
  // Insert from a corner of vertex 0 across edge (1,2).
  EdgeId target_edge = 2;
  REQUIRE(base.edges[target_edge].u == 1);
  REQUIRE(base.edges[target_edge].w == 2);
  CornerId anchor = base.vertices[0].head;
  DartId seg = kInvalidId;
  for (DartId bd : base.walk_face(anchor))
    if (base.darts[bd].edge == target_edge) seg = bd;
  REQUIRE(seg != kInvalidId);
  Drawing out = insert_edge_to_new_vertex(base, anchor, {seg}, 0, 3);
  out.validate();
  CHECK(out.edges[target_edge].crossings.size() == 1);
  // Face count grows by the number of crossings for a new-vertex insertion.
  CHECK(out.faces().faces.size() == d.faces().faces.size() + 1);
  // Walking the crossed edge re-visits the recorded crossing in order.
  auto segs = out.walk_edge(target_edge);
  CHECK(segs.size() == 2);
}

TEST_CASE("edge insertion between existing vertices splits c+1 faces") {
  // K3 plus a pendant vertex v at vertex 0; then edge (v,1) drawn two ways.
  Drawing tri = detail::make_triangle();
  Drawing base = tri;
  base.graph = GraphSpec::complete(4);
  Drawing with_v = insert_edge_to_new_vertex(base, base.vertices[0].head, {}, 0, 3);
  VertexId v = 3;
  REQUIRE(with_v.vertices[v].kind == VertexKind::Real);
  std::size_t faces_before = with_v.faces().faces.size();

  // Crossing-free route: v and 1 share a face.
  CornerId v_corner = with_v.vertices[v].head;
  CornerId end = kInvalidId;
  for (DartId bd : with_v.walk_face(v_corner))
    if (with_v.darts[bd].origin == 1) end = bd;
  REQUIRE(end != kInvalidId);
  Drawing out = insert_edge_to_vertex(with_v, v_corner, {}, end);
  out.validate();
  CHECK(out.faces().faces.size() == faces_before + 1);

  // One-crossing route: cross edge (0,2), which is independent of (v,1).
  EdgeId e02 = 1;
  REQUIRE(with_v.edges[e02].u == 0);
  REQUIRE(with_v.edges[e02].w == 2);
  DartId seg = kInvalidId;
  for (DartId bd : with_v.walk_face(v_corner))
    if (with_v.darts[bd].edge == e02) seg = bd;
  if (seg != kInvalidId) {
    CurveBuilder cb = CurveBuilder::begin_to_target(with_v, v_corner, 1);
    cb = cb.crossed(seg);
    for (DartId bd : cb.destination_boundary())
      if (cb.drawing().darts[bd].origin == 1) {
        Drawing out2 = cb.finish_at_corner(bd);
        out2.validate();
        CHECK(out2.faces().faces.size() == faces_before + 2);
        CHECK(out2.num_crossing_vertices() == 1);
        break;
      }
  }
}

TEST_CASE("unrealizable curves are rejected") {
  Drawing d = detail::make_plane_quad();
  Drawing base = d;
  base.graph.b = 3;
  CornerId anchor = base.vertices[0].head;
  DartId seg = kInvalidId;
  for (DartId bd : base.walk_face(anchor))
    if (base.darts[bd].edge == 3) seg = bd;  // edge (1,3), independent of vertex 0
  REQUIRE(seg != kInvalidId);
  // Crossing one edge twice violates simplicity.
  CHECK_THROWS_AS(insert_edge_to_new_vertex(base, anchor, {seg, seg}, 1, 2), InvariantError);
  // Crossing an edge incident to the anchor violates simplicity.
  DartId adj = kInvalidId;
  for (DartId bd : base.walk_face(anchor))
    if (base.darts[bd].edge == 0) adj = bd;  // edge (0,2)
  REQUIRE(adj != kInvalidId);
  CHECK_THROWS_AS(insert_edge_to_new_vertex(base, anchor, {adj}, 1, 2), InvariantError);
  // A segment on the far side of the face is not reachable.
  CHECK_THROWS_AS(insert_edge_to_new_vertex(base, anchor, {base.darts[seg].twin}, 1, 2),
                  PathwayError);
}

TEST_CASE("serialization round-trips and preserves face degrees") {
  for (Drawing d : {detail::make_triangle(), detail::make_plane_quad(),
                    detail::make_crossed_quad()}) {
    std::ostringstream os;
    d.serialize(os, "1planar");
    std::istringstream is(os.str());
    auto parsed = parse_drawings(is);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].class_name == "1planar");
    CHECK(face_degrees(parsed[0].drawing) == face_degrees(d));
    std::ostringstream os2;
    parsed[0].drawing.serialize(os2, "1planar");
    CHECK(os2.str() == os.str());
  }
}

TEST_CASE("tampered records are rejected") {
  Drawing d = detail::make_crossed_quad();
  std::ostringstream os;
  d.serialize(os, "1planar");
  std::string text = os.str();
  // Remove one neighbor from the crossing vertex's rotation line.
  auto pos = text.find("rot 4");
  REQUIRE(pos != std::string::npos);
  auto eol = text.find('\n', pos);
  std::string line = text.substr(pos, eol - pos);
  line.resize(line.rfind(' '));
  std::string bad = text.substr(0, pos) + line + text.substr(eol);
  std::istringstream is(bad);
  CHECK_THROWS(parse_drawings(is));
}
