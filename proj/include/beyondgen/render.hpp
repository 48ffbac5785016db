#pragma once

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "beyondgen/embedding.hpp"

namespace beyondgen {

struct Point {
  double x = 0;
  double y = 0;
};

struct Layout {
  std::vector<Point> pos;  // per vertex of the planarization
  FaceId outer = kInvalidId;
};

namespace detail {

// Straight-segment endpoints of the rendered planarization.
inline std::vector<std::pair<VertexId, VertexId>> layout_segments(const Drawing& d) {
  std::vector<std::pair<VertexId, VertexId>> segs;
  for (DartId dart = 0; dart < static_cast<DartId>(d.darts.size()); ++dart)
    if (dart < d.darts[dart].twin)
      segs.emplace_back(d.darts[dart].origin, d.darts[d.darts[dart].twin].origin);
  return segs;
}

inline bool proper_intersection(Point a, Point b, Point c, Point d, double eps) {
  auto orient = [](Point p, Point q, Point r) {
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  };
  double d1 = orient(a, b, c), d2 = orient(a, b, d);
  double d3 = orient(c, d, a), d4 = orient(c, d, b);
  return ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
         ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps));
}

// True when the layout is a plane straight-line drawing: no coincident
// vertices (1e-9 of the bounding box) and no properly crossing segments
// (1e-6 of the bounding box).
inline bool layout_is_plane(const Drawing& d, const std::vector<Point>& pos) {
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const Point& p : pos) {
    lo_x = std::min(lo_x, p.x), hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y), hi_y = std::max(hi_y, p.y);
  }
  double box = std::max(hi_x - lo_x, hi_y - lo_y);
  if (box <= 0) return false;
  double coincide = 1e-9 * box;
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j)
      if (std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y) < coincide) return false;
  auto segs = layout_segments(d);
  double eps = 1e-6 * box;
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      auto [a, b] = segs[i];
      auto [c, e] = segs[j];
      if (a == c || a == e || b == c || b == e) continue;
      if (proper_intersection(pos[a], pos[b], pos[c], pos[e], eps)) return false;
    }
  return true;
}

// Barycentric relaxation with the outer cycle pinned to a regular polygon.
// `extra_adj` holds augmentation-only neighbors (face stellation). The
// averaging uses deterministic unequal weights: Tutte's guarantee allows any
// positive weights, and the asymmetry separates vertices with identical
// neighborhoods, which plain averaging would collapse onto one point.
inline std::vector<Point> relax(const Drawing& d, const std::vector<DartId>& outer_boundary,
                                const std::vector<std::vector<int>>& extra_adj, int extra_count) {
  const int n = static_cast<int>(d.vertices.size());
  std::vector<Point> pos(n + extra_count);
  std::vector<char> pinned(n + extra_count, 0);
  const int k = static_cast<int>(outer_boundary.size());
  for (int i = 0; i < k; ++i) {
    VertexId v = d.darts[outer_boundary[i]].origin;
    double ang = 2.0 * M_PI * i / k;
    pos[v] = {std::cos(ang), std::sin(ang)};
    pinned[v] = 1;
  }
  std::vector<std::vector<std::pair<int, double>>> adj(n + extra_count);
  auto weight = [](int v, int slot) {
    std::uint32_t h = (static_cast<std::uint32_t>(v) * 31u + static_cast<std::uint32_t>(slot)) *
                      2654435761u;
    return 1.0 + (h % 1024) / 1024.0;
  };
  for (VertexId v = 0; v < n; ++v) {
    int slot = 0;
    for (DartId dart : d.darts_at(v))
      adj[v].emplace_back(d.darts[d.darts[dart].twin].origin, weight(v, slot++));
  }
  for (int v = 0; v < n + extra_count && !extra_adj.empty(); ++v) {
    int slot = 100;
    for (int w : extra_adj[v]) adj[v].emplace_back(w, weight(v, slot++));
  }

  for (int iter = 0; iter < 3000; ++iter) {
    double moved = 0;
    for (int v = 0; v < n + extra_count; ++v) {
      if (pinned[v] || adj[v].empty()) continue;
      double sx = 0, sy = 0, sw = 0;
      for (auto& [w, wt] : adj[v]) {
        sx += wt * pos[w].x;
        sy += wt * pos[w].y;
        sw += wt;
      }
      Point np{sx / sw, sy / sw};
      moved += std::abs(np.x - pos[v].x) + std::abs(np.y - pos[v].y);
      pos[v] = np;
    }
    if (moved < 1e-13) break;
  }
  pos.resize(n);
  return pos;
}

}  // namespace detail

// Positions the planarization by a barycentric embedding with a chosen outer
// face pinned to a convex polygon. Faces with repeated boundary vertices
// cannot be pinned and are skipped as outer candidates. Falls back to a
// stellated augmentation (extra layout-only apex per face) before giving up.
inline Layout layout_drawing(const Drawing& d, FaceId face_choice = kInvalidId) {
  FaceIndex fx = d.faces();
  std::vector<FaceId> candidates;
  if (face_choice != kInvalidId) {
    if (face_choice < 0 || face_choice >= static_cast<FaceId>(fx.faces.size()))
      throw ArgumentError("unknown face id " + std::to_string(face_choice));
    candidates.push_back(face_choice);
  } else {
    candidates.resize(fx.faces.size());
    for (FaceId f = 0; f < static_cast<FaceId>(fx.faces.size()); ++f) candidates[f] = f;
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](FaceId a, FaceId b) { return fx.faces[a].degree > fx.faces[b].degree; });
  }

  auto simple_boundary = [&](FaceId f, std::vector<DartId>& boundary) {
    boundary = d.walk_face(fx.faces[f].start);
    std::vector<VertexId> seen;
    for (DartId dart : boundary) {
      VertexId v = d.darts[dart].origin;
      if (std::find(seen.begin(), seen.end(), v) != seen.end()) return false;
      seen.push_back(v);
    }
    return true;
  };

  for (bool augment : {false, true}) {
    for (FaceId f : candidates) {
      std::vector<DartId> boundary;
      if (!simple_boundary(f, boundary)) continue;
      std::vector<std::vector<int>> extra;
      int extra_count = 0;
      if (augment) {
        // One layout-only apex per inner face, joined to its corners.
        const int n = static_cast<int>(d.vertices.size());
        extra.resize(n);
        std::vector<std::vector<int>> apex_adj;
        for (FaceId g = 0; g < static_cast<FaceId>(fx.faces.size()); ++g) {
          if (g == f) continue;
          int apex = n + extra_count++;
          apex_adj.push_back({});
          for (DartId dart : d.walk_face(fx.faces[g].start)) {
            extra[d.darts[dart].origin].push_back(apex);
            apex_adj.back().push_back(d.darts[dart].origin);
          }
        }
        for (auto& a : apex_adj) extra.push_back(std::move(a));
      }
      std::vector<Point> pos = detail::relax(d, boundary, extra, extra_count);
      if (detail::layout_is_plane(d, pos)) return Layout{std::move(pos), f};
    }
  }
  throw InvariantError("no outer face admits a plane barycentric layout");
}

// Renders the drawing as an SVG document: labeled disks for real vertices,
// small markers for crossings, one polyline per original edge through its
// crossings in order.
inline std::string render_svg(const Drawing& d, FaceId face_choice = kInvalidId) {
  Layout layout = layout_drawing(d, face_choice);
  const double size = 640, margin = 48;
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const Point& p : layout.pos) {
    lo_x = std::min(lo_x, p.x), hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y), hi_y = std::max(hi_y, p.y);
  }
  double scale = (size - 2 * margin) / std::max(hi_x - lo_x, hi_y - lo_y);
  auto tx = [&](Point p) {
    return Point{margin + (p.x - lo_x) * scale, margin + (p.y - lo_y) * scale};
  };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << size << ' ' << size
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (EdgeId e = 0; e < static_cast<EdgeId>(d.edges.size()); ++e) {
    const OriginalEdge& oe = d.edges[e];
    os << "<polyline class=\"edge\" fill=\"none\" stroke=\"#335\" stroke-width=\"1.4\" points=\"";
    Point p = tx(layout.pos[oe.u]);
    os << p.x << ',' << p.y;
    for (VertexId x : oe.crossings) {
      p = tx(layout.pos[x]);
      os << ' ' << p.x << ',' << p.y;
    }
    p = tx(layout.pos[oe.w]);
    os << ' ' << p.x << ',' << p.y << "\"/>\n";
  }
  for (VertexId v = 0; v < static_cast<VertexId>(d.vertices.size()); ++v) {
    Point p = tx(layout.pos[v]);
    const Vertex& vx = d.vertices[v];
    if (vx.kind == VertexKind::Crossing) {
      os << "<circle class=\"crossing\" cx=\"" << p.x << "\" cy=\"" << p.y
         << "\" r=\"2.2\" fill=\"#c33\"/>\n";
    } else {
      std::string label = detail::side_letter(vx.side) + std::to_string(vx.index);
      os << "<circle class=\"vertex\" cx=\"" << p.x << "\" cy=\"" << p.y
         << "\" r=\"9\" fill=\"#fff\" stroke=\"#000\" stroke-width=\"1.2\"/>\n";
      os << "<text x=\"" << p.x << "\" y=\"" << p.y + 3.5
         << "\" font-size=\"9\" text-anchor=\"middle\" font-family=\"sans-serif\">" << label
         << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace beyondgen
