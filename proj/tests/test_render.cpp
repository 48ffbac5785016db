#include <catch2/catch_amalgamated.hpp>

#include "beyondgen/generator.hpp"
#include "beyondgen/render.hpp"

using namespace beyondgen;

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("planar K2,2 renders without crossing markers") {
  std::string svg = render_svg(detail::make_plane_quad());
  CHECK(count_occurrences(svg, "class=\"vertex\"") == 4);
  CHECK(count_occurrences(svg, "class=\"crossing\"") == 0);
  CHECK(count_occurrences(svg, "class=\"edge\"") == 4);
}

TEST_CASE("crossed K2,2 renders exactly one crossing marker") {
  std::string svg = render_svg(detail::make_crossed_quad());
  CHECK(count_occurrences(svg, "class=\"vertex\"") == 4);
  CHECK(count_occurrences(svg, "class=\"crossing\"") == 1);
}

TEST_CASE("the planar triangle renders three straight edges") {
  std::string svg = render_svg(detail::make_triangle());
  CHECK(count_occurrences(svg, "class=\"vertex\"") == 3);
  CHECK(count_occurrences(svg, "class=\"edge\"") == 3);
  CHECK(count_occurrences(svg, "class=\"crossing\"") == 0);
}

TEST_CASE("layouts are plane straight-line drawings of the planarization") {
  // Every 1-planar K6 representative must pass the intersection audit.
  GraphSpec k6 = GraphSpec::parse("K6");
  ClassSpec one = ClassSpec::parse("1planar");
  auto run = generate_all(k6, one, InsertionSchedule::default_for(k6), {});
  REQUIRE(run.final_set.drawings.size() == 1);
  for (const Drawing& d : run.final_set.drawings) {
    Layout layout = layout_drawing(d);
    CHECK(detail::layout_is_plane(d, layout.pos));
    // Marker count: each edge polyline passes at most one crossing.
    for (EdgeId e = 0; e < static_cast<EdgeId>(d.edges.size()); ++e)
      CHECK(d.edges[e].crossings.size() <= 1);
    std::string svg = render_svg(d);
    CHECK(count_occurrences(svg, "class=\"vertex\"") == 6);
    CHECK(count_occurrences(svg, "class=\"crossing\"") == d.num_crossing_vertices());
  }
}

TEST_CASE("a requested outer face is honored or rejected") {
  Drawing d = detail::make_plane_quad();
  Layout layout = layout_drawing(d, 1);
  CHECK(layout.outer == 1);
  CHECK_THROWS_AS(layout_drawing(d, 99), ArgumentError);
}
