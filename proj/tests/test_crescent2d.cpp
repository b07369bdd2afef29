#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <map>
#include <set>
#include <tuple>

#include "mkcx/crescent2d.hpp"
#include "mkcx/generators.hpp"
#include "crescent_oracle.hpp"

using namespace mkcx;
using namespace mkcx::test;

namespace {

const Curvature H = Curvature::hyperbolic();

// Folding number by straight generic rays: points z of the convex hull of
// the crescent's alpha-part are reached from random I-part points; the count
// is the number of polygon edges crossed, minimised over rays and maximised
// over z.
int ray_folding(const Crescent2D& c, const HPolygon& poly, std::mt19937_64& rng, int rays = 1000) {
  std::vector<Chart2> chain;
  for (auto i : c.alpha(poly.size())) chain.push_back(poly[i]);
  const auto hull = convex_hull(chain);
  double lo_x = 1, hi_x = -1, lo_y = 1, hi_y = -1;
  for (auto p : hull) lo_x = std::min(lo_x, p.x), hi_x = std::max(hi_x, p.x), lo_y = std::min(lo_y, p.y), hi_y = std::max(hi_y, p.y);
  std::uniform_real_distribution<double> ux(lo_x, hi_x), uy(lo_y, hi_y), ut(0.01, 0.99);
  const Chart2 a = poly[c.start], b = poly[c.end];
  Chart2 mid{0, 0};
  for (auto p : hull) mid = {mid.x + p.x / hull.size(), mid.y + p.y / hull.size()};
  // Sources sit just inside the hull so that rays never run along the lid.
  std::vector<Chart2> src;
  for (int i = 0; i < 60; ++i) {
    const double t = ut(rng);
    const Chart2 s{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    src.push_back({s.x + 1e-7 * (mid.x - s.x), s.y + 1e-7 * (mid.y - s.y)});
  }
  int best = 0;
  for (int r = 0; r < rays; ++r) {
    Chart2 z{ux(rng), uy(rng)};
    if (!inside(hull, z)) continue;
    int m = 1 << 20;
    for (auto s : src) {
      int k = 0;
      for (std::size_t e = 0; e < poly.size(); ++e)
        if (proper_cross(s, z, poly[e], poly[poly.next(e)])) ++k;
      m = std::min(m, k);
    }
    best = std::max(best, m);
  }
  return best;
}

// Closed-form distance from the midpoint of the lid to the isosceles notch
// of the notched square (apex on the perpendicular bisector).
double notch_size_oracle(const HPolygon& p) {
  const ModelPoint A = p.point(2), B = p.point(4), C = p.point(3);
  const double half = dist(A, B) / 2;
  const ModelPoint M = geodesic_point(A, B, 0.5);
  const double angle_a = tangent_angle(A, B, C);
  // Right triangle with hypotenuse half: sinh(d) = sinh(half) sin(A).
  const double d = std::asinh(std::sinh(half) * std::sin(angle_a));
  const double foot_from_a = std::atanh(std::tanh(half) * std::cos(angle_a));
  return foot_from_a <= dist(A, C) ? d : dist(M, C);
}

} // namespace

TEST_CASE("polygon basics") {
  CHECK_THROWS_AS(HPolygon::from_chart({{0, 0}, {0.1, 0}}), Error);
  try {
    HPolygon::from_chart({{0, 0}, {0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}});
    FAIL("expected degenerate polygon");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegeneratePolygon);
  }
  CHECK_THROWS_AS(HPolygon::from_chart({{0, 0}, {1.2, 0}, {0, 0.5}}), Error);
  auto cw = HPolygon::from_chart({{0, 0}, {0, 0.5}, {0.5, 0}});
  CHECK(cw.reoriented());
  CHECK(cw.signed_chart_area() > 0);
  CHECK(cw[0].x == 0.0);
  CHECK(cw.is_convex());
  CHECK(cw.is_simple());

  // Area of a triangle against the angle-defect formula.
  const double a = dist(cw.point(1), cw.point(2)), b = dist(cw.point(0), cw.point(2)),
               c = dist(cw.point(0), cw.point(1));
  CHECK(std::abs(cw.area() - triangle_area({a, b, c, H})) < 1e-12);
  auto notched = gen::notched_square(0.2);
  CHECK_FALSE(notched.is_convex());
  CHECK(notched.is_simple());
  CHECK(notched.area() < HPolygon::from_chart({{-0.4, -0.4}, {0.4, -0.4}, {0.4, 0.4}, {-0.4, 0.4}}).area());
  CHECK_FALSE(HPolygon::from_chart({{0, 0}, {0.3, 0.3}, {0.3, 0}, {0, 0.3}}).is_simple());
}

TEST_CASE("point_segment_distance against sampling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int i = 0; i < 200; ++i) {
    const ModelPoint x = from_chart(H, {u(rng), u(rng)}), a = from_chart(H, {u(rng), u(rng)}),
                     b = from_chart(H, {u(rng), u(rng)});
    double brute = 1e300;
    for (int k = 0; k <= 20000; ++k) brute = std::min(brute, dist(x, geodesic_point(a, b, k / 20000.0)));
    const double d = point_segment_distance(x, a, b);
    CHECK(d <= brute + 1e-12);
    CHECK(brute - d < 1e-6 * (1 + dist(a, b)));
  }
}

TEST_CASE("find_crescents examples") {
  CHECK(find_crescents(HPolygon::from_chart({{-0.3, -0.3}, {0.3, -0.3}, {0.3, 0.3}, {-0.3, 0.3}})).empty());

  auto notched = gen::notched_square(0.2);
  auto cs = find_crescents(notched);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].start == 2);
  CHECK(cs[0].end == 4);
  CHECK(cs[0].folding == 0);
  CHECK(cs[0].side == CrescentSide::Outer);
  CHECK(oracle_pockets(notched) == found_pockets(notched));

  std::mt19937_64 rng(11);
  // One boundary passage inside the notch hull.
  auto bump = gen::bumped_notch();
  auto bc = find_crescents(bump);
  REQUIRE(bc.size() == 2);
  CHECK(bc.back().folding == 1);
  CHECK(bc.back().side == CrescentSide::Outer);
  CHECK(bc.front().side == CrescentSide::Inner);
  CHECK(bc.front().parent == 1);
  CHECK(ray_folding(bc.back(), bump, rng) == 1);
  CHECK(ray_folding(bc.front(), bump, rng) == 0);
  CHECK(oracle_pockets(bump) == found_pockets(bump));

  auto hook = gen::hooked_polygon(1);
  auto hc = find_crescents(hook);
  REQUIRE(hc.size() == 3);
  CHECK(hc.back().folding == 1);
  CHECK(hc.back().parent == -1);
  CHECK(hc[0].side == CrescentSide::Inner);
  CHECK(hc[0].parent == 2);
  CHECK(oracle_pockets(hook) == found_pockets(hook));

  // Two nested passages.
  auto hook2 = gen::hooked_polygon(2);
  auto h2 = find_crescents(hook2);
  REQUIRE(h2.size() == 4);
  CHECK(h2.back().folding == 2);
  CHECK(ray_folding(h2.back(), hook2, rng) == 2);
  CHECK(oracle_pockets(hook2) == found_pockets(hook2));
  for (const auto& c : h2) CHECK(folding_number(c, hook2) == c.folding);
  // Sorted by folding number, then start index.
  for (std::size_t i = 1; i < h2.size(); ++i)
    CHECK(std::make_pair(h2[i - 1].folding, h2[i - 1].start) <= std::make_pair(h2[i].folding, h2[i].start));
}

TEST_CASE("find_crescents agrees with the exhaustive pocket oracle") {
  int pocketed = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    auto p = gen::random_pocketed_polygon(seed, 5 + seed % 8);
    const auto found = found_pockets(p);
    CHECK(found == oracle_pockets(p));
    for (const auto& c : find_crescents(p)) CHECK(folding_number(c, p) == c.folding);
    pocketed += !found.empty();
  }
  CHECK(pocketed > 200);
}

TEST_CASE("folding number against the ray oracle on random polygons") {
  std::mt19937_64 rng(19);
  int agree = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto p = gen::random_pocketed_polygon(seed, 8 + seed % 5);
    for (const auto& c : find_crescents(p)) {
      ++total;
      const int r = ray_folding(c, p, rng, 300);
      agree += r == c.folding;
    }
  }
  MESSAGE("ray oracle agreement " << agree << "/" << total);
  CHECK(agree >= total * 9 / 10);
}

TEST_CASE("classify_pair examples") {
  auto bowl = gen::bowl_polygon();
  auto a = make_crescent(bowl, 1, 3), b = make_crescent(bowl, 2, 4);
  CHECK(a.side == CrescentSide::Outer);
  CHECK(classify_pair(a, b, bowl) == PairRelation::Transversal);
  CHECK(classify_pair(b, a, bowl) == PairRelation::Transversal);
  auto whole = make_crescent(bowl, 1, 4);
  CHECK(classify_pair(a, whole, bowl) == PairRelation::Nested);
  // Chords through the hook's upper arm are not crescents.
  CHECK_THROWS_AS(make_crescent(gen::hooked_polygon(1), 3, 10), Error);

  // Pockets at opposite ends of a long polygon.
  auto lng = HPolygon::from_chart({{-0.8, -0.1}, {-0.6, 0.0}, {-0.4, -0.1}, {0.4, -0.1}, {0.6, 0.0}, {0.8, -0.1},
                                   {0.8, 0.1}, {-0.8, 0.1}});
  auto ends = find_crescents(lng);
  REQUIRE(ends.size() == 2);
  CHECK(classify_pair(ends[0], ends[1], lng) == PairRelation::Disjoint);

  auto hook2 = gen::hooked_polygon(2);
  auto h2 = find_crescents(hook2);
  const Crescent2D& top = h2.back();
  for (const auto& c : h2) {
    if (&c == &top) continue;
    if (c.side == CrescentSide::Inner) {
      try {
        classify_pair(c, top, hook2);
        FAIL("expected unsupported");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Unsupported);
      }
    } else {
      // Sub-pocket inside the pocket: region containment oracle.
      CHECK(classify_pair(c, top, hook2) == PairRelation::Nested);
      const auto inner = crescent_region(c, hook2), outer = crescent_region(top, hook2);
      Chart2 centroid{0, 0};
      for (auto p : inner) centroid = {centroid.x + p.x / inner.size(), centroid.y + p.y / inner.size()};
      CHECK(inside(convex_hull(outer), centroid));
    }
  }
}

TEST_CASE("crescent_move") {
  auto notched = gen::notched_square(0.2);
  auto moved = crescent_move(notched, find_crescents(notched));
  CHECK(moved.size() == 4);
  CHECK(moved.is_convex());
  CHECK(moved.area() > notched.area());

  auto square = HPolygon::from_chart({{-0.3, -0.3}, {0.3, -0.3}, {0.3, 0.3}, {-0.3, 0.3}});
  CHECK(crescent_move(square, {}).chart().size() == 4);

  auto bowl = gen::bowl_polygon();
  auto a = make_crescent(bowl, 1, 3), b = make_crescent(bowl, 2, 4);
  try {
    crescent_move(bowl, {a, b});
    FAIL("expected overlap-closure rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotOverlapClosed);
    CHECK(std::string(e.what()).find("(1,4)") != std::string::npos);
  }
  auto union_move = crescent_move(bowl, {a, b, make_crescent(bowl, 1, 4)});
  // Union-hull oracle: the hull of the union of both crescent regions joined
  // to the rest of the polygon is the rectangle.
  auto ra = crescent_region(a, bowl), rb = crescent_region(b, bowl);
  std::vector<Chart2> pts = ra;
  pts.insert(pts.end(), rb.begin(), rb.end());
  auto uh = convex_hull(pts);
  for (auto p : union_move.chart()) CHECK(std::abs(orient(bowl[1], bowl[4], p)) > -1e-15);
  CHECK(union_move.size() == 4);
  for (auto p : uh) CHECK(union_move.contains(p, 1e-12));
  CHECK(union_move.is_convex());
}

TEST_CASE("crescent_size") {
  for (double depth : {0.02, 0.1, 0.2, 0.35}) {
    auto p = gen::notched_square(depth);
    auto c = find_crescents(p).at(0);
    const double bound = crescent_size_bound(c, p);
    CHECK(bound > 0);
    CHECK(std::abs(c.size - notch_size_oracle(p)) <= bound + 1e-12);
  }
  auto shallow = gen::notched_square(0.01);
  const double depth = dist(geodesic_point(shallow.point(2), shallow.point(4), 0.5), shallow.point(3));
  CHECK(std::abs(find_crescents(shallow)[0].size - depth) < 0.05 * depth);
  CHECK(find_crescents(gen::notched_square(0.1))[0].size < find_crescents(gen::notched_square(0.2))[0].size);
  Crescent2D edge;
  edge.start = 0;
  edge.end = 1;
  CHECK(crescent_size(edge, shallow) == 0.0);
}

TEST_CASE("two_convex_hull examples") {
  auto square = HPolygon::from_chart({{-0.3, -0.3}, {0.3, -0.3}, {0.3, 0.3}, {-0.3, 0.3}});
  auto same = two_convex_hull(square, {{{0, 0}, {0.1, 0.1}}});
  CHECK(same.trace.empty());
  CHECK(same.polygon.chart().size() == 4);

  auto notched = gen::notched_square(0.2);
  MarkedGeodesic mouth{{0.4, 0.4}, {-0.4, 0.4}};
  auto r = two_convex_hull(notched, {mouth}, 1e-12);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].max_folding == 0);
  CHECK(r.polygon.size() == 4);
  CHECK(r.max_marked_distance <= 1e-12);

  auto bh = two_convex_hull(gen::bumped_notch(), {});
  REQUIRE(bh.trace.size() == 2);
  CHECK(bh.trace[0].max_folding == 1);
  CHECK(bh.trace[1].max_folding == 0);
  CHECK(bh.polygon.size() == 4);
  for (int levels : {1, 2}) {
    auto hook = gen::hooked_polygon(levels);
    auto h = two_convex_hull(hook, {});
    REQUIRE(h.trace.size() == static_cast<std::size_t>(levels + 1));
    for (int i = 0; i <= levels; ++i) CHECK(h.trace[i].max_folding == levels - i);
    CHECK(h.polygon.is_convex());
    CHECK(find_crescents(h.polygon).empty());
  }

  // A mark inside the hook's inner lobe meets a crescent interior.
  auto hook = gen::hooked_polygon(1);
  const Chart2 lobe{0.12 * (5.3 - 3), 0.12 * (1.8 - 3)};
  try {
    two_convex_hull(hook, {{lobe, lobe}});
    FAIL("expected incompressibility error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Incompressibility);
    CHECK(std::string(e.what()).find("crescent(") != std::string::npos);
  }
  CHECK_THROWS_AS(two_convex_hull(hook, {}, 0.0), Error);
}

TEST_CASE("two_convex_hull properties on random pocketed polygons") {
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto p = gen::random_pocketed_polygon(seed * 7919, 5 + seed % 8);
    auto marks = random_safe_marks(p, rng, 4);
    auto r = two_convex_hull(p, marks);
    // Output is convex and equals the hull of the input.
    CHECK(find_crescents(r.polygon).empty());
    auto hull = convex_hull(p.chart());
    CHECK(r.polygon.size() == hull.size());
    for (auto v : p.chart()) CHECK(r.polygon.contains(v, 1e-12));
    // Level monotonicity.
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].max_folding < r.trace[i - 1].max_folding);
    if (!r.trace.empty()) CHECK(r.trace.back().max_folding == 0);
    // Marked safety after every move.
    for (const auto& it : r.trace) CHECK(it.max_marked_distance <= kDefaultEpsilon);
    // Idempotence.
    auto again = two_convex_hull(r.polygon, marks);
    CHECK(again.trace.empty());
    REQUIRE(again.polygon.size() == r.polygon.size());
    for (std::size_t i = 0; i < r.polygon.size(); ++i) {
      CHECK(std::abs(again.polygon[i].x - r.polygon[i].x) <= 1e-10);
      CHECK(std::abs(again.polygon[i].y - r.polygon[i].y) <= 1e-10);
    }
  }
}
