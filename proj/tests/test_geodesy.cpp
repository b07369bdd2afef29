#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "mkcx/generators.hpp"
#include "mkcx/geodesy.hpp"
#include "test_util.hpp"

using namespace mkcx;

namespace {

const Curvature H = Curvature::hyperbolic();

ComplexPoint labelled(const MkComplex& cx, const std::string& label) {
  for (int s = 0; s < cx.simplex_count(); ++s)
    for (int i = 0; i < 3; ++i)
      if (cx.simplex(s).labels[i] == label) return vertex_point(s, i);
  throw std::runtime_error("no vertex " + label);
}

// Point of triangle s on the geodesic from local corner a towards corner b
// at the given fraction of the side.
ComplexPoint on_side(const MkComplex& cx, int s, int a, int b, double f) {
  const auto& P = cx.placement(s);
  return {s, barycentric_in(P, geodesic_point(P[a], P[b], f))};
}

// Euclidean position of a point of flat_grid(.., .., 1).
std::array<double, 2> grid_xy(const MkComplex& cx, const ComplexPoint& p) {
  std::array<double, 2> xy{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    const std::string& l = cx.simplex(p.simplex).labels[i];
    const auto us = l.find('_');
    xy[0] += p.bary[i] * std::stod(l.substr(1, us - 1));
    xy[1] += p.bary[i] * std::stod(l.substr(us + 1));
  }
  return xy;
}

ComplexPoint random_point(const MkComplex& cx, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int> S(0, cx.simplex_count() - 1);
  const double a = -std::log(1.0 - U(rng)), b = -std::log(1.0 - U(rng)), c = -std::log(1.0 - U(rng));
  return {S(rng), {a / (a + b + c), b / (a + b + c), c / (a + b + c)}};
}

ComplexPath concat(const MkComplex& cx, const std::vector<ComplexPath>& parts) {
  std::vector<Waypoint> w;
  for (const auto& p : parts)
    for (const auto& x : p.waypoints()) {
      if (!w.empty() && w.back().point.simplex == x.point.simplex &&
          w.back().point.bary == x.point.bary)
        continue;
      w.push_back(x);
    }
  return ComplexPath(cx, std::move(w));
}

} // namespace

TEST_CASE("complex paths validate their hops") {
  auto cx = gen::flat_grid(2, 2, 1.0);
  CHECK_THROWS_AS(ComplexPath(cx, {{ComplexPoint{0, {0.5, 0.6, 0.0}}}, {centroid_point(0)}}),
                  Error);
  // Centroids of different triangles are not one point.
  CHECK_THROWS_AS(ComplexPath(cx, {{centroid_point(0)}, {centroid_point(1)}}), Error);
  CHECK_THROWS_AS(ComplexPath(cx, {{ComplexPoint{42, {1, 0, 0}}}}), Error);

  ComplexPath p(cx, {{vertex_point(0, 0)}, {vertex_point(0, 2)}, {vertex_point(1, 1)},
                     {vertex_point(1, 2)}});
  CHECK(p.hop_face(0) == -1);
  CHECK(p.hop_face(1) >= 0);
  CHECK(p.length() == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-14));
  const auto mid = grid_xy(cx, p.at(0.5));
  CHECK(std::hypot(mid[0], mid[1]) == doctest::Approx(0.5 * (std::sqrt(2.0) + 1.0)).epsilon(1e-12));
  CHECK(p.reversed().length() == doctest::Approx(p.length()).epsilon(1e-15));
  CHECK(p.sample(8).size() == 9);
}

TEST_CASE("straightening within a single triangle") {
  auto cx = gen::open_fan(H, 1, 1.0);
  ComplexPath two_sides(cx, {{vertex_point(0, 1)}, {vertex_point(0, 0)}, {vertex_point(0, 2)}});
  CHECK(two_sides.length() == doctest::Approx(2.0).epsilon(1e-14));
  auto g = straighten_path(two_sides);
  CHECK(g.length() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(breakpoint_angles(g).empty());
}

TEST_CASE("cone geodesics against the unfolding oracle") {
  const double leg = 1.5, r = 0.75;
  SUBCASE("cone angle below 2 pi: geodesics avoid the apex") {
    const double total = kTwoPi - 0.5;
    auto cx = gen::cone(H, 8, leg, total);
    const ComplexPoint p = on_side(cx, 0, 0, 1, r / leg), q = on_side(cx, 3, 0, 1, r / leg);
    const double phi = 3 * total / 8;
    const double chord = std::acosh(std::cosh(r) * std::cosh(r) - std::sinh(r) * std::sinh(r) * std::cos(phi));
    // Around the apex through the corners: a polygonal start path.
    ComplexPath through(cx, {{p}, {vertex_point(0, 0)}, {vertex_point(1, 0)}, {vertex_point(2, 0)},
                             {vertex_point(3, 0)}, {q}});
    CHECK(through.length() == doctest::Approx(2 * r).epsilon(1e-12));
    auto g = straighten_path(through);
    CHECK(g.length() == doctest::Approx(chord).epsilon(1e-10));
    auto cands = geodesic_candidates(cx, p, q);
    REQUIRE(cands.size() >= 1);
    auto best = shortest_geodesic(cx, p, q);
    CHECK(best.length() == doctest::Approx(chord).epsilon(1e-10));
    CHECK(path_hausdorff(best, g) <= 1e-9);
  }
  SUBCASE("cone angle above 2 pi: the geodesic passes the apex") {
    const double total = kTwoPi + 0.5;
    auto cx = gen::cone(H, 8, leg, total);
    const ComplexPoint p = on_side(cx, 0, 0, 1, r / leg), q = on_side(cx, 4, 0, 1, r / leg);
    auto g = shortest_geodesic(cx, p, q);
    CHECK(g.length() == doctest::Approx(2 * r).epsilon(1e-10));
    auto bp = breakpoint_angles(g);
    REQUIRE(bp.size() == 1);
    // Both sides of the apex carry half the cone angle.
    CHECK(bp[0].left == doctest::Approx(total / 2).epsilon(1e-9));
    CHECK(bp[0].right == doctest::Approx(total / 2).epsilon(1e-9));
    CHECK(std::min(bp[0].left, bp[0].right) >= kPi - 1e-9);
  }
}

TEST_CASE("flat grid distances are Euclidean") {
  auto cx = gen::flat_grid(4, 3, 1.0);
  std::mt19937_64 rng(11);
  for (int n = 0; n < 60; ++n) {
    const ComplexPoint p = random_point(cx, rng), q = random_point(cx, rng);
    const auto a = grid_xy(cx, p), b = grid_xy(cx, q);
    CHECK(complex_distance(cx, p, q) == doctest::Approx(std::hypot(a[0] - b[0], a[1] - b[1])).epsilon(1e-10));
  }
  // A staircase along grid edges straightens to the diagonal.
  std::vector<ComplexPath> steps;
  const char* corners[] = {"g0_0", "g1_0", "g1_1", "g2_1", "g2_2"};
  for (int i = 0; i < 4; ++i)
    steps.push_back(shortest_geodesic(cx, labelled(cx, corners[i]), labelled(cx, corners[i + 1])));
  ComplexPath stair = concat(cx, steps);
  CHECK(stair.length() == doctest::Approx(4.0).epsilon(1e-14));
  auto g = straighten_path(stair);
  CHECK(g.length() == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(g.length() <= stair.length());
}

TEST_CASE("seed agreement on a CAT(-1) disk") {
  auto cx = gen::regular_disk(H, 7, 2, 1.0);
  std::mt19937_64 rng(3);
  for (int n = 0; n < 20; ++n) {
    const ComplexPoint p = random_point(cx, rng), q = random_point(cx, rng);
    auto cands = geodesic_candidates(cx, p, q, 5);
    REQUIRE(!cands.empty());
    auto best = shortest_geodesic(cx, p, q);
    for (const auto& c : cands) {
      CHECK(c.length() == doctest::Approx(best.length()).epsilon(1e-9));
      CHECK(path_hausdorff(c, best) <= 1e-7);
    }
    // Geodesics through vertices bend only where both sides reach pi.
    for (const auto& bp : breakpoint_angles(best))
      CHECK(std::min(bp.left, bp.right) >= kPi - 1e-8);
  }
  CHECK(complex_distance(cx, centroid_point(0), centroid_point(0)) == 0.0);
}

TEST_CASE("spherical complexes are not supported") {
  auto cap = gen::equilateral_cone(Curvature::spherical(), 5, 0.5);
  try {
    shortest_geodesic(cap, centroid_point(0), centroid_point(2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedCurvature);
  }
}

TEST_CASE("disconnected endpoints are reported") {
  auto a = gen::open_fan(H, 1, 1.0);
  std::vector<MetricSimplex> ss{a.simplex(0), a.simplex(0)};
  ss[1].id = "u";
  auto two = build_complex(H, ss, {});
  try {
    shortest_geodesic(two, centroid_point(0), centroid_point(1));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Disconnected);
  }
}

TEST_CASE("closed geodesics on a flat cylinder") {
  auto cx = gen::flat_cylinder(6, 6.0, 3.0);
  // Centroids of lower (even) and upper (odd) triangles, winding once.
  std::vector<ComplexPath> legs;
  const int order[] = {0, 5, 8, 0};
  for (int i = 0; i < 3; ++i)
    legs.push_back(shortest_geodesic(cx, centroid_point(order[i]), centroid_point(order[i + 1])));
  ComplexPath loop = concat(cx, legs);
  CHECK(loop.length() > 6.0 + 1e-3);
  auto tight = tighten_closed(loop);
  REQUIRE(tight.loop.has_value());
  CHECK_FALSE(tight.contracted);
  CHECK(tight.length == doctest::Approx(6.0).epsilon(1e-9));
  for (std::size_t i = 1; i < tight.length_history.size(); ++i)
    CHECK(tight.length_history[i] <= tight.length_history[i - 1] + 1e-12);

  // A null-homotopic loop contracts.
  std::vector<ComplexPath> small;
  const int tri[] = {0, 1, 3, 0};
  for (int i = 0; i < 3; ++i)
    small.push_back(shortest_geodesic(cx, centroid_point(tri[i]), centroid_point(tri[i + 1])));
  auto c = tighten_closed(concat(cx, small));
  CHECK(c.contracted);
  CHECK_FALSE(c.loop.has_value());
}

TEST_CASE("alpha-nets are h-maps") {
  auto grid = gen::flat_grid(4, 4, 1.0);
  auto alpha = shortest_geodesic(grid, labelled(grid, "g0_0"), labelled(grid, "g4_0"));
  auto beta = shortest_geodesic(grid, labelled(grid, "g0_4"), labelled(grid, "g4_4"));
  auto net = build_alpha_net(grid, alpha, beta, 5);
  const auto& S = net.surface.surface();
  CHECK(S.area() == doctest::Approx(16.0).epsilon(1e-12));
  for (int v = 0; v < S.vertex_count(); ++v)
    if (!S.is_boundary(v)) CHECK(S.angle_sum(v) == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(gauss_bonnet_audit(S) <= 1e-9);
  CHECK(h_area_bound_check(net.surface) >= -1e-9);
  CHECK(net.rails.size() == 5);
  CHECK(adjacent_rail_gap(net) == doctest::Approx(1.0).epsilon(1e-9));

  // From a point: a fan over the opposite side of a triangle.
  auto fan = gen::open_fan(H, 1, 1.0);
  auto side = shortest_geodesic(fan, vertex_point(0, 1), vertex_point(0, 2));
  auto pnet = build_alpha_net(fan, vertex_point(0, 0), side, 4);
  CHECK(pnet.alpha_is_point);
  const double tri_area = kPi - 3 * test::equilateral_angle_h(1.0);
  CHECK(pnet.surface.surface().area() <= tri_area + 1e-12);
  CHECK(h_area_bound_check(pnet.surface) >= -1e-9);

  // Across a cone point of angle 2 pi + 1 the net picks up the excess.
  auto cone = gen::cone(H, 8, 1.5, kTwoPi + 1.0);
  auto al = shortest_geodesic(cone, {0, {0, 0.5, 0.5}}, {1, {0, 0.5, 0.5}});
  auto be = shortest_geodesic(cone, {5, {0, 0.5, 0.5}}, {4, {0, 0.5, 0.5}});
  auto cnet = build_alpha_net(cone, al, be, 6);
  CHECK(gauss_bonnet_audit(cnet.surface.surface()) <= 1e-9);
  CHECK(h_area_bound_check(cnet.surface) >= -1e-9);

  const int n = refine_rail_count(grid, alpha, beta, 3, 0.3, 64);
  CHECK(n >= 5);
  CHECK(n <= 64);
}

TEST_CASE("h-map realization") {
  SUBCASE("single triangle") {
    auto fan = gen::open_fan(H, 1, 1.0);
    HMapInput in;
    in.positions = {vertex_point(0, 0), vertex_point(0, 1), vertex_point(0, 2)};
    in.triangles = {{0, 1, 2}};
    in.distinguished = {0, 1, 2};
    auto r = realize_h_map(fan, in);
    const double tri_area = kPi - 3 * test::equilateral_angle_h(1.0);
    CHECK(r.surface.surface().area() == doctest::Approx(tri_area).epsilon(1e-9));
    CHECK(h_area_bound_check(r.surface) >= -1e-9);
  }
  SUBCASE("annulus on a cylinder") {
    auto cy = gen::flat_cylinder(6, 6.0, 3.0);
    HMapInput in;
    const int n = 6;
    for (int i = 0; i < n; ++i) in.positions.push_back({2 * i, {0.5, 0.3, 0.2}});
    for (int i = 0; i < n; ++i) in.positions.push_back({2 * i + 1, {0.2, 0.3, 0.5}});
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      in.triangles.push_back({i, j, n + i});
      in.triangles.push_back({j, n + j, n + i});
    }
    in.subdivisions = 3;
    auto r = realize_h_map(cy, in);
    CHECK(r.surface.surface().euler_characteristic() == 0);
    CHECK(gauss_bonnet_audit(r.surface.surface()) <= 1e-9);
    CHECK(h_area_bound_check(r.surface) >= -1e-9);
  }
  SUBCASE("disk in a flat grid") {
    auto grid = gen::flat_grid(4, 4, 1.0);
    HMapInput d;
    d.positions = {{0, {0.6, 0.3, 0.1}}, {6, {0.3, 0.4, 0.3}}, {30, {0.5, 0.2, 0.3}},
                   {25, {0.2, 0.2, 0.6}}};
    d.triangles = {{0, 1, 2}, {0, 2, 3}};
    d.distinguished = {0, 1, 2, 3};
    auto r = realize_h_map(grid, d);
    // The image quadrilateral's Euclidean area.
    std::array<std::array<double, 2>, 4> q;
    for (int i = 0; i < 4; ++i) q[i] = grid_xy(grid, d.positions[i]);
    double shoelace = 0.0;
    for (int i = 0; i < 4; ++i)
      shoelace += q[i][0] * q[(i + 1) % 4][1] - q[(i + 1) % 4][0] * q[i][1];
    CHECK(r.surface.surface().area() == doctest::Approx(0.5 * std::abs(shoelace)).epsilon(1e-9));
    CHECK(h_area_bound_check(r.surface) == doctest::Approx(0.0).epsilon(1e-9));
  }
}
