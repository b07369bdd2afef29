// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli.hpp"
#include "crescent_oracle.hpp"
#include "mkcx/catcheck.hpp"
#include "mkcx/generators.hpp"
#include "mkcx/geodesy.hpp"
#include "mkcx/io.hpp"
#include "mkcx/surface.hpp"
#include "mkcx/vertexclass.hpp"
#include "test_util.hpp"

using namespace mkcx;

namespace {

const Curvature H = Curvature::hyperbolic();

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ComplexPoint random_point(const MkComplex& cx, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, cx.simplex_count() - 1);
  std::exponential_distribution<double> e(1.0);
  ComplexPoint p;
  p.simplex = pick(rng);
  double sum = 0.0;
  for (auto& x : p.bary) sum += (x = e(rng));
  for (auto& x : p.bary) x /= sum;
  return p;
}

// ------------------------------------------------------------ criterion 1

// Three anchors spread around a random great circle and lifted off it, with
// extra vertices in between; rejected until the loop is at least 2 pi long.
SphericalPolygon antipodal_triple_polygon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> extra(0, 2);
  for (;;) {
    const auto R = test::random_rotation(rng);
    std::vector<Vec3> v;
    for (int a = 0; a < 3; ++a) {
      const double phi = kTwoPi * a / 3 + 0.3 * U(rng);
      v.push_back(test::rotate(R, normalized({std::cos(phi), std::sin(phi), 0.15 * U(rng)})));
      const int m = extra(rng);
      for (int k = 1; k <= m; ++k) {
        const double psi = phi + (kTwoPi / 3) * k / (m + 1) + 0.1 * U(rng);
        v.push_back(test::rotate(R, normalized({std::cos(psi), std::sin(psi), 0.15 * U(rng)})));
      }
    }
    try {
      SphericalPolygon p(std::move(v));
      if (p.length() >= kTwoPi) return p;
    } catch (const Error&) {
    }
  }
}

Outcome hemisphere_lemma() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> L(1e-3, kTwoPi - 0.01);
  int short_ok = 0, short_total = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = test::random_polygon_with_length(rng, L(rng));
    ++short_total;
    const auto n = hemisphere_fit(p, HemisphereMode::Open);
    bool ok = n.has_value();
    if (ok)
      for (const auto& v : p.vertices()) ok = ok && dot(*n, v) > 0.0;
    short_ok += ok;
  }
  int agree = 0, compared = 0, margin = 0, feasible = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = antipodal_triple_polygon(rng);
    const auto grid = grid_hemisphere_optimum(p, 10000);
    if (std::abs(grid.value) <= 1e-6) {
      ++margin;
      continue;
    }
    ++compared;
    const bool oracle = grid.value > 0.0;
    feasible += oracle;
    agree += hemisphere_fit(p, HemisphereMode::Open).has_value() == oracle;
  }
  Outcome o;
  o.pass = short_ok == short_total && agree == compared;
  o.detail = fmt("short loops fitted %d/%d; long loops agree %d/%d (%d feasible, %d inside margin)",
                 short_ok, short_total, agree, compared, feasible, margin);
  return o;
}

// ------------------------------------------------------------ criterion 2

Outcome link_cat_consistency() {
  // Law of cosines: cos a = (cosh^2 1 - cosh 1) / sinh^2 1.
  const double c1 = std::cosh(1.0), s1 = std::sinh(1.0);
  const double angle = std::acos((c1 * c1 - c1) / (s1 * s1));
  Outcome o;
  std::ostringstream d;
  d << fmt("a=%.6f;", angle);
  for (int k = 5; k <= 9; ++k) {
    const auto cx = gen::equilateral_cone(H, k, 1.0);
    const bool expect = k * angle >= kTwoPi;
    const auto v = link_condition(cx);
    bool ok = v.has_value() != expect;
    double worst = 0.0;
    if (expect) {
      const int apex = cx.find_vertex("t0.c");
      worst = cat_inequality_sample(vertex_probe_triangle(cx, apex), 10000, 7 + k).value;
      std::mt19937_64 rng(500 + k);
      for (int t = 0; t < 4; ++t) {
        const auto p = random_point(cx, rng), q = random_point(cx, rng), r = random_point(cx, rng);
        worst = std::max(worst, cat_inequality_sample(GeodesicTriangle::from_points(cx, p, q, r),
                                                      10000, 900 + 10 * k + t)
                                    .value);
      }
      ok = ok && worst <= 1e-7;
    } else if (v) {
      worst = cat_inequality_sample(vertex_probe_triangle(cx, v->vertex), 10000, 7 + k).value;
      ok = ok && worst > 1e-4;
    }
    o.pass = o.pass && ok;
    d << fmt(" k=%d %s cat=%.3g%s;", k, v ? "fail" : "pass", worst, ok ? "" : " MISMATCH");
  }
  o.detail = d.str();
  return o;
}

// ------------------------------------------------------------ criterion 3

Outcome gauss_bonnet() {
  double worst = 0.0;
  int count = 0;
  auto audit = [&](const MkComplex& cx) {
    worst = std::max(worst, gauss_bonnet_audit(SingularSurface::from_complex(cx)));
    ++count;
  };
  const auto tri = SingularSurface::from_complex(gen::open_fan(H, 1, 1.3));
  const auto dbl = SingularSurface::from_complex(gen::doubled_triangle(H, 1.0, 1.4, 1.7));
  const auto torus = SingularSurface::from_complex(gen::flat_torus7());
  const bool chis = tri.euler_characteristic() == 1 && dbl.euler_characteristic() == 2 &&
                    torus.euler_characteristic() == 0;
  audit(gen::open_fan(H, 1, 1.3));
  audit(gen::doubled_triangle(H, 1.0, 1.4, 1.7));
  audit(gen::flat_torus7());
  for (int seed = 0; count < 100; ++seed)
    audit(gen::random_surface(static_cast<std::uint64_t>(1000 + seed), 6 + 2 * (seed % 9), seed % 2));
  Outcome o;
  o.pass = chis && worst <= 1e-9;
  o.detail = fmt("%d fixtures, chi(triangle, doubled, torus)=(%d, %d, %d), max residual %.3g",
                 count, tri.euler_characteristic(), dbl.euler_characteristic(),
                 torus.euler_characteristic(), worst);
  return o;
}

// ------------------------------------------------------------ criterion 4

Outcome h_map_area_bound() {
  double min_slack = 1e300, min_gap = 1e300;
  int hmaps = 0, ngons = 0;
  auto slack = [&](const HMapSurface& h) {
    min_slack = std::min(min_slack, h_area_bound_check(h));
    ++hmaps;
  };
  for (int n = 3; n <= 8; ++n)
    for (double R : {0.2, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto h = regular_ngon_disk(H, n, R);
      slack(h);
      min_gap = std::min(min_gap, (n - 2) * kPi - h.surface().area());
      ++ngons;
    }
  for (int k = 7; k <= 9; ++k) {
    const auto s = SingularSurface::from_complex(gen::equilateral_cone(H, k, 1.0));
    std::vector<int> rim;
    for (int v = 0; v < s.vertex_count(); ++v)
      if (s.is_boundary(v)) rim.push_back(v);
    slack(HMapSurface(s, rim));
  }
  // Realized h-maps: random triangles and quadrilaterals in a CAT(-1) disk.
  const auto disk = gen::regular_disk(H, 7, 2, 1.0);
  std::mt19937_64 rng(404);
  for (int i = 0; i < 12; ++i) {
    HMapInput in;
    const int corners = 3 + i % 2;
    for (int c = 0; c < corners; ++c) in.positions.push_back(random_point(disk, rng));
    in.triangles = corners == 3 ? std::vector<std::array<int, 3>>{{0, 1, 2}}
                                : std::vector<std::array<int, 3>>{{0, 1, 2}, {0, 2, 3}};
    for (int c = 0; c < corners; ++c) in.distinguished.push_back(c);
    in.subdivisions = 3;
    try {
      slack(realize_h_map(disk, in).surface);
    } catch (const Error& e) {
      // Degenerate images (collinear corners) are not h-maps.
      if (e.kind() != ErrorKind::DegenerateTriangle && e.kind() != ErrorKind::Input) throw;
    }
  }
  Outcome o;
  o.pass = min_slack >= -1e-9 && min_gap > 1e-6;
  o.detail = fmt("%d h-maps min slack %.3g; %d n-gons min gap to (n-2)pi %.3g", hmaps, min_slack,
                 ngons, min_gap);
  return o;
}

// ------------------------------------------------------------ criterion 5

std::vector<MkComplex> uniqueness_fixtures() {
  std::vector<MkComplex> f;
  for (double s : {0.5, 0.8, 1.0}) f.push_back(gen::regular_disk(H, 7, 1, s));
  for (double s : {0.7, 1.0}) f.push_back(gen::regular_disk(H, 7, 2, s));
  f.push_back(gen::regular_disk(H, 8, 1, 1.0));
  f.push_back(gen::regular_disk(H, 8, 2, 0.8));
  for (int k = 7; k <= 9; ++k) f.push_back(gen::equilateral_cone(H, k, 1.0));
  f.push_back(gen::equilateral_cone(H, 8, 0.6));
  f.push_back(gen::cone(H, 8, 1.2, kTwoPi + 0.5));
  f.push_back(gen::cone(H, 10, 1.0, kTwoPi + 1.0));
  f.push_back(gen::cone(Curvature::flat(), 6, 1.0, kTwoPi));
  f.push_back(gen::cone(Curvature::flat(), 9, 1.0, kTwoPi + 0.7));
  f.push_back(gen::open_fan(H, 3, 1.0));
  f.push_back(gen::open_fan(H, 5, 1.2));
  f.push_back(gen::flat_grid(3, 3, 1.0));
  f.push_back(gen::flat_grid(4, 2, 1.0));
  f.push_back(gen::flat_grid(5, 3, 0.5));
  return f;
}

Outcome geodesic_uniqueness() {
  const auto fixtures = uniqueness_fixtures();
  std::mt19937_64 rng(505);
  int link_ok = 0, pairs = 0, agree = 0;
  double worst = 0.0;
  for (const auto& cx : fixtures) {
    link_ok += !link_condition(cx).has_value() && euler_characteristic(cx) == 1;
    for (int i = 0; i < 10; ++i) {
      const auto p = random_point(cx, rng), q = random_point(cx, rng);
      const auto best = shortest_geodesic(cx, p, q);
      double h = 0.0;
      for (const auto& c : geodesic_candidates(cx, p, q, 5)) h = std::max(h, path_hausdorff(c, best));
      worst = std::max(worst, h);
      agree += h <= 1e-7;
      ++pairs;
    }
  }
  Outcome o;
  const int n = static_cast<int>(fixtures.size());
  o.pass = n == 20 && link_ok == n && agree == pairs;
  o.detail = fmt("%d fixtures (%d simply connected and link-passing), %d/%d pairs agree, max "
                 "Hausdorff %.3g",
                 n, link_ok, agree, pairs, worst);
  return o;
}

// ------------------------------------------------------------ criterion 6

Outcome crescent_hull() {
  std::vector<HPolygon> polys = {gen::notched_square(), gen::hooked_polygon(1),
                                 gen::hooked_polygon(2)};
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    polys.push_back(gen::random_pocketed_polygon(seed * 104729, 5 + static_cast<int>(seed % 8)));
  std::mt19937_64 rng(606);
  int convex = 0, idempotent = 0, monotone = 0, marked_ok = 0, oracle_ok = 0;
  std::size_t max_n = 0;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const auto& p = polys[i];
    if (i >= 3) max_n = std::max(max_n, p.size());
    oracle_ok += test::found_pockets(p) == test::oracle_pockets(p);
    const auto marks = test::random_safe_marks(p, rng, 4);
    const auto r = two_convex_hull(p, marks, 1e-6);
    convex += find_crescents(r.polygon).empty() && r.polygon.is_convex();
    bool mono = true;
    for (std::size_t i = 1; i < r.trace.size(); ++i)
      mono = mono && r.trace[i].max_folding < r.trace[i - 1].max_folding;
    monotone += mono;
    double far = 0.0;
    for (const auto& m : marks) {
      for (int s = 0; s <= 8; ++s) {
        const double t = s / 8.0;
        const Chart2 c{m.a.x + t * (m.b.x - m.a.x), m.a.y + t * (m.b.y - m.a.y)};
        far = std::max(far, r.polygon.distance_to_region(from_chart(H, c)));
      }
    }
    marked_ok += far <= 1e-6 && r.max_marked_distance <= 1e-6;
    const auto again = two_convex_hull(r.polygon, marks, 1e-6);
    bool same = again.trace.empty() && again.polygon.size() == r.polygon.size();
    for (std::size_t i = 0; same && i < r.polygon.size(); ++i)
      same = again.polygon[i].x == r.polygon[i].x && again.polygon[i].y == r.polygon[i].y;
    idempotent += same;
  }
  const int n = static_cast<int>(polys.size());
  Outcome o;
  o.pass = convex == n && idempotent == n && monotone == n && marked_ok == n && oracle_ok == n &&
           max_n <= 12;
  o.detail = fmt("%d polygons (random ones up to %zu vertices): convex %d, idempotent %d, folding decreasing "
                 "%d, marked within eps %d, pocket oracle %d",
                 n, max_n, convex, idempotent, monotone, marked_ok, oracle_ok);
  return o;
}

// ------------------------------------------------------------ criterion 7

SphericalPolygon cap_polygon(std::mt19937_64& rng, const Vec3& centre, double radius) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int> count(3, 9);
  const int n = count(rng);
  Vec3 e1 = normalized(cross(centre, std::abs(centre[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}));
  Vec3 e2 = cross(centre, e1);
  std::vector<Vec3> v;
  for (int i = 0; i < n; ++i) {
    const double phi = kTwoPi * (i + 0.8 * U(rng)) / n;
    const double r = radius * (0.6 + 0.4 * U(rng));
    Vec3 p;
    for (int j = 0; j < 3; ++j)
      p[j] = std::cos(r) * centre[j] + std::sin(r) * (std::cos(phi) * e1[j] + std::sin(phi) * e2[j]);
    v.push_back(p);
  }
  return SphericalPolygon::from_directions(v);
}

Outcome vertex_classification() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int agree = 0, compared = 0, margin = 0, strict = 0, certs = 0;
  std::set<VertexKind> kinds;
  for (int i = 0; i < 1000; ++i) {
    SphericalPolygon p;
    switch (i % 4) {
    case 0: p = cap_polygon(rng, test::random_unit(rng), 0.2 + 1.2 * U(rng)); break;
    case 1: p = test::random_belt_polygon(rng, 5 + i % 6, 0.3); break;
    case 2: p = test::random_spread_polygon(rng, 3 + i % 8); break;
    default: p = test::random_belt_polygon(rng, 6 + i % 5, 1e-3); break;
    }
    const Vec3 outward = test::random_unit(rng);
    const auto grid = grid_hemisphere_optimum(p, 10000);
    VertexClass c;
    try {
      c = classify_vertex(p, outward);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Ambiguous) throw;
      ++margin;
      continue;
    }
    kinds.insert(c.kind);
    if (c.kind == VertexKind::StrictSVertex) {
      ++strict;
      certs += c.certificate &&
               crossing_certificate_check(p, *c.certificate) == CertificateStatus::Valid;
    }
    const double side = dot(grid.center, outward);
    if (std::abs(grid.value) <= 1e-6 || (grid.value > 0.0 && std::abs(side) <= 1e-6)) {
      ++margin;
      continue;
    }
    VertexKind oracle = grid.value < 0.0 ? VertexKind::StrictSVertex
                        : side < 0.0     ? VertexKind::Convex
                                         : VertexKind::Concave;
    ++compared;
    agree += c.kind == oracle;
  }

  // Two-convexity: fixtures of 10 links, a third of them with one planted
  // concave corner.
  int decided = 0, fixtures = 0, planted_total = 0;
  for (int f = 0; f < 60; ++f) {
    std::vector<OrientedLink> links;
    const int plant = f % 3 == 0 ? static_cast<int>(rng() % 10) : -1;
    for (int j = 0; j < 10; ++j) {
      SphericalPolygon p = j % 3 == 2 ? test::random_belt_polygon(rng, 6, 1e-3)
                                      : cap_polygon(rng, test::random_unit(rng), 0.3 + U(rng));
      const auto opt = hemisphere_optimum(p);
      Vec3 out = test::random_unit(rng);
      if (opt.value > kHemisphereMargin) {
        const double s = j == plant ? 1.0 : -1.0;
        out = {s * opt.center[0], s * opt.center[1], s * opt.center[2]};
      } else if (j == plant) {
        p = cap_polygon(rng, test::random_unit(rng), 0.5);
        const auto o2 = hemisphere_optimum(p);
        out = o2.center;
      }
      links.push_back({p, out});
    }
    const auto d = two_convexity_decision(links);
    ++fixtures;
    planted_total += plant >= 0;
    decided += plant < 0 ? d.pass : (!d.pass && d.first_failing == plant);
  }
  Outcome o;
  o.pass = agree == compared && certs == strict && decided == fixtures && kinds.size() >= 3;
  o.detail = fmt("grid agreement %d/%d (%d inside margin), certificates %d/%d valid, "
                 "two-convexity %d/%d fixtures (%d planted)",
                 agree, compared, margin, certs, strict, decided, fixtures, planted_total);
  return o;
}

// ------------------------------------------------------------ criterion 8

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mkcx_acceptance";
  fs::create_directories(dir);
  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), {"mkcx", "--format", "machine"});
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return std::to_string(code) + "\n" + out.str();
  };
  auto path = [&](const char* name) { return (dir / name).string(); };
  run({"gen", "cone", "--triangles", "6", "--output", path("c6.mkcx")});
  run({"gen", "cone", "--triangles", "7", "--output", path("c7.mkcx")});
  run({"gen", "torus", "--output", path("torus.mkcx")});
  run({"gen", "spiral-polygon", "--output", path("spiral.mkcx")});
  write_text_file(path("links.mkcx"), "mkcx 1\ncurvature -1\nlink a 4 outward 0 0 1\n"
                                      "dir 1 0 -0.2\ndir 0 1 -0.2\ndir -1 0 -0.2\ndir 0 -1 -0.2\n");
  const std::vector<std::vector<std::string>> commands = {
      {"validate", path("c6.mkcx")},
      {"check", path("c6.mkcx"), "--samples", "300", "--seed", "11"},
      {"check", path("c7.mkcx"), "--samples", "300", "--seed", "12"},
      {"check", path("links.mkcx"), "--checks", "classify,two-convex"},
      {"geodesic", path("c7.mkcx"), "--from", "t0:1,2,3", "--to", "t4:3,1,1"},
      {"geodesic", path("c7.mkcx"), "--loop", "t0:2,1,1;t0:1,2,1;t0:1,1,2;t0:2,1,1"},
      {"gb-audit", path("torus.mkcx")},
      {"crescent-hull", path("spiral.mkcx")},
      {"gen", "cone", "--triangles", "8"},
      {"gen", "notched-polygon"},
  };
  int same = 0;
  for (const auto& c : commands) same += run(c) == run(c);
  fs::remove_all(dir);
  Outcome o;
  const int n = static_cast<int>(commands.size());
  o.pass = same == n;
  o.detail = fmt("%d/%d commands byte-identical on rerun", same, n);
  return o;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"mkcx acceptance criteria"};
  std::vector<int> only;
  app.add_option("criteria", only, "Run only these criteria (1-8)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "hemisphere lemma", 60, hemisphere_lemma},
      {2, "link/CAT consistency", 120, link_cat_consistency},
      {3, "Gauss-Bonnet exactness", 30, gauss_bonnet},
      {4, "h-map area bound", 30, h_map_area_bound},
      {5, "geodesic uniqueness", 120, geodesic_uniqueness},
      {6, "crescent hull", 60, crescent_hull},
      {7, "vertex classification", 60, vertex_classification},
      {8, "end-to-end determinism", 10, cli_determinism},
  };
  bool ok = true;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = r.pass && s < c.limit_s;
    ok = ok && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): "
              << r.detail << fmt(" [%.2f s, limit %.0f s]", s, c.limit_s) << std::endl;
  }
  return ok ? 0 : 1;
}
