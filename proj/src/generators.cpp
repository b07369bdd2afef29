#include "mkcx/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace mkcx::gen {

namespace {

double rim_length(Curvature c, double leg, double theta) {
  switch (c.kappa()) {
  case -1:
    return std::acosh(std::cosh(leg) * std::cosh(leg) -
                      std::sinh(leg) * std::sinh(leg) * std::cos(theta));
  case 0:
    return 2.0 * leg * std::sin(0.5 * theta);
  default:
    return std::acos(std::cos(leg) * std::cos(leg) + std::sin(leg) * std::sin(leg) * std::cos(theta));
  }
}

std::string name(const char* prefix, int i) { return prefix + std::to_string(i); }

} // namespace

std::vector<MetricSimplex> simplices_from_triangles(
    const std::vector<std::array<std::string, 3>>& tris, const EdgeLength& length) {
  std::vector<MetricSimplex> out;
  out.reserve(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& v = tris[t];
    MetricSimplex s;
    s.id = "t" + std::to_string(t);
    s.dim = 2;
    s.labels = {v[0], v[1], v[2]};
    s.lengths = {length(v[0], v[1]), length(v[0], v[2]), length(v[1], v[2])};
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Gluing> gluings_from_triangles(const std::vector<std::array<std::string, 3>>& tris) {
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<int, int>>> edges;
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int f = 0; f < 3; ++f) {
      const auto& a = tris[t][(f + 1) % 3];
      const auto& b = tris[t][(f + 2) % 3];
      edges[std::minmax(a, b)].emplace_back(static_cast<int>(t), f);
    }
  std::vector<Gluing> out;
  for (const auto& [key, occ] : edges) {
    if (occ.size() > 2)
      throw Error(ErrorKind::NotASurface, "edge " + key.first + key.second + " in more than two triangles");
    if (occ.size() != 2) continue;
    Gluing g;
    g.a = {"t" + std::to_string(occ[0].first), occ[0].second};
    g.b = {"t" + std::to_string(occ[1].first), occ[1].second};
    g.vertex_map = {{key.first, key.first}, {key.second, key.second}};
    out.push_back(std::move(g));
  }
  return out;
}

MkComplex from_triangles(Curvature c, const std::vector<std::array<std::string, 3>>& tris,
                         const EdgeLength& length) {
  return build_complex(c, simplices_from_triangles(tris, length), gluings_from_triangles(tris));
}

MkComplex cone(Curvature c, int k, double leg, double total_angle) {
  if (k < 3) throw Error(ErrorKind::Input, "a cone needs at least 3 triangles");
  if (!(leg > 0.0) || !(total_angle > 0.0) || total_angle / k >= kPi)
    throw Error(ErrorKind::Input, "cone parameters out of range");
  const double rim = rim_length(c, leg, total_angle / k);
  std::vector<std::array<std::string, 3>> tris;
  for (int i = 0; i < k; ++i) tris.push_back({"c", name("r", i), name("r", (i + 1) % k)});
  return from_triangles(c, tris, [&](const std::string& a, const std::string& b) {
    return a == "c" || b == "c" ? leg : rim;
  });
}

MkComplex equilateral_cone(Curvature c, int k, double side) {
  if (k < 3) throw Error(ErrorKind::Input, "a cone needs at least 3 triangles");
  std::vector<std::array<std::string, 3>> tris;
  for (int i = 0; i < k; ++i) tris.push_back({"c", name("r", i), name("r", (i + 1) % k)});
  return from_triangles(c, tris, [&](const std::string&, const std::string&) { return side; });
}

MkComplex open_fan(Curvature c, int k, double side) {
  if (k < 1) throw Error(ErrorKind::Input, "a fan needs at least one triangle");
  std::vector<std::array<std::string, 3>> tris;
  for (int i = 0; i < k; ++i) tris.push_back({"c", name("r", i), name("r", i + 1)});
  return from_triangles(c, tris, [&](const std::string&, const std::string&) { return side; });
}

MkComplex flat_cylinder(int n, double circumference, double height) {
  if (n < 3 || !(circumference > 0.0) || !(height > 0.0))
    throw Error(ErrorKind::Input, "cylinder parameters out of range");
  const double w = circumference / n;
  const double diag = std::hypot(w, height);
  std::vector<std::array<std::string, 3>> tris;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    tris.push_back({name("b", i), name("b", j), name("t", i)});
    tris.push_back({name("b", j), name("t", j), name("t", i)});
  }
  return from_triangles(Curvature::flat(), tris, [&](const std::string& a, const std::string& b) {
    if (a[0] == b[0]) return w;
    return std::stoi(a.substr(1)) == std::stoi(b.substr(1)) ? height : diag;
  });
}

MkComplex flat_grid(int nx, int ny, double side) {
  if (nx < 1 || ny < 1 || !(side > 0.0)) throw Error(ErrorKind::Input, "grid parameters out of range");
  auto g = [](int i, int j) { return "g" + std::to_string(i) + "_" + std::to_string(j); };
  std::vector<std::array<std::string, 3>> tris;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      tris.push_back({g(i, j), g(i + 1, j), g(i + 1, j + 1)});
      tris.push_back({g(i, j), g(i + 1, j + 1), g(i, j + 1)});
    }
  return from_triangles(Curvature::flat(), tris, [&](const std::string& a, const std::string& b) {
    const auto ua = a.find('_'), ub = b.find('_');
    const int ia = std::stoi(a.substr(1, ua - 1)), ja = std::stoi(a.substr(ua + 1));
    const int ib = std::stoi(b.substr(1, ub - 1)), jb = std::stoi(b.substr(ub + 1));
    return side * std::hypot(ia - ib, ja - jb);
  });
}

MkComplex flat_torus7() {
  std::vector<std::array<std::string, 3>> tris;
  for (int i = 0; i < 7; ++i) {
    tris.push_back({name("v", i), name("v", (i + 1) % 7), name("v", (i + 3) % 7)});
    tris.push_back({name("v", i), name("v", (i + 2) % 7), name("v", (i + 3) % 7)});
  }
  return from_triangles(Curvature::flat(), tris,
                        [](const std::string&, const std::string&) { return 1.0; });
}

MkComplex doubled_triangle(Curvature c, double a, double b, double cc) {
  std::vector<std::array<std::string, 3>> tris{{"A", "B", "C"}, {"A", "B", "C"}};
  return from_triangles(c, tris, [&](const std::string& x, const std::string& y) {
    const std::string e = x < y ? x + y : y + x;
    if (e == "BC") return a;
    if (e == "AC") return b;
    return cc;
  });
}

std::vector<std::array<std::string, 3>> regular_disk_triangles(int degree, int layers) {
  if (degree < 6 || layers < 1) throw Error(ErrorKind::Input, "regular disk needs degree >= 6");
  std::vector<std::array<std::string, 3>> tris;
  int next = 0;
  auto fresh = [&] { return name("v", next++); };
  const std::string centre = fresh();
  std::vector<std::string> ring;
  for (int i = 0; i < degree; ++i) ring.push_back(fresh());
  for (int i = 0; i < degree; ++i) tris.push_back({centre, ring[i], ring[(i + 1) % degree]});

  for (int layer = 1; layer < layers; ++layer) {
    std::map<std::string, int> count;
    for (const auto& t : tris)
      for (const auto& v : t) ++count[v];
    const int m = static_cast<int>(ring.size());
    std::vector<int> f(m);
    for (int i = 0; i < m; ++i) {
      f[i] = degree - 2 - count[ring[i]];
      if (f[i] < 0) throw Error(ErrorKind::Input, "regular disk growth failed");
    }
    int s = 0;
    while (s < m && f[s] == 0) ++s;
    if (s == m) throw Error(ErrorKind::Input, "regular disk growth failed");
    std::vector<std::string> w(m), next_ring;
    w[s] = fresh();
    for (int step = 1; step <= m; ++step) {
      const int i = (s + step) % m;
      const int prev = (i + m - 1) % m;
      if (i != s) w[i] = f[i] == 0 ? w[prev] : fresh();
      std::vector<std::string> spokes{w[prev]};
      for (int u = 1; u < f[i]; ++u) spokes.push_back(fresh());
      if (f[i] > 0) spokes.push_back(w[i]);
      for (std::size_t j = 0; j + 1 < spokes.size(); ++j)
        tris.push_back({ring[i], spokes[j], spokes[j + 1]});
      for (std::size_t j = 1; j < spokes.size(); ++j) next_ring.push_back(spokes[j]);
      tris.push_back({ring[i], ring[(i + 1) % m], w[i]});
    }
    ring = std::move(next_ring);
  }
  return tris;
}

MkComplex regular_disk(Curvature c, int degree, int layers, double side) {
  return from_triangles(c, regular_disk_triangles(degree, layers),
                        [&](const std::string&, const std::string&) { return side; });
}

MkComplex random_surface(std::uint64_t seed, int triangles, bool allow_boundary) {
  if (triangles < 1) throw Error(ErrorKind::Input, "need at least one triangle");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> len(1.0, 1.8);
  const Curvature h = Curvature::hyperbolic();
  const std::array<std::string, 3> lab{"a", "b", "c"};
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const int slots = 3 * triangles;
    std::vector<int> order(slots);
    for (int i = 0; i < slots; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    int free_slots = 0;
    if (allow_boundary) free_slots = static_cast<int>(rng() % 4);
    if ((slots - free_slots) % 2 != 0) ++free_slots;
    if (free_slots > slots) continue;
    // Per slot: edge (local i, j) opposite local f = slot % 3.
    std::vector<double> slot_len(slots, 0.0);
    std::vector<Gluing> gl;
    for (int p = free_slots; p + 1 < slots; p += 2) {
      const int x = order[p], y = order[p + 1];
      const double l = len(rng);
      slot_len[x] = slot_len[y] = l;
      const int fx = x % 3, fy = y % 3;
      Gluing g;
      g.a = {"t" + std::to_string(x / 3), fx};
      g.b = {"t" + std::to_string(y / 3), fy};
      const bool flip = rng() & 1;
      const int ax = (fx + 1) % 3, bx = (fx + 2) % 3;
      const int ay = (fy + 1) % 3, by = (fy + 2) % 3;
      g.vertex_map = {{lab[ax], lab[flip ? by : ay]}, {lab[bx], lab[flip ? ay : by]}};
      gl.push_back(std::move(g));
    }
    for (int p = 0; p < free_slots; ++p) slot_len[order[p]] = len(rng);
    std::vector<MetricSimplex> simp;
    for (int t = 0; t < triangles; ++t) {
      MetricSimplex s;
      s.id = "t" + std::to_string(t);
      s.dim = 2;
      s.labels = {lab[0], lab[1], lab[2]};
      // Edge (0,1) is opposite local 2, (0,2) opposite 1, (1,2) opposite 0.
      s.lengths = {slot_len[3 * t + 2], slot_len[3 * t + 1], slot_len[3 * t + 0]};
      simp.push_back(std::move(s));
    }
    MkComplex cx;
    try {
      cx = build_complex(h, std::move(simp), std::move(gl));
    } catch (const Error&) {
      continue;
    }
    bool surface = true;
    for (int v = 0; v < cx.vertex_count() && surface; ++v) {
      auto link = vertex_link(cx, v);
      surface = link.is_single_cycle() || link.is_single_path();
    }
    if (!surface) continue;
    // Connectedness through gluings.
    std::vector<int> comp(triangles);
    for (int t = 0; t < triangles; ++t) comp[t] = t;
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (const auto& g : cx.gluings())
      comp[find(cx.index_of(g.a.simplex))] = find(cx.index_of(g.b.simplex));
    bool connected = true;
    for (int t = 0; t < triangles; ++t) connected = connected && find(t) == find(0);
    if (connected) return cx;
  }
  throw Error(ErrorKind::NonConvergence, "no surface gluing found for the requested size");
}

HPolygon notched_square(double depth) {
  return HPolygon::from_chart({{-0.4, -0.4}, {0.4, -0.4}, {0.4, 0.4}, {0.0, 0.4 - depth}, {-0.4, 0.4}});
}

HPolygon hooked_polygon(int levels) {
  if (levels < 1 || levels > 2) throw Error(ErrorKind::Input, "hooked polygon supports 1 or 2 levels");
  std::vector<Chart2> v{{0, 0}, {6, 0}, {6, 2}, {5, 2}};
  if (levels == 2) {
    v.push_back({5.4, 1.6});
    v.push_back({5, 1.3});
  }
  for (Chart2 p : std::vector<Chart2>{{5, 1}, {1, 1}, {1, 5}, {5, 5}, {5, 4}, {6, 4}, {6, 6}, {0, 6}})
    v.push_back(p);
  for (auto& p : v) p = {0.12 * (p.x - 3.0), 0.12 * (p.y - 3.0)};
  return HPolygon::from_chart(std::move(v));
}

HPolygon bumped_notch() {
  return HPolygon::from_chart({{-0.4, -0.4}, {0.4, -0.4}, {0.4, 0.4}, {0, -0.2}, {-0.15, 0.0},
                               {-0.05, 0.1}, {-0.25, 0.15}, {-0.4, 0.4}});
}

HPolygon bowl_polygon() {
  return HPolygon::from_chart(
      {{0.5, -0.4}, {0.5, 0.3}, {0.2, 0.05}, {-0.2, 0.05}, {-0.5, 0.3}, {-0.5, -0.4}});
}

HPolygon random_pocketed_polygon(std::uint64_t seed, int n) {
  if (n < 3) throw Error(ErrorKind::Input, "a polygon needs at least 3 vertices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> ang(n);
  const double slot = kTwoPi / n;
  for (int i = 0; i < n; ++i) ang[i] = slot * (i + 0.15 + 0.7 * unit(rng));
  std::vector<Chart2> v;
  for (int i = 0; i < n; ++i) {
    const double r = 0.15 + 0.6 * unit(rng);
    v.push_back({r * std::cos(ang[i]), r * std::sin(ang[i])});
  }
  return HPolygon::from_chart(std::move(v));
}

} // namespace mkcx::gen
