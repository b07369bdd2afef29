#include "mkcx/catcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <random>
#include <utility>

namespace mkcx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLinkTol = 1e-9;
constexpr double kRounding = 1e-12;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string point_text(const MkComplex& cx, const ComplexPoint& p) {
  return cx.simplex(p.simplex).id + "(" + num(p.bary[0]) + "," + num(p.bary[1]) + "," +
         num(p.bary[2]) + ")";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Link graph: shortest injective loops.

struct LinkPath {
  double length = kInf;
  std::vector<int> edges; // from src to dst
};

LinkPath link_shortest_path(const LinkComplex& L, int src, int dst, int banned) {
  const int n = static_cast<int>(L.nodes.size());
  std::vector<double> d(n, kInf);
  std::vector<int> via(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    if (u == dst) break;
    for (int e = 0; e < static_cast<int>(L.edges.size()); ++e) {
      if (e == banned) continue;
      const auto& E = L.edges[e];
      int w = -1;
      if (E.a == u) w = E.b;
      else if (E.b == u) w = E.a;
      if (w < 0 || w == u) continue;
      const double nd = du + E.length;
      if (nd < d[w]) {
        d[w] = nd;
        via[w] = e;
        pq.push({nd, w});
      }
    }
  }
  LinkPath out;
  if (d[dst] == kInf) return out;
  out.length = d[dst];
  for (int v = dst; v != src;) {
    const int e = via[v];
    out.edges.push_back(e);
    v = L.edges[e].a == v ? L.edges[e].b : L.edges[e].a;
  }
  std::reverse(out.edges.begin(), out.edges.end());
  return out;
}

// ---------------------------------------------------------------------------
// Metric graphs (1-complexes).

struct GraphPoint {
  int edge = -1;
  double t = 0.0;
};

struct Segment {
  int edge = -1;
  double t0 = 0.0, t1 = 0.0;
};

class MetricGraph {
public:
  explicit MetricGraph(const MkComplex& cx) : cx_(cx) {
    const int nv = cx.vertex_count();
    D_.assign(nv, std::vector<double>(nv, kInf));
    next_.assign(nv, std::vector<int>(nv, -1));
    for (int v = 0; v < nv; ++v) D_[v][v] = 0.0;
    for (int s = 0; s < cx.simplex_count(); ++s) {
      const int a = cx.vertex_of(s, 0), b = cx.vertex_of(s, 1);
      const double l = len(s);
      if (l < D_[a][b]) {
        D_[a][b] = D_[b][a] = l;
        next_[a][b] = next_[b][a] = s;
      }
    }
    // Floyd-Warshall with first-edge tracking.
    std::vector<std::vector<int>> first(nv, std::vector<int>(nv, -1));
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b)
        if (next_[a][b] >= 0) first[a][b] = b;
    for (int k = 0; k < nv; ++k)
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b)
          if (D_[a][k] + D_[k][b] < D_[a][b]) {
            D_[a][b] = D_[a][k] + D_[k][b];
            first[a][b] = first[a][k];
          }
    first_ = std::move(first);
  }

  double len(int s) const { return cx_.simplex(s).lengths[0]; }

  // Distances from a point to the two endpoints of an edge.
  std::array<double, 2> to_vertex(const GraphPoint& x, int v) const {
    const double l = len(x.edge);
    const int a = cx_.vertex_of(x.edge, 0), b = cx_.vertex_of(x.edge, 1);
    return {x.t * l + D_[a][v], (1.0 - x.t) * l + D_[b][v]};
  }

  double dist(const GraphPoint& x, const GraphPoint& y) const {
    double best = kInf;
    if (x.edge == y.edge) best = std::abs(x.t - y.t) * len(x.edge);
    const double ly = len(y.edge);
    const int a = cx_.vertex_of(y.edge, 0), b = cx_.vertex_of(y.edge, 1);
    const auto da = to_vertex(x, a), db = to_vertex(x, b);
    best = std::min(best, std::min(da[0], da[1]) + y.t * ly);
    best = std::min(best, std::min(db[0], db[1]) + (1.0 - y.t) * ly);
    return best;
  }

  // Segments of a shortest path from x to y.
  std::vector<Segment> path(const GraphPoint& x, const GraphPoint& y) const {
    const double target = dist(x, y);
    if (x.edge == y.edge && std::abs(std::abs(x.t - y.t) * len(x.edge) - target) <= 1e-12)
      return {{x.edge, x.t, y.t}};
    const double lx = len(x.edge), ly = len(y.edge);
    std::vector<Segment> out;
    double best = kInf;
    int bu = -1, bw = -1, bi = -1, bj = -1;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const int u = cx_.vertex_of(x.edge, i), w = cx_.vertex_of(y.edge, j);
        const double c = (i == 0 ? x.t : 1.0 - x.t) * lx + D_[u][w] + (j == 0 ? y.t : 1.0 - y.t) * ly;
        if (c < best) {
          best = c;
          bu = u;
          bw = w;
          bi = i;
          bj = j;
        }
      }
    out.push_back({x.edge, x.t, bi == 0 ? 0.0 : 1.0});
    for (int v = bu; v != bw;) {
      const int nxt = first_[v][bw];
      const int s = next_[v][nxt];
      const bool fwd = cx_.vertex_of(s, 0) == v;
      out.push_back({s, fwd ? 0.0 : 1.0, fwd ? 1.0 : 0.0});
      v = nxt;
    }
    out.push_back({y.edge, bj == 0 ? 0.0 : 1.0, y.t});
    return out;
  }

  static double seg_len(const MetricGraph& g, const Segment& s) {
    return std::abs(s.t1 - s.t0) * g.len(s.edge);
  }

  GraphPoint along(const std::vector<Segment>& segs, double u) const {
    double total = 0.0;
    for (const auto& s : segs) total += seg_len(*this, s);
    double want = u * total;
    for (const auto& s : segs) {
      const double l = seg_len(*this, s);
      if (want <= l || &s == &segs.back()) {
        const double f = l > 0.0 ? std::clamp(want / l, 0.0, 1.0) : 0.0;
        return {s.edge, s.t0 + f * (s.t1 - s.t0)};
      }
      want -= l;
    }
    return {segs.back().edge, segs.back().t1};
  }

  double dist_to(const GraphPoint& x, const std::vector<Segment>& segs) const {
    double best = kInf;
    for (const auto& s : segs) {
      const double lo = std::min(s.t0, s.t1), hi = std::max(s.t0, s.t1);
      if (s.edge == x.edge && x.t >= lo - kRounding && x.t <= hi + kRounding) return 0.0;
      best = std::min(best, dist(x, {s.edge, s.t0}));
      best = std::min(best, dist(x, {s.edge, s.t1}));
    }
    return best;
  }

private:
  const MkComplex& cx_;
  std::vector<std::vector<double>> D_;
  std::vector<std::vector<int>> next_;  // direct edge between adjacent vertices
  std::vector<std::vector<int>> first_; // first vertex after a on a shortest a-b path
};

bool is_graph(const MkComplex& cx) { return cx.simplex_count() > 0 && cx.is_pure(1); }

GraphPoint graph_point(const ComplexPoint& p) { return {p.simplex, p.bary[1]}; }

double graph_slimness(const MetricGraph& g, const ComplexPoint& p, const ComplexPoint& q,
                      const ComplexPoint& r, int n) {
  const GraphPoint P = graph_point(p), Q = graph_point(q), R = graph_point(r);
  const auto pq = g.path(P, Q);
  auto others = g.path(Q, R);
  const auto rp = g.path(R, P);
  others.insert(others.end(), rp.begin(), rp.end());
  double gap = 0.0;
  for (int i = 0; i <= n; ++i) gap = std::max(gap, g.dist_to(g.along(pq, double(i) / n), others));
  return gap;
}

// ---------------------------------------------------------------------------
// 2-complexes.

double distance_to_path(const MkComplex& cx, const ComplexPoint& x, const ComplexPath& side) {
  auto f = [&](double u) { return complex_distance(cx, x, side.at(u)); };
  double best = std::min(f(0.0), f(1.0));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = 1.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 48 && b - a > 1e-10; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::min({best, fc, fd});
}

double surface_slimness(const MkComplex& cx, const ComplexPoint& p, const ComplexPoint& q,
                        const ComplexPoint& r, int n) {
  const ComplexPath pq = shortest_geodesic(cx, p, q);
  const ComplexPath qr = shortest_geodesic(cx, q, r);
  const ComplexPath rp = shortest_geodesic(cx, r, p);
  double gap = 0.0;
  for (int i = 0; i <= n; ++i) {
    const ComplexPoint x = pq.at(double(i) / n);
    gap = std::max(gap, std::min(distance_to_path(cx, x, qr), distance_to_path(cx, x, rp)));
  }
  return gap;
}

ComplexPoint random_point(const MkComplex& cx, std::mt19937_64& rng) {
  const int s = static_cast<int>(rng() % static_cast<std::uint64_t>(cx.simplex_count()));
  ComplexPoint p;
  p.simplex = s;
  if (cx.simplex(s).dim == 1) {
    const double t = uniform01(rng);
    p.bary = {1.0 - t, t, 0.0};
    return p;
  }
  std::array<double, 3> e{};
  double sum = 0.0;
  for (auto& x : e) {
    x = -std::log(1.0 - uniform01(rng));
    sum += x;
  }
  for (auto& x : e) x /= sum;
  p.bary = e;
  return p;
}

void check_params(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::Input, "parameter outside [0, 1]");
}

// Corners of the fan around an interior vertex, in rotation order: the
// triangle, its local corner, and the local vertices of the entry and exit
// edges.
struct FanCorner {
  int simplex, corner, in_vertex, out_vertex;
};

std::vector<FanCorner> vertex_fan(const MkComplex& cx, int v) {
  int s0 = -1, c0 = -1;
  for (int s = 0; s < cx.simplex_count() && s0 < 0; ++s)
    if (cx.simplex(s).dim == 2)
      for (int i = 0; i < 3; ++i)
        if (cx.vertex_of(s, i) == v) {
          s0 = s;
          c0 = i;
          break;
        }
  if (s0 < 0) throw Error(ErrorKind::Input, "vertex has no incident triangle");
  std::vector<FanCorner> fan;
  int s = s0, c = c0, in = (c0 + 1) % 3;
  for (int guard = 0; guard <= 3 * cx.simplex_count(); ++guard) {
    const int out = 3 - c - in;
    fan.push_back({s, c, in, out});
    const auto& a = cx.across(s, in); // face omitting `in` contains c and out
    if (a.simplex < 0) throw Error(ErrorKind::Input, "probe vertex lies on the boundary");
    const int cn = a.map[c];
    const int inn = a.map[out];
    s = a.simplex;
    c = cn;
    in = inn;
    if (s == s0 && c == c0) return fan;
  }
  throw Error(ErrorKind::Input, "vertex fan does not close");
}

} // namespace

const char* to_string(ViolationKind kind) {
  switch (kind) {
  case ViolationKind::LinkSystole:
    return "link-systole";
  case ViolationKind::CatComparison:
    return "cat-comparison";
  case ViolationKind::Convexity:
    return "convexity";
  case ViolationKind::Slimness:
    return "slimness";
  case ViolationKind::QuasiGeodesic:
    return "quasi-geodesic";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

std::optional<ViolationReport> link_condition(const MkComplex& cx) {
  if (cx.max_dim() >= 3)
    throw Error(ErrorKind::Unsupported, "link condition is verified for 2-complexes only");
  double best = kInf;
  int best_v = -1;
  std::vector<int> best_loop;
  for (int v = 0; v < cx.vertex_count(); ++v) {
    const LinkComplex L = vertex_link(cx, v);
    for (int e = 0; e < static_cast<int>(L.edges.size()); ++e) {
      const auto& E = L.edges[e];
      if (E.length >= best) continue;
      double len = E.length;
      std::vector<int> loop{e};
      if (E.a != E.b) {
        LinkPath path = link_shortest_path(L, E.b, E.a, e);
        if (path.length == kInf) continue;
        len += path.length;
        loop.insert(loop.end(), path.edges.begin(), path.edges.end());
      }
      if (len < best) {
        best = len;
        best_v = v;
        best_loop = std::move(loop);
      }
    }
  }
  if (best_v < 0 || best >= kTwoPi - kLinkTol) return std::nullopt;
  ViolationReport r;
  r.kind = ViolationKind::LinkSystole;
  r.magnitude = kTwoPi - best;
  r.vertex = best_v;
  r.loop_edges = best_loop;
  const LinkComplex L = vertex_link(cx, best_v);
  std::string w = "link vertex=" + cx.vertex_name(best_v) + " loop=";
  for (std::size_t i = 0; i < best_loop.size(); ++i) {
    const auto& E = L.edges[best_loop[i]];
    if (i) w += ",";
    w += cx.simplex(E.simplex).id + ":" + std::to_string(E.corner);
  }
  w += " length=" + num(best);
  r.witness = std::move(w);
  return r;
}

double link_loop_length(const MkComplex& cx, int vertex, const std::vector<int>& loop) {
  const LinkComplex L = vertex_link(cx, vertex);
  if (loop.empty()) throw Error(ErrorKind::Input, "empty loop");
  std::vector<char> used_edge(L.edges.size(), 0), used_node(L.nodes.size(), 0);
  for (int e : loop)
    if (e < 0 || e >= static_cast<int>(L.edges.size()))
      throw Error(ErrorKind::Input, "loop edge out of range");
  const auto& first = L.edges[loop.front()];
  int at = first.b;
  double len = first.length;
  used_edge[loop.front()] = 1;
  if (loop.size() == 1) {
    if (first.a != first.b) throw Error(ErrorKind::Input, "loop is not closed");
    return len;
  }
  used_node[first.a] = 1;
  for (std::size_t i = 1; i < loop.size(); ++i) {
    const auto& E = L.edges[loop[i]];
    if (used_edge[loop[i]] || used_node[at]) throw Error(ErrorKind::Input, "loop is not injective");
    used_edge[loop[i]] = 1;
    used_node[at] = 1;
    if (E.a == at) at = E.b;
    else if (E.b == at) at = E.a;
    else throw Error(ErrorKind::Input, "loop edges are not consecutive");
    len += E.length;
  }
  if (at != first.a) throw Error(ErrorKind::Input, "loop is not closed");
  return len;
}

// ---------------------------------------------------------------------------

GeodesicTriangle::GeodesicTriangle(ComplexPath pq, ComplexPath qr, ComplexPath rp) {
  sides_.push_back(std::move(pq));
  sides_.push_back(std::move(qr));
  sides_.push_back(std::move(rp));
  const MkComplex& cx = sides_[0].complex();
  for (int i = 0; i < 3; ++i) {
    if (&sides_[i].complex() != &cx)
      throw Error(ErrorKind::Input, "triangle sides lie in different complexes");
    if (!same_point(cx, sides_[i].back(), sides_[(i + 1) % 3].front(), 1e-9))
      throw Error(ErrorKind::Input, "triangle sides do not close up");
  }
}

GeodesicTriangle GeodesicTriangle::from_points(const MkComplex& cx, const ComplexPoint& p,
                                               const ComplexPoint& q, const ComplexPoint& r) {
  return GeodesicTriangle(shortest_geodesic(cx, p, q), shortest_geodesic(cx, q, r),
                          shortest_geodesic(cx, r, p));
}

double GeodesicTriangle::perimeter() const {
  return sides_[0].length() + sides_[1].length() + sides_[2].length();
}

namespace {

struct Comparison {
  std::array<ModelPoint, 3> corners;
};

Comparison comparison_of(const GeodesicTriangle& tri, Curvature k) {
  std::array<double, 3> l{tri.side(0).length(), tri.side(1).length(), tri.side(2).length()};
  if (k.kappa() == 1 && l[0] + l[1] + l[2] >= kTwoPi)
    throw Error(ErrorKind::Infeasible, "spherical comparison needs perimeter < 2*pi");
  // Straightened sides may overshoot a tight triangle inequality by rounding.
  for (int i = 0; i < 3; ++i) {
    const double others = l[(i + 1) % 3] + l[(i + 2) % 3];
    if (l[i] > others) l[i] = others;
  }
  return {comparison_triangle(l[0], l[1], l[2], k)};
}

double pair_violation(const GeodesicTriangle& tri, const Comparison& cmp, int i, double s, int j,
                      double t) {
  const MkComplex& cx = tri.complex();
  const double d = complex_distance(cx, tri.side(i).at(s), tri.side(j).at(t));
  const ModelPoint X = geodesic_point(cmp.corners[i], cmp.corners[(i + 1) % 3], s);
  const ModelPoint Y = geodesic_point(cmp.corners[j], cmp.corners[(j + 1) % 3], t);
  return d - dist(X, Y);
}

} // namespace

double cat_pair_violation(const GeodesicTriangle& tri, int side_x, double s, int side_y, double t,
                          std::optional<Curvature> comparison) {
  if (side_x < 0 || side_x > 2 || side_y < 0 || side_y > 2)
    throw Error(ErrorKind::Input, "side index outside 0..2");
  check_params(s);
  check_params(t);
  const Comparison cmp = comparison_of(tri, comparison.value_or(tri.complex().curvature()));
  return pair_violation(tri, cmp, side_x, s, side_y, t);
}

SampledCheck cat_inequality_sample(const GeodesicTriangle& tri, int n_samples, std::uint64_t seed,
                                   std::optional<Curvature> comparison) {
  if (n_samples < 0) throw Error(ErrorKind::Input, "negative sample count");
  const Comparison cmp = comparison_of(tri, comparison.value_or(tri.complex().curvature()));
  const double floor = kRounding * std::max(1.0, tri.perimeter());
  std::mt19937_64 rng(seed);
  SampledCheck out;
  out.samples = n_samples;
  double best = 0.0;
  int bi = -1, bj = -1;
  double bs = 0.0, bt = 0.0;
  for (int n = 0; n < n_samples; ++n) {
    const int i = static_cast<int>(rng() % 3);
    const int j = (i + 1 + static_cast<int>(rng() % 2)) % 3;
    const double s = uniform01(rng), t = uniform01(rng);
    const double v = pair_violation(tri, cmp, i, s, j, t);
    if (v > floor && v > best) {
      best = v;
      bi = i;
      bj = j;
      bs = s;
      bt = t;
    }
  }
  out.value = best;
  if (bi >= 0) {
    const MkComplex& cx = tri.complex();
    ViolationReport r;
    r.kind = ViolationKind::CatComparison;
    r.magnitude = best;
    for (int k = 0; k < 3; ++k) r.points.push_back(tri.corner(k));
    r.sides = {bi, bj};
    r.params = {bs, bt};
    r.witness = "cat p=" + point_text(cx, tri.corner(0)) + " q=" + point_text(cx, tri.corner(1)) +
                " r=" + point_text(cx, tri.corner(2)) + " x=" + std::to_string(bi) + "@" +
                num(bs) + " y=" + std::to_string(bj) + "@" + num(bt) + " excess=" + num(best);
    out.worst = std::move(r);
  }
  return out;
}

GeodesicTriangle vertex_probe_triangle(const MkComplex& cx, int vertex, double radius_fraction,
                                       double phase) {
  if (!cx.is_pure(2)) throw Error(ErrorKind::Input, "probe triangles need a pure 2-complex");
  if (vertex < 0 || vertex >= cx.vertex_count()) throw Error(ErrorKind::NotFound, "no such vertex");
  if (!(radius_fraction > 0.0 && radius_fraction < 1.0))
    throw Error(ErrorKind::Input, "radius fraction must lie in (0, 1)");
  const auto fan = vertex_fan(cx, vertex);
  double total = 0.0, reach = kInf;
  for (const auto& f : fan) {
    total += cx.corner_angles(f.simplex)[f.corner];
    // Distance from the vertex to the opposite side bounds the radius.
    const auto& P = cx.placement(f.simplex);
    const ModelPoint& A = P[f.in_vertex];
    const ModelPoint& B = P[f.out_vertex];
    for (int k = 1; k < 64; ++k)
      reach = std::min(reach, dist(P[f.corner], geodesic_point(A, B, k / 64.0)));
    reach = std::min({reach, dist(P[f.corner], A), dist(P[f.corner], B)});
  }
  const double radius = radius_fraction * reach * std::cos(kPi / 64);
  std::array<ComplexPoint, 3> pts;
  for (int k = 0; k < 3; ++k) {
    double phi = std::fmod(phase + k * total / 3.0, total);
    if (phi < 0) phi += total;
    for (const auto& f : fan) {
      const double ang = cx.corner_angles(f.simplex)[f.corner];
      if (phi > ang && &f != &fan.back()) {
        phi -= ang;
        continue;
      }
      const auto& P = cx.placement(f.simplex);
      const ModelPoint& C = P[f.corner];
      const auto u = unit_tangent(C, P[f.in_vertex]);
      auto nrm = tangent_normal(C, u);
      const auto target = unit_tangent(C, P[f.out_vertex]);
      if (model_dot(cx.curvature(), nrm, target) < 0)
        for (auto& x : nrm) x = -x;
      const double a = std::min(phi, ang);
      std::array<double, 3> dir{};
      for (int c = 0; c < 3; ++c) dir[c] = std::cos(a) * u[c] + std::sin(a) * nrm[c];
      const ModelPoint X = exp_map(C, dir, radius);
      ComplexPoint p;
      p.simplex = f.simplex;
      p.bary = barycentric_in(P, X);
      for (auto& b : p.bary) b = std::max(b, 0.0);
      const double sum = p.bary[0] + p.bary[1] + p.bary[2];
      for (auto& b : p.bary) b /= sum;
      pts[k] = p;
      break;
    }
  }
  return GeodesicTriangle::from_points(cx, pts[0], pts[1], pts[2]);
}

// ---------------------------------------------------------------------------

double convexity_violation_at(const ComplexPath& c, const ComplexPath& c2, double t) {
  check_params(t);
  const MkComplex& cx = c.complex();
  if (&c2.complex() != &cx) throw Error(ErrorKind::Input, "geodesics lie in different complexes");
  const double d0 = complex_distance(cx, c.front(), c2.front());
  const double d1 = complex_distance(cx, c.back(), c2.back());
  const double dt = complex_distance(cx, c.at(t), c2.at(t));
  return dt - ((1.0 - t) * d0 + t * d1);
}

SampledCheck convexity_check(const ComplexPath& c, const ComplexPath& c2, int n) {
  if (n < 1) throw Error(ErrorKind::Input, "convexity check needs at least one interval");
  const MkComplex& cx = c.complex();
  if (&c2.complex() != &cx) throw Error(ErrorKind::Input, "geodesics lie in different complexes");
  const double d0 = complex_distance(cx, c.front(), c2.front());
  const double d1 = complex_distance(cx, c.back(), c2.back());
  const double floor = kRounding * std::max({1.0, c.length(), c2.length(), d0, d1});
  SampledCheck out;
  out.samples = n + 1;
  double best = 0.0, bt = -1.0;
  for (int i = 1; i < n; ++i) {
    const double t = double(i) / n;
    const double v = complex_distance(cx, c.at(t), c2.at(t)) - ((1.0 - t) * d0 + t * d1);
    if (v > floor && v > best) {
      best = v;
      bt = t;
    }
  }
  out.value = best;
  if (bt >= 0.0) {
    ViolationReport r;
    r.kind = ViolationKind::Convexity;
    r.magnitude = best;
    r.points = {c.front(), c.back(), c2.front(), c2.back()};
    r.params = {bt, bt};
    r.witness = "convexity c=" + point_text(cx, c.front()) + "->" + point_text(cx, c.back()) +
                " c'=" + point_text(cx, c2.front()) + "->" + point_text(cx, c2.back()) +
                " t=" + num(bt) + " excess=" + num(best);
    out.worst = std::move(r);
  }
  return out;
}

// ---------------------------------------------------------------------------

double triangle_slimness(const MkComplex& cx, const ComplexPoint& p, const ComplexPoint& q,
                         const ComplexPoint& r, int n) {
  if (n < 1) throw Error(ErrorKind::Input, "slimness needs at least one interval per side");
  if (is_graph(cx)) return graph_slimness(MetricGraph(cx), p, q, r, n);
  if (!cx.is_pure(2))
    throw Error(ErrorKind::Input, "slimness needs a pure 1- or 2-complex");
  return surface_slimness(cx, p, q, r, n);
}

SampledCheck slimness_estimate(const MkComplex& cx, int n_triples, std::uint64_t seed, int n) {
  if (n_triples < 0 || n < 1) throw Error(ErrorKind::Input, "invalid slimness sample counts");
  const bool graph = is_graph(cx);
  if (!graph && !cx.is_pure(2))
    throw Error(ErrorKind::Input, "slimness needs a pure 1- or 2-complex");
  std::optional<MetricGraph> g;
  if (graph) g.emplace(cx);
  SampledCheck out;
  out.samples = n_triples;
  double best = 0.0;
  std::array<ComplexPoint, 3> wit{};
  for (int i = 0; i < n_triples; ++i) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i))));
    const ComplexPoint p = random_point(cx, rng), q = random_point(cx, rng),
                       r = random_point(cx, rng);
    const double gap = graph ? graph_slimness(*g, p, q, r, n) : surface_slimness(cx, p, q, r, n);
    if (gap > best) {
      best = gap;
      wit = {p, q, r};
    }
  }
  out.value = best;
  if (best > 0.0) {
    ViolationReport rep;
    rep.kind = ViolationKind::Slimness;
    rep.magnitude = best;
    rep.points = {wit[0], wit[1], wit[2]};
    rep.params = {static_cast<double>(n), 0.0};
    rep.witness = "slimness p=" + point_text(cx, wit[0]) + " q=" + point_text(cx, wit[1]) +
                  " r=" + point_text(cx, wit[2]) + " samples=" + std::to_string(n) +
                  " gap=" + num(best);
    out.worst = std::move(rep);
  }
  return out;
}

// ---------------------------------------------------------------------------

double quasi_violation_at(const ComplexPath& path, QuasiParams qp, double t, double t2) {
  if (!(qp.lambda >= 1.0) || !(qp.eps >= 0.0))
    throw Error(ErrorKind::Input, "quasi-geodesic parameters need lambda >= 1 and eps >= 0");
  check_params(t);
  check_params(t2);
  const double ds = std::abs(t - t2) * path.length();
  const double d = complex_distance(path.complex(), path.at(t), path.at(t2));
  return std::max(d - (qp.lambda * ds + qp.eps), (ds / qp.lambda - qp.eps) - d);
}

std::optional<ViolationReport> is_quasi_geodesic(const ComplexPath& path, QuasiParams qp, int n,
                                                 double tol) {
  if (!(qp.lambda >= 1.0) || !(qp.eps >= 0.0))
    throw Error(ErrorKind::Input, "quasi-geodesic parameters need lambda >= 1 and eps >= 0");
  if (n < 1) throw Error(ErrorKind::Input, "quasi-geodesic check needs at least one interval");
  const MkComplex& cx = path.complex();
  const auto pts = path.sample(n);
  const double L = path.length();
  const double floor = tol * std::max(1.0, L);
  double best = 0.0;
  int bi = -1, bj = -1;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const double ds = double(j - i) / n * L;
      const double d = complex_distance(cx, pts[i], pts[j]);
      const double v = std::max(d - (qp.lambda * ds + qp.eps), (ds / qp.lambda - qp.eps) - d);
      if (v > floor && v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  if (bi < 0) return std::nullopt;
  ViolationReport r;
  r.kind = ViolationKind::QuasiGeodesic;
  r.magnitude = best;
  r.points = {pts[bi], pts[bj]};
  r.params = {double(bi) / n, double(bj) / n};
  r.witness = "quasi-geodesic lambda=" + num(qp.lambda) + " eps=" + num(qp.eps) +
              " t=" + num(r.params[0]) + " t'=" + num(r.params[1]) + " excess=" + num(best);
  return r;
}

} // namespace mkcx
