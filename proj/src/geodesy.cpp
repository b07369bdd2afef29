#include "mkcx/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <utility>

namespace mkcx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::array<double, 3> lift(const ModelPoint& p) {
  if (p.curvature().kappa() == 0) return {1.0, p[0], p[1]};
  return {p[0], p[1], p[2]};
}

double det3(const std::array<double, 3>& a, const std::array<double, 3>& b,
            const std::array<double, 3>& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

void check_point(const MkComplex& cx, const ComplexPoint& p) {
  if (cx.curvature().kappa() == 1)
    throw Error(ErrorKind::UnsupportedCurvature, "geodesics are computed for kappa <= 0");
  if (p.simplex < 0 || p.simplex >= cx.simplex_count())
    throw Error(ErrorKind::Input, "point refers to an unknown simplex");
  if (cx.simplex(p.simplex).dim != 2)
    throw Error(ErrorKind::Unsupported, "geodesics need triangles");
  const double s = p.bary[0] + p.bary[1] + p.bary[2];
  if (std::abs(s - 1.0) > 1e-12)
    throw Error(ErrorKind::Input, "barycentric coordinates must sum to 1");
  for (double b : p.bary)
    if (!(b >= -1e-12)) throw Error(ErrorKind::Input, "barycentric coordinate is negative");
}

std::array<double, 3> clean_bary(std::array<double, 3> b) {
  for (double& x : b)
    if (x < 0.0) x = 0.0;
  const double s = b[0] + b[1] + b[2];
  for (double& x : b) x /= s;
  return b;
}

// Places the neighbour of a placed triangle across one of its faces.
std::array<ModelPoint, 3> unfold_across(const MkComplex& cx, int s,
                                        const std::array<ModelPoint, 3>& corners, int face) {
  const auto& a = cx.across(s, face);
  std::array<ModelPoint, 3> out;
  const int u = (face + 1) % 3, w = (face + 2) % 3;
  out[a.map[u]] = corners[u];
  out[a.map[w]] = corners[w];
  const MetricSimplex& ns = cx.simplex(a.simplex);
  const double du = ns.length(a.face, a.map[u]);
  const double dw = ns.length(a.face, a.map[w]);
  const double o = orient2d(to_chart(corners[u]), to_chart(corners[w]), to_chart(corners[face]));
  out[a.face] = place_third(corners[u], corners[w], du, dw, o > 0.0 ? -1 : 1);
  return out;
}

int other_face_at(int corner, int face) {
  const int f1 = (corner + 1) % 3, f2 = (corner + 2) % 3;
  return face == f1 ? f2 : f1;
}

// --------------------------------------------------------------------------
// Corridors and their unfolding.

struct Corridor {
  std::vector<int> tri;
  std::vector<int> exit; // exit[i] = face of tri[i] crossed into tri[i + 1]
};

Corridor corridor_of(const ComplexPath& path) {
  Corridor c;
  const auto& w = path.waypoints();
  c.tri.push_back(w.front().point.simplex);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const int f = path.hop_face(i);
    if (f < 0) continue;
    c.exit.push_back(f);
    c.tri.push_back(w[i + 1].point.simplex);
  }
  return c;
}

void drop_backtracks(const MkComplex& cx, Corridor& c) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 2 < c.tri.size(); ++i) {
      const auto& a = cx.across(c.tri[i], c.exit[i]);
      if (c.tri[i + 2] == c.tri[i] && a.face == c.exit[i + 1]) {
        c.tri.erase(c.tri.begin() + static_cast<long>(i) + 1,
                    c.tri.begin() + static_cast<long>(i) + 3);
        c.exit.erase(c.exit.begin() + static_cast<long>(i),
                     c.exit.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
}

struct Sleeve {
  Corridor cor;
  std::vector<std::array<ModelPoint, 3>> corners;
  std::vector<std::array<int, 3>> sid; // sleeve vertex id per corner
  std::vector<ModelPoint> pos;
  std::vector<Chart2> chart;
  std::vector<int> vertex;                // quotient vertex per sleeve vertex
  std::vector<std::array<int, 2>> portal; // (left, right) sleeve ids per exit
};

Sleeve unfold(const MkComplex& cx, Corridor cor) {
  Sleeve s;
  s.cor = std::move(cor);
  const std::size_t k = s.cor.tri.size();
  s.corners.resize(k);
  s.sid.resize(k);
  s.corners[0] = cx.placement(s.cor.tri[0]);
  for (int i = 0; i < 3; ++i) {
    s.sid[0][i] = static_cast<int>(s.pos.size());
    s.pos.push_back(s.corners[0][i]);
    s.vertex.push_back(cx.vertex_of(s.cor.tri[0], i));
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const int t = s.cor.tri[i], f = s.cor.exit[i];
    const auto& a = cx.across(t, f);
    if (a.simplex != s.cor.tri[i + 1]) throw Error(ErrorKind::Input, "corridor is not connected");
    s.corners[i + 1] = unfold_across(cx, t, s.corners[i], f);
    for (int j = 0; j < 3; ++j)
      if (j != f) s.sid[i + 1][a.map[j]] = s.sid[i][j];
    s.sid[i + 1][a.face] = static_cast<int>(s.pos.size());
    s.pos.push_back(s.corners[i + 1][a.face]);
    s.vertex.push_back(cx.vertex_of(a.simplex, a.face));
  }
  for (const auto& p : s.pos) s.chart.push_back(to_chart(p));
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const int f = s.cor.exit[i];
    const int u = s.sid[i][(f + 1) % 3], w = s.sid[i][(f + 2) % 3], x = s.sid[i][f];
    if (orient2d(s.chart[x], s.chart[u], s.chart[w]) < 0.0)
      s.portal.push_back({u, w});
    else
      s.portal.push_back({w, u});
  }
  return s;
}

int local_of(const Sleeve& s, std::size_t i, int sid) {
  for (int j = 0; j < 3; ++j)
    if (s.sid[i][j] == sid) return j;
  return -1;
}

// --------------------------------------------------------------------------
// Funnel (string pulling) in the chart of the unfolded sleeve.

struct PolyPoint {
  ModelPoint pos;
  Chart2 chart;
  int sid = -1; // sleeve vertex, -1 for the endpoints
};

std::vector<PolyPoint> funnel(const Sleeve& s, const ModelPoint& p, const ModelPoint& q) {
  struct Node {
    Chart2 c;
    int id;
  };
  const Chart2 pc = to_chart(p), qc = to_chart(q);
  std::vector<std::array<Node, 2>> portals;
  portals.push_back({Node{pc, -1}, Node{pc, -1}});
  for (const auto& pr : s.portal)
    portals.push_back({Node{s.chart[pr[0]], pr[0]}, Node{s.chart[pr[1]], pr[1]}});
  portals.push_back({Node{qc, -2}, Node{qc, -2}});

  auto same = [](const Node& a, const Node& b) {
    if (a.id >= 0 && a.id == b.id) return true;
    const double dx = a.c.x - b.c.x, dy = a.c.y - b.c.y;
    return dx * dx + dy * dy <= 1e-30;
  };
  std::vector<Node> out{portals[0][0]};
  Node apex = portals[0][0], left = apex, right = apex;
  int left_i = 0, right_i = 0;
  const int n = static_cast<int>(portals.size());
  for (int i = 1; i < n; ++i) {
    const Node& L = portals[i][0];
    const Node& R = portals[i][1];
    if (orient2d(apex.c, right.c, R.c) >= 0.0) {
      if (same(apex, right) || orient2d(apex.c, left.c, R.c) < 0.0) {
        right = R;
        right_i = i;
      } else {
        if (!same(out.back(), left)) out.push_back(left);
        apex = left;
        right = apex;
        right_i = left_i;
        i = left_i;
        continue;
      }
    }
    if (orient2d(apex.c, left.c, L.c) <= 0.0) {
      if (same(apex, left) || orient2d(apex.c, right.c, L.c) > 0.0) {
        left = L;
        left_i = i;
      } else {
        if (!same(out.back(), right)) out.push_back(right);
        apex = right;
        left = apex;
        left_i = right_i;
        i = right_i;
        continue;
      }
    }
  }
  out.push_back(portals.back()[0]);
  auto coincide = [](const Node& a, const Node& b) {
    const double dx = a.c.x - b.c.x, dy = a.c.y - b.c.y;
    return dx * dx + dy * dy <= 1e-30;
  };
  if (out.size() > 2 && coincide(out[out.size() - 2], out.back())) out.erase(out.end() - 2);
  if (out.size() > 2 && coincide(out[0], out[1])) out.erase(out.begin() + 1);

  std::vector<PolyPoint> poly;
  for (const Node& nd : out) {
    if (nd.id >= 0)
      poly.push_back({s.pos[nd.id], nd.c, nd.id});
    else
      poly.push_back({nd.id == -1 ? p : q, nd.c, -1});
  }
  return poly;
}

// Where the polyline meets each portal.
struct Crossing {
  int sid = -1;     // sleeve vertex when the crossing is at a portal end
  ModelPoint point; // otherwise
  int segment = 0;  // polyline segment index
};

std::vector<Crossing> crossings(const Sleeve& s, const std::vector<PolyPoint>& poly) {
  std::vector<Crossing> out;
  std::size_t r = 0;
  bool reached = false;
  for (std::size_t j = 0; j < s.portal.size(); ++j) {
    const auto& pr = s.portal[j];
    auto contains = [&](int id) { return id >= 0 && (pr[0] == id || pr[1] == id); };
    while (r + 1 < poly.size() - 1 && reached && !contains(poly[r + 1].sid)) {
      ++r;
      reached = false;
    }
    if (r + 1 < poly.size() - 1 && contains(poly[r + 1].sid)) {
      reached = true;
      out.push_back({poly[r + 1].sid, s.pos[poly[r + 1].sid], static_cast<int>(r)});
      continue;
    }
    if (contains(poly[r].sid)) {
      out.push_back({poly[r].sid, s.pos[poly[r].sid], static_cast<int>(r)});
      continue;
    }
    const Chart2 a = poly[r].chart, b = poly[r + 1].chart;
    const Chart2 L = s.chart[pr[0]], R = s.chart[pr[1]];
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double ex = R.x - L.x, ey = R.y - L.y;
    const double den = dx * ey - dy * ex;
    double lam = 0.5;
    if (std::abs(den) > 0.0) lam = ((L.x - a.x) * dy - (L.y - a.y) * dx) / den;
    lam = std::clamp(lam, 0.0, 1.0);
    if (lam <= 1e-13) {
      out.push_back({pr[0], s.pos[pr[0]], static_cast<int>(r)});
    } else if (lam >= 1.0 - 1e-13) {
      out.push_back({pr[1], s.pos[pr[1]], static_cast<int>(r)});
    } else {
      const Curvature c = s.pos[0].curvature();
      out.push_back({-1, from_chart(c, {L.x + lam * ex, L.y + lam * ey}), static_cast<int>(r)});
    }
  }
  return out;
}

// --------------------------------------------------------------------------
// Angles at a vertex of the sleeve.

struct VertexSides {
  double sleeve = 0.0;
  double other = kInf;
  bool sleeve_is_right = true;
  int a = 0, b = 0;
  // Triangles and exit faces walking around the vertex the other way, from
  // tri[a] to tri[b] (exclusive of both).
  std::vector<int> walk_tri, walk_exit;
  int first_exit = -1;
};

VertexSides vertex_sides(const MkComplex& cx, const Sleeve& s, int sid, const ModelPoint& U,
                         const ModelPoint& W) {
  VertexSides vs;
  const int k = static_cast<int>(s.cor.tri.size());
  int a = -1, b = -1;
  for (int i = 0; i < k; ++i)
    if (local_of(s, i, sid) >= 0) {
      if (a < 0) a = i;
      b = i;
    }
  vs.a = a;
  vs.b = b;
  const ModelPoint& V = s.pos[sid];
  for (int j = a; j < b; ++j)
    if (s.portal[j][0] == sid) {
      vs.sleeve_is_right = true;
      break;
    } else if (s.portal[j][1] == sid) {
      vs.sleeve_is_right = false;
      break;
    }

  auto other_end = [&](int j) { return s.portal[j][0] == sid ? s.portal[j][1] : s.portal[j][0]; };
  const int ca = local_of(s, a, sid);
  if (a == b) {
    vs.sleeve = tangent_angle(V, U, W);
    // The other side is the rest of the full turn around an interior vertex.
    double total = 0.0;
    bool closed = true;
    int t = s.cor.tri[a], c = ca, exit = (ca + 1) % 3;
    for (int guard = 0; guard < 6 * cx.simplex_count() + 6; ++guard) {
      const auto& ac = cx.across(t, exit);
      if (ac.simplex < 0) {
        closed = false;
        break;
      }
      const int cn = ac.map[c];
      t = ac.simplex;
      c = cn;
      if (t == s.cor.tri[a] && c == ca) break;
      total += cx.corner_angles(t)[c];
      exit = other_face_at(c, ac.face);
    }
    if (closed) vs.other = total + cx.corner_angles(s.cor.tri[a])[ca] - vs.sleeve;
    return vs;
  }

  const double in_part = tangent_angle(V, U, s.pos[other_end(a)]);
  const double out_part = tangent_angle(V, s.pos[other_end(b - 1)], W);
  vs.sleeve = in_part + out_part;
  for (int i = a + 1; i < b; ++i) vs.sleeve += cx.corner_angles(s.cor.tri[i])[local_of(s, i, sid)];

  const int cb = local_of(s, b, sid);
  const int entry_b = cx.across(s.cor.tri[b - 1], s.cor.exit[b - 1]).face;
  const int target_face = other_face_at(cb, entry_b);
  double total = (cx.corner_angles(s.cor.tri[a])[ca] - in_part) +
                 (cx.corner_angles(s.cor.tri[b])[cb] - out_part);
  int t = s.cor.tri[a], c = ca, exit = other_face_at(ca, s.cor.exit[a]);
  vs.first_exit = exit;
  for (int guard = 0; guard < 6 * cx.simplex_count() + 6; ++guard) {
    const auto& ac = cx.across(t, exit);
    if (ac.simplex < 0) return vs;
    const int cn = ac.map[c];
    if (ac.simplex == s.cor.tri[b] && cn == cb && ac.face == target_face) {
      vs.other = total;
      return vs;
    }
    t = ac.simplex;
    c = cn;
    if (t == s.cor.tri[a] && c == ca) return vs;
    total += cx.corner_angles(t)[c];
    exit = other_face_at(c, ac.face);
    vs.walk_tri.push_back(t);
    vs.walk_exit.push_back(exit);
  }
  vs.walk_tri.clear();
  vs.walk_exit.clear();
  return vs;
}

struct Breakpoint {
  int sid = -1;
  ModelPoint U, W;
};

bool coincident(Chart2 a, Chart2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy <= 1e-30;
}

std::vector<Breakpoint> breakpoints_of(const Sleeve& s, const std::vector<PolyPoint>& poly,
                                       const std::vector<Crossing>& cr) {
  std::vector<Breakpoint> out;
  std::set<int> seen;
  for (std::size_t r = 1; r + 1 < poly.size(); ++r) {
    seen.insert(poly[r].sid);
    out.push_back({poly[r].sid, poly[r - 1].pos, poly[r + 1].pos});
  }
  for (const Crossing& c : cr) {
    if (c.sid < 0 || !seen.insert(c.sid).second) continue;
    const Chart2 x = s.chart[c.sid];
    if (coincident(x, poly.front().chart) || coincident(x, poly.back().chart)) continue;
    out.push_back({c.sid, poly[c.segment].pos, poly[c.segment + 1].pos});
  }
  return out;
}

// --------------------------------------------------------------------------
// Building paths from straightened sleeves.

ComplexPath path_from(const MkComplex& cx, const Sleeve& s, const ComplexPoint& p,
                      const ComplexPoint& q, const std::vector<Crossing>& cr) {
  std::vector<Waypoint> w;
  auto push = [&](const ComplexPoint& pt, bool virt) {
    if (!w.empty() && w.back().point.simplex == pt.simplex && w.back().point.bary == pt.bary)
      return;
    w.push_back({pt, virt});
  };
  push(p, corner_of(p) >= 0);
  for (std::size_t j = 0; j < cr.size(); ++j) {
    const int t = s.cor.tri[j], f = s.cor.exit[j];
    const auto& a = cx.across(t, f);
    if (cr[j].sid >= 0) {
      const int c = local_of(s, j, cr[j].sid);
      push(vertex_point(t, c), true);
      w.push_back({vertex_point(a.simplex, a.map[c]), true});
    } else {
      auto b = barycentric_in(s.corners[j], cr[j].point);
      b[f] = 0.0;
      b = clean_bary(b);
      push({t, b}, false);
      std::array<double, 3> nb{};
      for (int i = 0; i < 3; ++i) nb[a.map[i]] = b[i];
      w.push_back({{a.simplex, nb}, false});
    }
  }
  if (w.size() == 1 || w.back().point.simplex != q.simplex || w.back().point.bary != q.bary)
    w.push_back({q, corner_of(q) >= 0});
  if (w.size() == 1) w.push_back(w.front());
  return ComplexPath(cx, std::move(w));
}

struct Straightened {
  Corridor cor;
  ComplexPath path;
  std::vector<PolyPoint> poly;
  Sleeve sleeve;
};

ComplexPoint carry_across(const MkComplex& cx, const ComplexPoint& x, int face) {
  const auto& a = cx.across(x.simplex, face);
  std::array<double, 3> b = x.bary;
  b[face] = 0.0;
  b = clean_bary(b);
  ComplexPoint out{a.simplex, {0.0, 0.0, 0.0}};
  for (int i = 0; i < 3; ++i) out.bary[a.map[i]] = b[i];
  return out;
}

// Drops corridor ends that an endpoint only touches along the crossed face,
// so that the endpoints never lie on a portal. The discarded representations
// are collected in path order.
void trim_ends(const MkComplex& cx, Corridor& cor, ComplexPoint& p, ComplexPoint& q,
               std::vector<ComplexPoint>& head, std::vector<ComplexPoint>& tail) {
  while (cor.tri.size() > 1 && p.bary[cor.exit[0]] <= 1e-12) {
    head.push_back(p);
    p = carry_across(cx, p, cor.exit[0]);
    cor.tri.erase(cor.tri.begin());
    cor.exit.erase(cor.exit.begin());
  }
  while (cor.tri.size() > 1) {
    const std::size_t k = cor.tri.size();
    const auto& a = cx.across(cor.tri[k - 2], cor.exit[k - 2]);
    if (q.bary[a.face] > 1e-12) break;
    tail.insert(tail.begin(), q);
    q = carry_across(cx, q, a.face);
    cor.tri.pop_back();
    cor.exit.pop_back();
  }
}

ComplexPath with_ends(const MkComplex& cx, const ComplexPath& path,
                      const std::vector<ComplexPoint>& head,
                      const std::vector<ComplexPoint>& tail) {
  if (head.empty() && tail.empty()) return path;
  std::vector<Waypoint> w;
  for (const auto& x : head) w.push_back({x, corner_of(x) >= 0});
  w.insert(w.end(), path.waypoints().begin(), path.waypoints().end());
  for (const auto& x : tail) w.push_back({x, corner_of(x) >= 0});
  return ComplexPath(cx, std::move(w));
}

Straightened straighten_corridor(const MkComplex& cx, Corridor cor, ComplexPoint p, ComplexPoint q,
                                 const StraightenOptions& opt, bool trim = true) {
  drop_backtracks(cx, cor);
  std::vector<ComplexPoint> head, tail;
  double worst = 0.0;
  for (int iter = 0; iter <= opt.max_iters; ++iter) {
    if (trim) trim_ends(cx, cor, p, q, head, tail);
    Sleeve s = unfold(cx, cor);
    const ModelPoint ps = point_in(s.corners.front(), p.bary);
    const ModelPoint qs = point_in(s.corners.back(), q.bary);
    auto poly = funnel(s, ps, qs);
    auto cr = crossings(s, poly);
    auto bps = breakpoints_of(s, poly, cr);
    worst = 0.0;
    int pick = -1;
    VertexSides pick_sides;
    for (std::size_t i = 0; i < bps.size(); ++i) {
      const VertexSides vs = vertex_sides(cx, s, bps[i].sid, bps[i].U, bps[i].W);
      const double deficit = kPi - vs.other;
      if (deficit > opt.tol && deficit > worst && vs.first_exit >= 0) {
        worst = deficit;
        pick = static_cast<int>(i);
        pick_sides = vs;
      }
    }
    if (pick < 0) {
      ComplexPath path = with_ends(cx, path_from(cx, s, p, q, cr), head, tail);
      return {s.cor, std::move(path), std::move(poly), std::move(s)};
    }
    if (iter == opt.max_iters) break;
    // Reroute tri[a..b] around the other side of the vertex.
    const int a = pick_sides.a, b = pick_sides.b;
    Corridor n;
    for (int i = 0; i < a; ++i) {
      n.tri.push_back(cor.tri[i]);
      n.exit.push_back(cor.exit[i]);
    }
    n.tri.push_back(cor.tri[a]);
    n.exit.push_back(pick_sides.first_exit);
    for (std::size_t i = 0; i < pick_sides.walk_tri.size(); ++i) {
      n.tri.push_back(pick_sides.walk_tri[i]);
      n.exit.push_back(pick_sides.walk_exit[i]);
    }
    for (std::size_t i = b; i < cor.tri.size(); ++i) {
      n.tri.push_back(cor.tri[i]);
      if (i < cor.exit.size()) n.exit.push_back(cor.exit[i]);
    }
    cor = std::move(n);
    drop_backtracks(cx, cor);
  }
  throw Error(ErrorKind::NonConvergence,
              "path straightening did not converge; angle deficit " + std::to_string(worst));
}

} // namespace

// ---------------------------------------------------------------------------
// Points.

ComplexPoint vertex_point(int simplex, int local) {
  ComplexPoint p{simplex, {0.0, 0.0, 0.0}};
  p.bary[local] = 1.0;
  return p;
}

ComplexPoint centroid_point(int simplex) {
  return {simplex, {1.0 / 3.0, 1.0 / 3.0, 1.0 - 2.0 / 3.0}};
}

ModelPoint point_in(const std::array<ModelPoint, 3>& corners, const std::array<double, 3>& b) {
  const Curvature c = corners[0].curvature();
  std::array<double, 3> x{};
  for (int i = 0; i < 3; ++i) {
    const auto l = lift(corners[i]);
    for (int j = 0; j < 3; ++j) x[j] += b[i] * l[j];
  }
  if (c.kappa() == 0) return ModelPoint::make(c, {x[1] / x[0], x[2] / x[0]});
  return ModelPoint::project(c, x);
}

std::array<double, 3> barycentric_in(const std::array<ModelPoint, 3>& corners,
                                     const ModelPoint& x) {
  const auto p0 = lift(corners[0]), p1 = lift(corners[1]), p2 = lift(corners[2]);
  const auto X = lift(x);
  const double d = det3(p0, p1, p2);
  if (d == 0.0) throw Error(ErrorKind::DegenerateTriangle, "degenerate triangle placement");
  std::array<double, 3> l{det3(X, p1, p2) / d, det3(p0, X, p2) / d, det3(p0, p1, X) / d};
  const double s = l[0] + l[1] + l[2];
  for (double& v : l) v /= s;
  return l;
}

ModelPoint placed_point(const MkComplex& cx, const ComplexPoint& p) {
  return point_in(cx.placement(p.simplex), p.bary);
}

int corner_of(const ComplexPoint& p) {
  for (int i = 0; i < 3; ++i)
    if (std::abs(p.bary[i] - 1.0) <= 1e-12) return i;
  return -1;
}

// ---------------------------------------------------------------------------
// Paths.

ComplexPath::ComplexPath(const MkComplex& complex, std::vector<Waypoint> waypoints)
    : complex_(&complex), waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw Error(ErrorKind::Input, "path without waypoints");
  for (const auto& w : waypoints_) check_point(complex, w.point);
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i + 1 < waypoints_.size(); ++i) {
    const ComplexPoint& a = waypoints_[i].point;
    const ComplexPoint& b = waypoints_[i + 1].point;
    if (a.simplex == b.simplex) {
      hop_face_.push_back(-1);
      cumulative_.push_back(cumulative_.back() +
                            dist(placed_point(complex, a), placed_point(complex, b)));
      continue;
    }
    int found = -1;
    for (int f = 0; f < 3 && found < 0; ++f) {
      const auto& ac = complex.across(a.simplex, f);
      if (ac.simplex != b.simplex || std::abs(a.bary[f]) > 1e-9) continue;
      bool match = true;
      for (int j = 0; j < 3; ++j)
        if (std::abs(a.bary[j] - b.bary[ac.map[j]]) > 1e-9) match = false;
      if (match) found = f;
    }
    if (found < 0)
      throw Error(ErrorKind::Input, "waypoints " + std::to_string(i) + " and " +
                                        std::to_string(i + 1) +
                                        " share neither a simplex nor a glued face");
    hop_face_.push_back(found);
    cumulative_.push_back(cumulative_.back());
  }
}

ComplexPoint ComplexPath::at(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  const double L = length();
  if (L <= 0.0) return front();
  const double s = t * L;
  for (std::size_t i = 0; i + 1 < waypoints_.size(); ++i) {
    if (hop_face_[i] >= 0) continue;
    const double a = cumulative_[i], b = cumulative_[i + 1];
    if (s > b && i + 2 < waypoints_.size()) continue;
    if (b <= a) continue;
    const ComplexPoint& P = waypoints_[i].point;
    const auto& pl = complex_->placement(P.simplex);
    const ModelPoint x =
        geodesic_point(point_in(pl, P.bary), point_in(pl, waypoints_[i + 1].point.bary),
                       std::clamp((s - a) / (b - a), 0.0, 1.0));
    return {P.simplex, clean_bary(barycentric_in(pl, x))};
  }
  return back();
}

std::vector<ComplexPoint> ComplexPath::sample(int n) const {
  std::vector<ComplexPoint> out;
  for (int i = 0; i <= n; ++i) out.push_back(at(static_cast<double>(i) / n));
  return out;
}

ComplexPath ComplexPath::reversed() const {
  std::vector<Waypoint> w(waypoints_.rbegin(), waypoints_.rend());
  return ComplexPath(*complex_, std::move(w));
}

namespace {

struct PlacedCopy {
  int s;
  std::array<ModelPoint, 3> corners;
};

// Unfolded copies of the triangles reachable from s0 within `depth` face
// crossings (without immediate backtracking), s0 in its canonical placement.
std::vector<PlacedCopy> neighbourhood(const MkComplex& cx, int s0, int depth) {
  std::vector<PlacedCopy> out{{s0, cx.placement(s0)}};
  std::vector<int> from_face{-1}, level{0};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (level[i] == depth) continue;
    for (int f = 0; f < 3; ++f) {
      if (f == from_face[i]) continue;
      const auto& a = cx.across(out[i].s, f);
      if (a.simplex < 0) continue;
      auto corners = unfold_across(cx, out[i].s, out[i].corners, f);
      out.push_back({a.simplex, std::move(corners)});
      from_face.push_back(a.face);
      level.push_back(level[i] + 1);
    }
  }
  return out;
}

double distance_in(const std::vector<PlacedCopy>& nb, const ModelPoint& P, const ComplexPoint& q) {
  double best = kInf;
  for (const auto& c : nb)
    if (c.s == q.simplex) best = std::min(best, dist(P, point_in(c.corners, q.bary)));
  return best;
}

} // namespace

double nearby_distance(const MkComplex& cx, const ComplexPoint& p, const ComplexPoint& q,
                       int depth) {
  check_point(cx, p);
  check_point(cx, q);
  const auto nb = neighbourhood(cx, p.simplex, depth);
  return distance_in(nb, point_in(nb.front().corners, p.bary), q);
}

bool same_point(const MkComplex& cx, const ComplexPoint& p, const ComplexPoint& q, double tol) {
  if (p.simplex == q.simplex) return dist(placed_point(cx, p), placed_point(cx, q)) <= tol;
  const int cp = corner_of(p), cq = corner_of(q);
  if (cp >= 0 && cq >= 0) return cx.vertex_of(p.simplex, cp) == cx.vertex_of(q.simplex, cq);
  return nearby_distance(cx, p, q, 2) <= tol;
}

double path_hausdorff(const ComplexPath& a, const ComplexPath& b, int n) {
  const MkComplex& cx = a.complex();
  auto one_sided = [&](const ComplexPath& x, const ComplexPath& y) {
    std::vector<ComplexPoint> targets = y.sample(n);
    // The waypoints of the other path carry its bends.
    for (const auto& w : y.waypoints()) targets.push_back(w.point);
    double worst = 0.0;
    for (const auto& p : x.sample(n)) {
      const auto nb = neighbourhood(cx, p.simplex, 4);
      const ModelPoint P = point_in(nb.front().corners, p.bary);
      double best = kInf;
      for (const auto& q : targets) best = std::min(best, distance_in(nb, P, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

// ---------------------------------------------------------------------------
// Straightening.

ComplexPath straighten_path(const ComplexPath& path, const StraightenOptions& opt) {
  return straighten_corridor(path.complex(), corridor_of(path), path.front(), path.back(), opt)
      .path;
}

std::vector<BreakpointAngles> breakpoint_angles(const ComplexPath& path) {
  const MkComplex& cx = path.complex();
  Corridor cor = corridor_of(path);
  Sleeve s = unfold(cx, cor);
  // Unfolded position of every waypoint, with the corridor index it sits in.
  struct Pt {
    ModelPoint pos;
    std::size_t waypoint;
    std::size_t ci;
  };
  std::vector<Pt> pts;
  std::size_t ci = 0;
  const auto& w = path.waypoints();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0 && path.hop_face(i - 1) >= 0) {
      ++ci;
      continue;
    }
    const ModelPoint x = point_in(s.corners[ci], w[i].point.bary);
    if (!pts.empty() && dist(pts.back().pos, x) <= 1e-14) continue;
    pts.push_back({x, i, ci});
  }
  std::vector<BreakpointAngles> out;
  for (std::size_t r = 1; r + 1 < pts.size(); ++r) {
    const ComplexPoint& P = w[pts[r].waypoint].point;
    const int c = corner_of(P);
    BreakpointAngles ba;
    ba.waypoint = pts[r].waypoint;
    if (c >= 0) {
      const int sid = s.sid[pts[r].ci][c];
      const VertexSides vs = vertex_sides(cx, s, sid, pts[r - 1].pos, pts[r + 1].pos);
      ba.vertex = s.vertex[sid];
      ba.right = vs.sleeve_is_right ? vs.sleeve : vs.other;
      ba.left = vs.sleeve_is_right ? vs.other : vs.sleeve;
    } else {
      const double ang = tangent_angle(pts[r].pos, pts[r - 1].pos, pts[r + 1].pos);
      const double o =
          orient2d(to_chart(pts[r - 1].pos), to_chart(pts[r].pos), to_chart(pts[r + 1].pos));
      if (std::abs(ang - kPi) <= 1e-12) continue;
      ba.left = o > 0.0 ? ang : kTwoPi - ang;
      ba.right = kTwoPi - ba.left;
    }
    out.push_back(ba);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Seeds from the edge graph.

namespace {

struct GraphEdge {
  int u = -1, w = -1;
  double len = 0.0;
  int s = -1, a = -1, b = -1; // representative: simplex s, local corners a (at u) and b (at w)
};

struct Graph {
  int n = 0;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<int>> adj;
};

struct GPath {
  std::vector<int> nodes, edges;
  double cost = 0.0;
  bool operator<(const GPath& o) const {
    return std::tie(cost, edges) < std::tie(o.cost, o.edges);
  }
};

std::optional<GPath> dijkstra(const Graph& g, int src, int dst, const std::vector<char>& dead_node,
                              const std::set<int>& dead_edge) {
  std::vector<double> d(g.n, kInf);
  std::vector<int> via(g.n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    if (u == dst) break;
    for (int e : g.adj[u]) {
      if (dead_edge.count(e)) continue;
      const GraphEdge& ge = g.edges[e];
      const int v = ge.u == u ? ge.w : ge.u;
      if (dead_node[v] || v == u) continue;
      const double nd = du + ge.len;
      if (nd < d[v]) {
        d[v] = nd;
        via[v] = e;
        pq.push({nd, v});
      }
    }
  }
  if (d[dst] == kInf) return std::nullopt;
  GPath p;
  p.cost = d[dst];
  int v = dst;
  p.nodes.push_back(v);
  while (v != src) {
    const int e = via[v];
    p.edges.push_back(e);
    v = g.edges[e].u == v ? g.edges[e].w : g.edges[e].u;
    p.nodes.push_back(v);
  }
  std::reverse(p.nodes.begin(), p.nodes.end());
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

std::vector<GPath> yen(const Graph& g, int src, int dst, int k) {
  std::vector<GPath> A;
  std::set<GPath> B;
  auto first = dijkstra(g, src, dst, std::vector<char>(g.n, 0), {});
  if (!first) return A;
  A.push_back(*first);
  while (static_cast<int>(A.size()) < k) {
    const GPath& last = A.back();
    for (std::size_t i = 0; i + 1 < last.nodes.size(); ++i) {
      const int spur = last.nodes[i];
      std::vector<int> root_edges(last.edges.begin(), last.edges.begin() + static_cast<long>(i));
      std::set<int> dead_edge;
      for (const GPath& p : A)
        if (p.edges.size() > i && std::equal(root_edges.begin(), root_edges.end(), p.edges.begin()))
          dead_edge.insert(p.edges[i]);
      std::vector<char> dead_node(g.n, 0);
      double root_cost = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        dead_node[last.nodes[j]] = 1;
        root_cost += g.edges[last.edges[j]].len;
      }
      auto sp = dijkstra(g, spur, dst, dead_node, dead_edge);
      if (!sp) continue;
      GPath total;
      total.nodes.assign(last.nodes.begin(), last.nodes.begin() + static_cast<long>(i));
      total.nodes.insert(total.nodes.end(), sp->nodes.begin(), sp->nodes.end());
      total.edges = root_edges;
      total.edges.insert(total.edges.end(), sp->edges.begin(), sp->edges.end());
      total.cost = root_cost + sp->cost;
      bool known = false;
      for (const GPath& p : A)
        if (p.edges == total.edges) known = true;
      if (!known) B.insert(total);
    }
    if (B.empty()) break;
    A.push_back(*B.begin());
    B.erase(B.begin());
  }
  return A;
}

// Hops around a vertex from corner (s0, c0) to corner (s1, c1): the faces
// crossed, shortest in number of crossings.
std::optional<std::vector<std::pair<int, int>>> fan_walk(const MkComplex& cx, int s0, int c0,
                                                         int s1, int c1) {
  using State = std::pair<int, int>;
  std::map<State, std::pair<State, int>> prev;
  std::deque<State> queue{{s0, c0}};
  prev[{s0, c0}] = {{-1, -1}, -1};
  while (!queue.empty()) {
    const State st = queue.front();
    queue.pop_front();
    if (st == State{s1, c1}) {
      std::vector<std::pair<int, int>> hops; // (simplex, face) crossed from
      State cur = st;
      while (prev[cur].second >= 0) {
        hops.push_back({prev[cur].first.first, prev[cur].second});
        cur = prev[cur].first;
      }
      std::reverse(hops.begin(), hops.end());
      return hops;
    }
    for (int f : {(st.second + 1) % 3, (st.second + 2) % 3}) {
      const auto& a = cx.across(st.first, f);
      if (a.simplex < 0) continue;
      const State nx{a.simplex, a.map[st.second]};
      if (prev.count(nx)) continue;
      prev[nx] = {st, f};
      queue.push_back(nx);
    }
  }
  return std::nullopt;
}

std::optional<ComplexPath> seed_path(const MkComplex& cx, const Graph& g, const GPath& gp,
                                     const ComplexPoint& p, const ComplexPoint& q) {
  std::vector<Waypoint> w{{p, false}};
  int cs = -1, cc = -1;
  auto move_to = [&](int s, int c) {
    auto hops = fan_walk(cx, cs, cc, s, c);
    if (!hops) return false;
    int t = cs, corner = cc;
    for (auto [from, f] : *hops) {
      const auto& a = cx.across(from, f);
      corner = a.map[corner];
      t = a.simplex;
      w.push_back({vertex_point(t, corner), true});
    }
    cs = s;
    cc = c;
    return true;
  };
  for (std::size_t i = 0; i < gp.edges.size(); ++i) {
    const GraphEdge& e = g.edges[gp.edges[i]];
    const int from = gp.nodes[i];
    if (i == 0) {
      // Edge from p to a corner of its simplex.
      cs = p.simplex;
      cc = e.a;
      w.push_back({vertex_point(cs, cc), true});
      continue;
    }
    if (i + 1 == gp.edges.size()) {
      if (!move_to(q.simplex, e.a)) return std::nullopt;
      break;
    }
    const bool forward = e.u == from;
    const int a = forward ? e.a : e.b, b = forward ? e.b : e.a;
    if (!move_to(e.s, a)) return std::nullopt;
    w.push_back({vertex_point(e.s, b), true});
    cc = b;
  }
  w.push_back({q, false});
  return ComplexPath(cx, std::move(w));
}

} // namespace

std::vector<ComplexPath> geodesic_candidates(const MkComplex& cx, const ComplexPoint& p,
                                             const ComplexPoint& q, int k) {
  check_point(cx, p);
  check_point(cx, q);
  if (p.simplex == q.simplex) return {ComplexPath(cx, {{p, false}, {q, false}})};

  Graph g;
  const int nv = cx.vertex_count();
  g.n = nv + 2;
  const int P = nv, Q = nv + 1;
  g.adj.assign(g.n, {});
  std::set<int> seen_edge;
  for (int s = 0; s < cx.simplex_count(); ++s) {
    if (cx.simplex(s).dim != 2) continue;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const int ec = cx.edge_of(s, i, j);
        if (!seen_edge.insert(ec).second) continue;
        g.edges.push_back({cx.vertex_of(s, i), cx.vertex_of(s, j), cx.simplex(s).length(i, j), s, i, j});
      }
  }
  const ModelPoint pp = placed_point(cx, p), qq = placed_point(cx, q);
  for (int i = 0; i < 3; ++i)
    g.edges.push_back({P, cx.vertex_of(p.simplex, i), dist(pp, cx.placement(p.simplex)[i]),
                       p.simplex, i, i});
  for (int i = 0; i < 3; ++i)
    g.edges.push_back({Q, cx.vertex_of(q.simplex, i), dist(qq, cx.placement(q.simplex)[i]),
                       q.simplex, i, i});
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    g.adj[g.edges[e].u].push_back(e);
    if (g.edges[e].w != g.edges[e].u) g.adj[g.edges[e].w].push_back(e);
  }

  const auto seeds = yen(g, P, Q, k);
  if (seeds.empty()) throw Error(ErrorKind::Disconnected, "endpoints are not connected");
  std::vector<ComplexPath> out;
  std::string last_error;
  for (const GPath& gp : seeds) {
    auto sp = seed_path(cx, g, gp, p, q);
    if (!sp) continue;
    try {
      out.push_back(straighten_path(*sp));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonConvergence) throw;
      last_error = e.what();
    }
  }
  if (out.empty())
    throw Error(ErrorKind::NonConvergence,
                last_error.empty() ? "no seed corridor could be built" : last_error);
  return out;
}

ComplexPath shortest_geodesic(const MkComplex& cx, const ComplexPoint& p, const ComplexPoint& q,
                              int k) {
  auto c = geodesic_candidates(cx, p, q, k);
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i].length() < c[best].length()) best = i;
  return std::move(c[best]);
}

double complex_distance(const MkComplex& cx, const ComplexPoint& p, const ComplexPoint& q) {
  return shortest_geodesic(cx, p, q).length();
}

// ---------------------------------------------------------------------------
// Closed geodesics.

ClosedGeodesic tighten_closed(const ComplexPath& loop, const StraightenOptions& opt,
                              double contract_tol) {
  const MkComplex& cx = loop.complex();
  if (loop.front().simplex != loop.back().simplex || !same_point(cx, loop.front(), loop.back()))
    throw Error(ErrorKind::Input, "loop must start and end at the same point of one simplex");
  ClosedGeodesic out;
  Corridor cor = corridor_of(loop);
  ComplexPoint base = loop.front();
  out.length_history.push_back(loop.length());
  for (int iter = 1; iter <= opt.max_iters; ++iter) {
    out.iterations = iter;
    Straightened st = straighten_corridor(cx, cor, base, base, opt, false);
    const double L = st.path.length();
    out.length_history.push_back(L);
    if (L < contract_tol) {
      out.contracted = true;
      out.length = L;
      return out;
    }
    // Corner at the basepoint between the first and the last segment.
    const Sleeve& s = st.sleeve;
    const auto& poly = st.poly;
    const ModelPoint& P0 = poly.front().pos;
    const ModelPoint& P1 = poly[1].pos;
    const ModelPoint back = point_in(s.corners.front(), barycentric_in(s.corners.back(), poly[poly.size() - 2].pos));
    const double corner = tangent_angle(P0, P1, back);
    if (corner >= kPi - opt.tol) {
      out.length = L;
      out.loop = std::move(st.path);
      return out;
    }
    // Move the basepoint half way round and rotate the corridor.
    const ComplexPath& path = st.path;
    const double half = 0.5 * L;
    const auto& w = path.waypoints();
    std::size_t hops_before = 0;
    double acc = 0.0;
    ComplexPoint mid = path.back();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (path.hop_face(i) >= 0) {
        ++hops_before;
        continue;
      }
      const auto& pl = cx.placement(w[i].point.simplex);
      const ModelPoint A = point_in(pl, w[i].point.bary), B = point_in(pl, w[i + 1].point.bary);
      const double seg = dist(A, B);
      if (seg > 0.0 && acc + seg >= half) {
        const ModelPoint X = geodesic_point(A, B, std::clamp((half - acc) / seg, 0.0, 1.0));
        mid = {w[i].point.simplex, clean_bary(barycentric_in(pl, X))};
        break;
      }
      acc += seg;
    }
    const Corridor& c = st.cor;
    const std::size_t k = c.exit.size();
    if (k == 0) {
      base = mid;
      continue;
    }
    const std::size_t m = hops_before % k;
    Corridor rot;
    for (std::size_t j = 0; j < k; ++j) {
      rot.tri.push_back(c.tri[(m + j) % k]);
      rot.exit.push_back(c.exit[(m + j) % k]);
    }
    rot.tri.push_back(c.tri[m]);
    cor = std::move(rot);
    base = mid;
  }
  throw Error(ErrorKind::NonConvergence, "closed geodesic tightening did not converge");
}

} // namespace mkcx
