#include "mkcx/crescent2d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace mkcx {

namespace {

const Curvature kH = Curvature::hyperbolic();

constexpr double kOrientTol = 1e-13;
constexpr double kAreaTol = 1e-15;

double cross2(Chart2 a, Chart2 b) { return a.x * b.y - a.y * b.x; }
Chart2 sub(Chart2 a, Chart2 b) { return {a.x - b.x, a.y - b.y}; }

double chart_area(const std::vector<Chart2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross2(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

double segment_point_dist2(Chart2 p, Chart2 a, Chart2 b) {
  const Chart2 ab = sub(b, a), ap = sub(p, a);
  const double l2 = ab.x * ab.x + ab.y * ab.y;
  double t = l2 > 0.0 ? (ap.x * ab.x + ap.y * ab.y) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = ap.x - t * ab.x, dy = ap.y - t * ab.y;
  return dx * dx + dy * dy;
}

// Even-odd test; points within tol of the boundary return `on_boundary`.
bool polygon_contains(const std::vector<Chart2>& v, Chart2 p, double tol, bool on_boundary) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    if (segment_point_dist2(p, v[i], v[(i + 1) % n]) <= tol * tol) return on_boundary;
  bool in = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

// Proper crossing of the open segments ab and cd.
bool segments_cross(Chart2 a, Chart2 b, Chart2 c, Chart2 d) {
  const double d1 = orient2d(a, b, c), d2 = orient2d(a, b, d);
  const double d3 = orient2d(c, d, a), d4 = orient2d(c, d, b);
  return ((d1 > kOrientTol && d2 < -kOrientTol) || (d1 < -kOrientTol && d2 > kOrientTol)) &&
         ((d3 > kOrientTol && d4 < -kOrientTol) || (d3 < -kOrientTol && d4 > kOrientTol));
}

Chart2 crossing_point(Chart2 a, Chart2 b, Chart2 c, Chart2 d) {
  const Chart2 r = sub(b, a), s = sub(d, c);
  const double t = cross2(sub(c, a), s) / cross2(r, s);
  return {a.x + t * r.x, a.y + t * r.y};
}

// Strict convex hull (collinear points dropped), counter-clockwise; returns
// positions into `pts`.
std::vector<std::size_t> hull_positions(const std::vector<Chart2>& pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && pts[a].y < pts[b].y);
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](std::size_t a, std::size_t b) {
                          return pts[a].x == pts[b].x && pts[a].y == pts[b].y;
                        }),
            idx.end());
  if (idx.size() < 3) return idx;
  std::vector<std::size_t> h(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && orient2d(pts[h[k - 2]], pts[h[k - 1]], pts[idx[i]]) <= kOrientTol) --k;
    h[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient2d(pts[h[k - 2]], pts[h[k - 1]], pts[idx[i]]) <= kOrientTol) --k;
    h[k++] = idx[i];
  }
  h.resize(k - 1);
  return h;
}

// Lorentz cross product: orthogonal to a and b in the Minkowski form.
std::array<double, 3> lorentz_cross(const ModelPoint& a, const ModelPoint& b) {
  return {-(a[1] * b[2] - a[2] * b[1]), a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double mdot(const std::array<double, 3>& x, const ModelPoint& y) {
  return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

struct Node {
  std::size_t start, end;
  int depth;
  int parent;
  int height = 0;
};

// Pockets of the counter-clockwise polygon given by `seq` (indices into
// `pts`). `forward` tells whether seq runs in the original vertex order.
void collect_pockets(const std::vector<Chart2>& pts, const std::vector<std::size_t>& seq,
                     bool forward, int depth, int parent, std::vector<Node>& out) {
  const std::size_t m = seq.size();
  std::vector<Chart2> q(m);
  for (std::size_t i = 0; i < m; ++i) q[i] = pts[seq[i]];
  auto hull = hull_positions(q);
  if (hull.size() < 3) return;
  // Walk the hull in the polygon's cyclic order.
  std::sort(hull.begin(), hull.end());
  for (std::size_t h = 0; h < hull.size(); ++h) {
    const std::size_t a = hull[h], b = hull[(h + 1) % hull.size()];
    const std::size_t len = (b + m - a) % m;
    if (len <= 1) continue;
    // Split the chain at vertices lying on the lid.
    std::vector<std::size_t> cuts{a};
    for (std::size_t k = 1; k < len; ++k) {
      const std::size_t c = (a + k) % m;
      const Chart2 ab = sub(q[b], q[a]), ac = sub(q[c], q[a]);
      const double l2 = ab.x * ab.x + ab.y * ab.y;
      const double t = (ab.x * ac.x + ab.y * ac.y) / l2;
      if (std::abs(orient2d(q[a], q[b], q[c])) <= kOrientTol * std::sqrt(l2) && t > 0.0 && t < 1.0)
        cuts.push_back(c);
    }
    cuts.push_back(b);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const std::size_t u = cuts[k], v = cuts[k + 1];
      const std::size_t clen = (v + m - u) % m;
      if (clen <= 1) continue;
      std::vector<std::size_t> chain;
      std::vector<Chart2> cpts;
      for (std::size_t s = 0; s <= clen; ++s) {
        chain.push_back(seq[(u + s) % m]);
        cpts.push_back(q[(u + s) % m]);
      }
      if (std::abs(chart_area(cpts)) <= kAreaTol) continue;
      const int id = static_cast<int>(out.size());
      out.push_back({forward ? chain.front() : chain.back(), forward ? chain.back() : chain.front(),
                     depth, parent});
      std::reverse(chain.begin(), chain.end());
      collect_pockets(pts, chain, !forward, depth + 1, id, out);
    }
  }
}

std::size_t cyclic_len(std::size_t s, std::size_t e, std::size_t n) { return (e + n - s) % n; }

std::vector<Chart2> chain_points(const HPolygon& poly, std::size_t s, std::size_t e) {
  std::vector<Chart2> v;
  const std::size_t n = poly.size();
  for (std::size_t k = 0; k <= cyclic_len(s, e, n); ++k) v.push_back(poly[(s + k) % n]);
  return v;
}

// Deficiency-tree height of a polygon given in any orientation.
int deficiency_height(std::vector<Chart2> pts) {
  if (chart_area(pts) < 0.0) std::reverse(pts.begin(), pts.end());
  std::vector<std::size_t> seq(pts.size());
  std::iota(seq.begin(), seq.end(), 0);
  std::vector<Node> nodes;
  collect_pockets(pts, seq, true, 1, -1, nodes);
  int h = 0;
  for (std::size_t i = nodes.size(); i-- > 0;) {
    Node& nd = nodes[i];
    if (nd.parent >= 0) nodes[nd.parent].height = std::max(nodes[nd.parent].height, nd.height + 1);
  }
  for (const auto& nd : nodes)
    if (nd.parent < 0) h = std::max(h, nd.height + 1);
  return h;
}

std::string name(const Crescent2D& c) {
  std::ostringstream os;
  os << "crescent(" << c.start << "," << c.end << ")";
  return os.str();
}

std::vector<bool> alpha_edges(const Crescent2D& c, std::size_t n) {
  std::vector<bool> e(n, false);
  for (std::size_t k = 0; k < cyclic_len(c.start, c.end, n); ++k) e[(c.start + k) % n] = true;
  return e;
}

// Replacement path for the alpha range [s..e]: hull vertices of p_s..p_e
// from p_s to p_e, counter-clockwise for the outer side.
std::vector<std::size_t> hull_path(const HPolygon& poly, std::size_t s, std::size_t e,
                                   CrescentSide side) {
  const std::size_t n = poly.size(), len = cyclic_len(s, e, n);
  std::vector<Chart2> pts;
  for (std::size_t k = 0; k <= len; ++k) pts.push_back(poly[(s + k) % n]);
  auto h = hull_positions(pts);
  auto is = std::find(h.begin(), h.end(), 0), ie = std::find(h.begin(), h.end(), len);
  if (is == h.end() || ie == h.end())
    throw Error(ErrorKind::Input, "crescent endpoints are not extreme points of the alpha-part");
  const std::size_t hs = is - h.begin(), he = ie - h.begin(), hn = h.size();
  std::vector<std::size_t> path;
  if (side == CrescentSide::Outer) {
    for (std::size_t k = hs; k != he; k = (k + 1) % hn) path.push_back(h[k]);
  } else {
    for (std::size_t k = hs; k != he; k = (k + hn - 1) % hn) path.push_back(h[k]);
  }
  path.push_back(len);
  for (std::size_t k = 1; k < path.size(); ++k)
    if (path[k] <= path[k - 1])
      throw Error(ErrorKind::Input, "convex replacement path is not monotone along the alpha-part");
  for (auto& p : path) p = (s + p) % n;
  return path;
}

struct Move {
  std::size_t s, e;
  std::vector<std::size_t> path;
};

HPolygon apply_moves(const HPolygon& poly, const std::vector<Move>& moves) {
  const std::size_t n = poly.size();
  std::vector<bool> keep(n, true);
  for (const auto& m : moves)
    for (std::size_t k = 1; k < cyclic_len(m.s, m.e, n); ++k) keep[(m.s + k) % n] = false;
  for (const auto& m : moves)
    for (auto p : m.path) keep[p] = true;
  std::vector<Chart2> out;
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) out.push_back(poly[i]);
  // Drop straight-angle vertices left on a replacement chord.
  for (bool changed = true; changed && out.size() > 3;) {
    changed = false;
    for (std::size_t i = 0; i < out.size() && out.size() > 3; ++i) {
      const Chart2 a = out[(i + out.size() - 1) % out.size()], b = out[i], c = out[(i + 1) % out.size()];
      const Chart2 ab = sub(b, a), ac = sub(c, a);
      const double l2 = ac.x * ac.x + ac.y * ac.y;
      const double t = (ab.x * ac.x + ab.y * ac.y) / l2;
      if (std::abs(orient2d(a, c, b)) <= kOrientTol * std::sqrt(l2) && t > 0.0 && t < 1.0) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      }
    }
  }
  return HPolygon::from_chart(std::move(out));
}

bool segment_meets_interior(const std::vector<Chart2>& region, Chart2 a, Chart2 b) {
  std::vector<double> ts{0.0, 1.0};
  const std::size_t n = region.size();
  const Chart2 r = sub(b, a);
  for (std::size_t i = 0; i < n; ++i) {
    const Chart2 c = region[i], d = region[(i + 1) % n], s = sub(d, c);
    const double den = cross2(r, s);
    if (std::abs(den) < 1e-300) continue;
    const double t = cross2(sub(c, a), s) / den, u = cross2(sub(c, a), r) / den;
    if (t > 0.0 && t < 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  auto at = [&](double t) { return Chart2{a.x + t * r.x, a.y + t * r.y}; };
  if (ts.size() == 2 && r.x == 0.0 && r.y == 0.0) return polygon_contains(region, a, 1e-12, false);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    if (ts[i + 1] - ts[i] > 1e-14 && polygon_contains(region, at(0.5 * (ts[i] + ts[i + 1])), 1e-12, false))
      return true;
  return false;
}

double marked_distance(const HPolygon& poly, const std::vector<MarkedGeodesic>& marked) {
  double worst = 0.0;
  for (const auto& m : marked) {
    const int samples = m.is_point() ? 1 : 33;
    for (int i = 0; i < samples; ++i) {
      const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
      const Chart2 p{m.a.x + t * (m.b.x - m.a.x), m.a.y + t * (m.b.y - m.a.y)};
      worst = std::max(worst, poly.distance_to_region(from_chart(kH, p)));
    }
  }
  return worst;
}

} // namespace

// ---------------------------------------------------------------------------

HPolygon HPolygon::from_chart(std::vector<Chart2> pts) {
  const std::size_t n = pts.size();
  if (n < 3) throw Error(ErrorKind::Input, "a polygon needs at least 3 vertices");
  for (const auto& p : pts)
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x * p.x + p.y * p.y >= 1.0)
      throw Error(ErrorKind::Input, "polygon vertices must lie inside the Klein disk");
  for (std::size_t i = 0; i < n; ++i) {
    const Chart2& a = pts[i];
    const Chart2& b = pts[(i + 1) % n];
    if (a.x == b.x && a.y == b.y) throw Error(ErrorKind::Input, "consecutive polygon vertices coincide");
  }
  std::size_t far = 0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::hypot(pts[i].x - pts[0].x, pts[i].y - pts[0].y);
    if (d > scale) scale = d, far = i;
  }
  bool flat = true;
  for (std::size_t i = 0; i < n && flat; ++i)
    if (std::abs(orient2d(pts[0], pts[far], pts[i])) > 1e-14 * scale * scale) flat = false;
  if (flat) throw Error(ErrorKind::DegeneratePolygon, "all polygon vertices are collinear");
  HPolygon p;
  if (chart_area(pts) < 0.0) {
    std::reverse(pts.begin() + 1, pts.end());
    p.reoriented_ = true;
  }
  p.k_ = std::move(pts);
  return p;
}

HPolygon HPolygon::from_points(const std::vector<ModelPoint>& pts) {
  std::vector<Chart2> k;
  k.reserve(pts.size());
  for (const auto& p : pts) {
    if (p.curvature() != kH || p.size() != 3)
      throw Error(ErrorKind::UnsupportedCurvature, "polygons live in the hyperbolic plane");
    k.push_back(to_chart(p));
  }
  return from_chart(std::move(k));
}

ModelPoint HPolygon::point(std::size_t i) const { return mkcx::from_chart(kH, k_[i]); }

double HPolygon::signed_chart_area() const { return chart_area(k_); }

double HPolygon::area() const {
  const std::size_t n = k_.size();
  double angles = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n, nxt = (i + 1) % n;
    const double a = tangent_angle(point(i), point(prev), point(nxt));
    angles += orient2d(k_[prev], k_[i], k_[nxt]) >= 0.0 ? a : kTwoPi - a;
  }
  return (static_cast<double>(n) - 2.0) * kPi - angles;
}

bool HPolygon::is_simple() const {
  const std::size_t n = k_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      const Chart2 a = k_[i], b = k_[(i + 1) % n], c = k_[j], d = k_[(j + 1) % n];
      if (segments_cross(a, b, c, d)) return false;
      if (segment_point_dist2(a, c, d) < 1e-28 || segment_point_dist2(c, a, b) < 1e-28) return false;
    }
  return true;
}

bool HPolygon::is_convex() const {
  const std::size_t n = k_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (orient2d(k_[(i + n - 1) % n], k_[i], k_[(i + 1) % n]) <= 1e-14) return false;
  return true;
}

bool HPolygon::contains(Chart2 p, double tol) const { return polygon_contains(k_, p, tol, true); }

double HPolygon::distance_to_region(const ModelPoint& p) const {
  if (contains(to_chart(p))) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k_.size(); ++i) d = std::min(d, point_segment_distance(p, point(i), point(next(i))));
  return d;
}

std::vector<std::size_t> Crescent2D::alpha(std::size_t n) const {
  std::vector<std::size_t> v;
  for (std::size_t k = 0; k <= cyclic_len(start, end, n); ++k) v.push_back((start + k) % n);
  return v;
}

double point_segment_distance(const ModelPoint& x, const ModelPoint& a, const ModelPoint& b) {
  const double dab = dist(a, b);
  const double ends = std::min(dist(x, a), dist(x, b));
  if (dab < 1e-15) return ends;
  auto n = lorentz_cross(a, b);
  const double nn = -n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
  if (!(nn > 0.0)) return ends;
  const double inv = 1.0 / std::sqrt(nn);
  for (auto& c : n) c *= inv;
  const double h = mdot(n, x);
  // Orthogonal projection onto the geodesic through a and b.
  double f[3] = {x[0] - h * n[0], x[1] - h * n[1], x[2] - h * n[2]};
  const double ff = -f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
  if (!(ff < 0.0)) return ends;
  const ModelPoint foot = ModelPoint::project(kH, f);
  if (dist(a, foot) + dist(foot, b) - dab > 1e-12 * (1.0 + dab)) return ends;
  return std::min(ends, std::asinh(std::abs(h)));
}

// ---------------------------------------------------------------------------

std::vector<Crescent2D> find_crescents(const HPolygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) throw Error(ErrorKind::Input, "empty polygon");
  std::vector<std::size_t> seq(n);
  std::iota(seq.begin(), seq.end(), 0);
  std::vector<Node> nodes;
  collect_pockets(poly.chart(), seq, true, 1, -1, nodes);
  for (std::size_t i = nodes.size(); i-- > 0;)
    if (nodes[i].parent >= 0)
      nodes[nodes[i].parent].height = std::max(nodes[nodes[i].parent].height, nodes[i].height + 1);

  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (nodes[a].height != nodes[b].height) return nodes[a].height < nodes[b].height;
    if (nodes[a].start != nodes[b].start) return nodes[a].start < nodes[b].start;
    return nodes[a].end < nodes[b].end;
  });
  std::vector<int> rank(nodes.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);
  std::vector<Crescent2D> out;
  for (std::size_t i : order) {
    const Node& nd = nodes[i];
    Crescent2D c;
    c.start = nd.start;
    c.end = nd.end;
    c.depth = nd.depth;
    c.side = nd.depth % 2 == 1 ? CrescentSide::Outer : CrescentSide::Inner;
    c.folding = nd.height;
    c.parent = nd.parent >= 0 ? rank[nd.parent] : -1;
    c.size = crescent_size(c, poly);
    out.push_back(c);
  }
  return out;
}

Crescent2D make_crescent(const HPolygon& poly, std::size_t start, std::size_t end) {
  const std::size_t n = poly.size();
  if (start >= n || end >= n || start == end) throw Error(ErrorKind::Input, "invalid crescent endpoints");
  const auto pts = chain_points(poly, start, end);
  const double area = chart_area(pts);
  if (std::abs(area) <= kAreaTol) throw Error(ErrorKind::Input, "crescent region has no area");
  const Chart2 a = poly[start], b = poly[end];
  for (std::size_t i = 0; i < n; ++i) {
    const Chart2 c = poly[i], d = poly[poly.next(i)];
    if (segments_cross(a, b, c, d))
      throw Error(ErrorKind::Input, "crescent chord crosses the polygon boundary");
    if (i != start && i != end && segment_point_dist2(c, a, b) < 1e-24)
      throw Error(ErrorKind::Input, "crescent chord passes through a polygon vertex");
  }
  Crescent2D c;
  c.start = start;
  c.end = end;
  c.side = area < 0.0 ? CrescentSide::Outer : CrescentSide::Inner;
  c.depth = 0;
  c.folding = deficiency_height(pts);
  c.size = crescent_size(c, poly);
  return c;
}

int folding_number(const Crescent2D& c, const HPolygon& poly) {
  if (c.start >= poly.size() || c.end >= poly.size() || c.start == c.end)
    throw Error(ErrorKind::Input, "crescent does not belong to the polygon");
  return deficiency_height(chain_points(poly, c.start, c.end));
}

const char* to_string(PairRelation r) {
  switch (r) {
  case PairRelation::Disjoint: return "disjoint";
  case PairRelation::Nested: return "nested";
  case PairRelation::Transversal: return "transversal";
  }
  return "?";
}

std::vector<Chart2> crescent_region(const Crescent2D& c, const HPolygon& poly) {
  return chain_points(poly, c.start, c.end);
}

PairRelation classify_pair(const Crescent2D& a, const Crescent2D& b, const HPolygon& poly) {
  if (a.side != b.side) throw Error(ErrorKind::Unsupported, "crescents on opposite sides are not compared");
  const std::size_t n = poly.size();
  const auto ea = alpha_edges(a, n), eb = alpha_edges(b, n);
  bool a_in_b = true, b_in_a = true, any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (ea[i] && !eb[i]) a_in_b = false;
    if (eb[i] && !ea[i]) b_in_a = false;
    if (ea[i] && eb[i]) any = true;
  }
  if (!any) return PairRelation::Disjoint;
  const Chart2 a0 = poly[a.start], a1 = poly[a.end], b0 = poly[b.start], b1 = poly[b.end];
  bool verified = false;
  if (segments_cross(a0, a1, b0, b1)) {
    const auto ra = crescent_region(a, poly), rb = crescent_region(b, poly);
    const Chart2 x = crossing_point(a0, a1, b0, b1);
    const Chart2 u = sub(a1, a0), v = sub(b1, b0);
    const double nu = std::hypot(u.x, u.y), nv = std::hypot(v.x, v.y);
    for (double delta : {1e-6, 1e-8})
      for (int su : {-1, 1})
        for (int sv : {-1, 1}) {
          const Chart2 p{x.x + delta * (su * u.x / nu + sv * v.x / nv),
                         x.y + delta * (su * u.y / nu + sv * v.y / nv)};
          if (polygon_contains(ra, p, 1e-13, false) && polygon_contains(rb, p, 1e-13, false)) verified = true;
        }
  }
  if (verified) return PairRelation::Transversal;
  if (a_in_b || b_in_a) return PairRelation::Nested;
  throw Error(ErrorKind::Input, name(a) + " and " + name(b) + " interleave without crossing chords");
}

HPolygon crescent_move(const HPolygon& poly, const std::vector<Crescent2D>& cls) {
  if (cls.empty()) return poly;
  const std::size_t n = poly.size();
  const CrescentSide side = cls.front().side;
  std::vector<int> fold;
  for (const auto& c : cls) {
    if (c.side != side) throw Error(ErrorKind::Unsupported, "an overlap class lies on one side");
    fold.push_back(folding_number(c, poly));
  }
  const auto all = find_crescents(poly);
  for (std::size_t i = 0; i < cls.size(); ++i)
    for (const auto& d : all) {
      if (d.side != side || d.folding != fold[i]) continue;
      if (std::find(cls.begin(), cls.end(), d) != cls.end()) continue;
      if (classify_pair(cls[i], d, poly) != PairRelation::Disjoint)
        throw Error(ErrorKind::NotOverlapClosed,
                    name(cls[i]) + " overlaps " + name(d) + ", which is missing from the class");
    }
  std::vector<bool> u(n, false);
  for (const auto& c : cls) {
    const auto e = alpha_edges(c, n);
    for (std::size_t i = 0; i < n; ++i) u[i] = u[i] || e[i];
  }
  std::vector<std::size_t> runs;
  for (std::size_t i = 0; i < n; ++i)
    if (u[i] && !u[(i + n - 1) % n]) runs.push_back(i);
  if (runs.size() != 1) throw Error(ErrorKind::Input, "overlap class does not cover a single boundary arc");
  std::size_t e = runs[0];
  while (u[e]) e = (e + 1) % n;
  Move m{runs[0], e, hull_path(poly, runs[0], e, side)};
  return apply_moves(poly, {m});
}

double crescent_size(const Crescent2D& c, const HPolygon& poly) {
  const std::size_t n = poly.size(), len = cyclic_len(c.start, c.end, n);
  if (len <= 1) return 0.0;
  const ModelPoint a = poly.point(c.start), b = poly.point(c.end);
  std::vector<ModelPoint> chain;
  for (std::size_t k = 0; k <= len; ++k) chain.push_back(poly.point((c.start + k) % n));
  double best = 0.0;
  for (int i = 0; i < kCrescentSizeSamples; ++i) {
    const ModelPoint x = geodesic_point(a, b, static_cast<double>(i) / (kCrescentSizeSamples - 1));
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < len; ++k) d = std::min(d, point_segment_distance(x, chain[k], chain[k + 1]));
    best = std::max(best, d);
  }
  return best;
}

double crescent_size_bound(const Crescent2D& c, const HPolygon& poly) {
  return dist(poly.point(c.start), poly.point(c.end)) / (2.0 * (kCrescentSizeSamples - 1));
}

HullResult two_convex_hull(const HPolygon& poly, const std::vector<MarkedGeodesic>& marked, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Input, "epsilon must be positive");
  std::vector<Chart2> hull;
  for (auto i : hull_positions(poly.chart())) hull.push_back(poly[i]);
  for (const auto& m : marked)
    if (!polygon_contains(hull, m.a, 1e-10, true) || !polygon_contains(hull, m.b, 1e-10, true))
      throw Error(ErrorKind::Input, "marked geodesics must lie in the convex hull of the polygon");
  HullResult res;
  HPolygon cur = poly;
  for (;;) {
    const auto cres = find_crescents(cur);
    if (cres.empty()) break;
    for (const auto& c : cres) {
      const auto region = crescent_region(c, cur);
      for (const auto& m : marked)
        if (segment_meets_interior(region, m.a, m.b))
          throw Error(ErrorKind::Incompressibility, "a marked geodesic meets the interior of " + name(c));
    }
    HullIteration it;
    it.vertices_before = cur.size();
    std::vector<Move> moves;
    for (const auto& c : cres) {
      it.max_folding = std::max(it.max_folding, c.folding);
      if (c.folding == 0) moves.push_back({c.start, c.end, hull_path(cur, c.start, c.end, c.side)});
    }
    it.moves = static_cast<int>(moves.size());
    cur = apply_moves(cur, moves);
    it.vertices_after = cur.size();
    it.max_marked_distance = marked_distance(cur, marked);
    res.max_marked_distance = std::max(res.max_marked_distance, it.max_marked_distance);
    res.trace.push_back(it);
    if (it.max_marked_distance > eps)
      throw Error(ErrorKind::Incompressibility, "a marked geodesic left the eps-neighbourhood of the region");
  }
  res.polygon = std::move(cur);
  return res;
}

} // namespace mkcx
