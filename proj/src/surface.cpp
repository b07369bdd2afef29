#include "mkcx/surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace mkcx {

double model_corner_angle(double a, double b, double c, Curvature k) {
  const double s = 0.5 * (a + b + c);
  const double tol = 1e-9 * std::max(1.0, s);
  if (!(b > 0.0) || !(c > 0.0) || a < 0.0)
    throw Error(ErrorKind::UndefinedAngle, "corner angle needs positive adjacent sides");
  if (s - a < -tol || s - b < -tol || s - c < -tol)
    throw Error(ErrorKind::Input, "sides violate the triangle inequality");
  if (s - a <= 0.0) return kPi;
  if (s - b <= 0.0 || s - c <= 0.0) return 0.0;
  return angle_from_sides(a, b, c, k);
}

void SingularSurface::finish() {
  const int nt = static_cast<int>(triangles_.size());
  corners_.assign(nt, {});
  for (int t = 0; t < nt; ++t) {
    const auto& L = triangles_[t].len;
    for (int i = 0; i < 3; ++i)
      corners_[t][i] = model_corner_angle(L[i], L[(i + 1) % 3], L[(i + 2) % 3], curvature_);
  }

  int boundary_faces = 0, glued_faces = 0;
  for (int t = 0; t < nt; ++t)
    for (int f = 0; f < 3; ++f) (across_[t][f].tri < 0 ? boundary_faces : glued_faces)++;
  edge_count_ = boundary_faces + glued_faces / 2;

  angle_sum_.assign(vertex_count_, 0.0);
  boundary_.assign(vertex_count_, 0);
  std::vector<int> corner_count(vertex_count_, 0);
  for (int t = 0; t < nt; ++t)
    for (int i = 0; i < 3; ++i) {
      angle_sum_[triangles_[t].v[i]] += corners_[t][i];
      corner_count[triangles_[t].v[i]]++;
    }

  // Each vertex must carry exactly one fan of corners.
  std::vector<char> seen_vertex(vertex_count_, 0);
  for (int t0 = 0; t0 < nt; ++t0)
    for (int c0 = 0; c0 < 3; ++c0) {
      const int v = triangles_[t0].v[c0];
      if (seen_vertex[v]) continue;
      seen_vertex[v] = 1;
      int visited = 1;
      bool open = false;
      for (int dir = 1; dir <= 2; ++dir) {
        int t = t0, c = c0, exit = (c0 + dir) % 3;
        for (int guard = 0; guard <= 3 * nt; ++guard) {
          const Across& a = across_[t][exit];
          if (a.tri < 0) {
            open = true;
            break;
          }
          const int cn = a.map[c];
          t = a.tri;
          c = cn;
          if (t == t0 && c == c0) break;
          ++visited;
          exit = (c + 1) % 3 == a.face ? (c + 2) % 3 : (c + 1) % 3;
        }
        if (!open) break;
      }
      if (visited != corner_count[v])
        throw Error(ErrorKind::NotASurface,
                    "vertex " + std::to_string(v) + " is not a surface point");
      boundary_[v] = open ? 1 : 0;
    }
  for (int v = 0; v < vertex_count_; ++v)
    if (!seen_vertex[v])
      throw Error(ErrorKind::Input, "vertex " + std::to_string(v) + " is not used");
}

SingularSurface SingularSurface::from_triangles(Curvature c, int vertex_count,
                                                std::vector<Triangle> triangles) {
  if (triangles.empty()) throw Error(ErrorKind::Input, "surface without triangles");
  SingularSurface s;
  s.curvature_ = c;
  s.vertex_count_ = vertex_count;
  s.triangles_ = std::move(triangles);
  const int nt = static_cast<int>(s.triangles_.size());
  s.across_.assign(nt, {});
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
  for (int t = 0; t < nt; ++t) {
    const auto& tr = s.triangles_[t];
    for (int i = 0; i < 3; ++i) {
      if (tr.v[i] < 0 || tr.v[i] >= vertex_count)
        throw Error(ErrorKind::Input, "triangle vertex id out of range");
      if (!(tr.len[i] >= 0.0)) throw Error(ErrorKind::Input, "negative side length");
    }
    if (tr.v[0] == tr.v[1] || tr.v[1] == tr.v[2] || tr.v[0] == tr.v[2])
      throw Error(ErrorKind::Input, "triangle repeats a vertex");
    for (int f = 0; f < 3; ++f) {
      const int a = tr.v[(f + 1) % 3], b = tr.v[(f + 2) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back({t, f});
    }
  }
  for (const auto& [key, list] : edges) {
    if (list.size() > 2)
      throw Error(ErrorKind::NotASurface, "edge " + std::to_string(key.first) + "-" +
                                              std::to_string(key.second) +
                                              " lies in more than two triangles");
    if (list.size() == 2) {
      const auto [t1, f1] = list[0];
      const auto [t2, f2] = list[1];
      if (std::abs(s.triangles_[t1].len[f1] - s.triangles_[t2].len[f2]) >
          1e-9 * std::max(1.0, s.triangles_[t1].len[f1]))
        throw Error(ErrorKind::Input, "shared edge lengths disagree");
      std::array<int, 3> m12{}, m21{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (s.triangles_[t1].v[i] == s.triangles_[t2].v[j]) {
            m12[i] = j;
            m21[j] = i;
          }
      m12[f1] = f2;
      m21[f2] = f1;
      s.across_[t1][f1] = {t2, f2, m12};
      s.across_[t2][f2] = {t1, f1, m21};
    }
  }
  s.finish();
  return s;
}

SingularSurface SingularSurface::from_complex(const MkComplex& complex) {
  if (!complex.is_pure(2)) throw Error(ErrorKind::NotASurface, "surface needs a pure 2-complex");
  SingularSurface s;
  s.curvature_ = complex.curvature();
  s.vertex_count_ = complex.vertex_count();
  const int nt = complex.simplex_count();
  s.triangles_.resize(nt);
  s.across_.assign(nt, {});
  for (int t = 0; t < nt; ++t) {
    const MetricSimplex& ms = complex.simplex(t);
    for (int i = 0; i < 3; ++i) {
      s.triangles_[t].v[i] = complex.vertex_of(t, i);
      s.triangles_[t].len[i] = ms.length((i + 1) % 3, (i + 2) % 3);
      const auto& a = complex.across(t, i);
      s.across_[t][i] = {a.simplex, a.face, a.map};
    }
  }
  s.finish();
  return s;
}

bool SingularSurface::cat_flag() const {
  for (int v = 0; v < vertex_count_; ++v)
    if (!boundary_[v] && angle_sum_[v] < kTwoPi - kHMapTol) return false;
  return true;
}

double SingularSurface::triangle_area(int t) const {
  const auto& c = corners_[t];
  switch (curvature_.kappa()) {
  case -1:
    return std::max(0.0, kPi - (c[0] + c[1] + c[2]));
  case 1:
    return std::max(0.0, c[0] + c[1] + c[2] - kPi);
  default: {
    std::array<double, 3> l = triangles_[t].len;
    std::sort(l.begin(), l.end(), std::greater<>());
    const double a = l[0], b = l[1], cc = l[2];
    const double p = (a + (b + cc)) * (cc - (a - b)) * (cc + (a - b)) * (a + (b - cc));
    return 0.25 * std::sqrt(std::max(0.0, p));
  }
  }
}

double SingularSurface::area() const {
  double a = 0.0;
  for (int t = 0; t < static_cast<int>(triangles_.size()); ++t) a += triangle_area(t);
  return a;
}

double gauss_bonnet_audit(const SingularSurface& s) {
  double total = s.curvature().kappa() * s.area();
  for (int v = 0; v < s.vertex_count(); ++v)
    total += s.is_boundary(v) ? s.theta(v) : kTwoPi - s.theta(v);
  return std::abs(total - kTwoPi * s.euler_characteristic());
}

HMapSurface::HMapSurface(SingularSurface surface, std::vector<int> distinguished)
    : surface_(std::move(surface)), distinguished_(std::move(distinguished)) {
  const int nv = surface_.vertex_count();
  std::vector<char> is_dist(nv, 0);
  for (int v : distinguished_) {
    if (v < 0 || v >= nv) throw Error(ErrorKind::Input, "distinguished vertex out of range");
    if (!surface_.is_boundary(v))
      throw Error(ErrorKind::Input,
                  "distinguished vertex " + std::to_string(v) + " is not on the boundary");
    if (is_dist[v]) throw Error(ErrorKind::Input, "distinguished vertex repeated");
    is_dist[v] = 1;
    theta_.push_back(kPi - surface_.angle_sum(v));
  }
  h_flags_.assign(nv, 1);
  for (int v = 0; v < nv; ++v) {
    const double need = surface_.is_boundary(v) ? kPi : kTwoPi;
    h_flags_[v] = surface_.angle_sum(v) >= need - kHMapTol;
    if (!h_flags_[v] && !is_dist[v])
      throw Error(ErrorKind::Input, "h-map invariant violated at vertex " + std::to_string(v) +
                                        ": angle sum " + std::to_string(surface_.angle_sum(v)));
  }
}

double h_area_bound_check(const HMapSurface& h) {
  const SingularSurface& s = h.surface();
  double sum = 0.0;
  for (double t : h.theta()) sum += t;
  return sum - kTwoPi * s.euler_characteristic() + s.curvature().kappa() * s.area();
}

HMapSurface regular_ngon_disk(Curvature c, int n, double circumradius) {
  if (n < 3 || !(circumradius > 0.0))
    throw Error(ErrorKind::Input, "polygon needs n >= 3 and a positive radius");
  if (c.kappa() == 1 && circumradius >= kPi / 2)
    throw Error(ErrorKind::Input, "spherical polygon radius must be < pi/2");
  const double phi = kTwoPi / n;
  double side = 0.0;
  switch (c.kappa()) {
  case -1: {
    const double s = std::sinh(circumradius) * std::sin(phi / 2);
    side = 2.0 * std::asinh(s);
    break;
  }
  case 1:
    side = 2.0 * std::asin(std::sin(circumradius) * std::sin(phi / 2));
    break;
  default:
    side = 2.0 * circumradius * std::sin(phi / 2);
  }
  std::vector<SingularSurface::Triangle> tris;
  for (int i = 0; i < n; ++i)
    tris.push_back({{n, i, (i + 1) % n}, {side, circumradius, circumradius}});
  std::vector<int> corners;
  for (int i = 0; i < n; ++i) corners.push_back(i);
  return HMapSurface(SingularSurface::from_triangles(c, n + 1, std::move(tris)),
                     std::move(corners));
}

} // namespace mkcx
