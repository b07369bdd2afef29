#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "mkcx/geodesy.hpp"

namespace mkcx {

namespace {

// Collects net vertices and triangles; side lengths are complex distances,
// cached per vertex pair so shared edges agree exactly.
class NetBuilder {
public:
  explicit NetBuilder(const MkComplex& cx) : cx_(cx) {}

  int add(const ComplexPoint& p) {
    points_.push_back(p);
    return static_cast<int>(points_.size()) - 1;
  }
  void set_length(int a, int b, double len) { lengths_[key(a, b)] = len; }
  double length(int a, int b) {
    auto it = lengths_.find(key(a, b));
    if (it != lengths_.end()) return it->second;
    const double d = complex_distance(cx_, points_[a], points_[b]);
    lengths_[key(a, b)] = d;
    return d;
  }
  // Rail vertices with their along-rail lengths.
  void rail(const std::vector<int>& ids, double rail_length) {
    const double step = rail_length / (static_cast<int>(ids.size()) - 1);
    for (std::size_t j = 0; j + 1 < ids.size(); ++j) set_length(ids[j], ids[j + 1], step);
  }
  // Triangulates the strip between two rails of equal vertex count; a shared
  // first vertex is an apex.
  void ladder(const std::vector<int>& r0, const std::vector<int>& r1) {
    std::size_t j = 0;
    if (r0[0] == r1[0]) {
      triangle(r0[0], r0[1], r1[1]);
      j = 1;
    }
    for (; j + 1 < r0.size(); ++j) {
      const double d1 = length(r0[j], r1[j + 1]);
      const double d2 = length(r0[j + 1], r1[j]);
      if (d1 <= d2) {
        triangle(r0[j], r0[j + 1], r1[j + 1]);
        triangle(r0[j], r1[j + 1], r1[j]);
      } else {
        triangle(r0[j], r0[j + 1], r1[j]);
        triangle(r0[j + 1], r1[j + 1], r1[j]);
      }
    }
  }
  const std::vector<ComplexPoint>& points() const { return points_; }
  SingularSurface surface() const {
    return SingularSurface::from_triangles(cx_.curvature(), static_cast<int>(points_.size()),
                                           tris_);
  }

private:
  static std::pair<int, int> key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
  void triangle(int a, int b, int c) {
    SingularSurface::Triangle t;
    t.v = {a, b, c};
    t.len = {length(b, c), length(c, a), length(a, b)};
    tris_.push_back(t);
  }

  const MkComplex& cx_;
  std::vector<ComplexPoint> points_;
  std::map<std::pair<int, int>, double> lengths_;
  std::vector<SingularSurface::Triangle> tris_;
};

AlphaNet build_net(const MkComplex& cx, const ComplexPath* alpha, const ComplexPoint* alpha_pt,
                   const ComplexPath& beta, int n_rails, int subdivisions) {
  if (n_rails < 2) throw Error(ErrorKind::Input, "an alpha-net needs at least two rails");
  const int s = subdivisions > 0 ? subdivisions : n_rails - 1;
  NetBuilder nb(cx);
  std::vector<ComplexPath> rails;
  std::vector<std::vector<int>> grid;
  std::vector<int> ends;
  int apex = -1;
  if (alpha_pt) {
    apex = nb.add(*alpha_pt);
    ends.push_back(apex);
  }
  for (int i = 0; i < n_rails; ++i) {
    const double t = static_cast<double>(i) / (n_rails - 1);
    const ComplexPoint a = alpha_pt ? *alpha_pt : alpha->at(t);
    rails.push_back(shortest_geodesic(cx, a, beta.at(t)));
    const ComplexPath& r = rails.back();
    std::vector<int> ids;
    for (int j = 0; j <= s; ++j) {
      if (j == 0 && apex >= 0) {
        ids.push_back(apex);
        continue;
      }
      ids.push_back(nb.add(r.at(static_cast<double>(j) / s)));
    }
    nb.rail(ids, r.length());
    if (apex < 0) ends.push_back(ids.front());
    ends.push_back(ids.back());
    grid.push_back(std::move(ids));
  }
  for (int i = 0; i + 1 < n_rails; ++i) nb.ladder(grid[i], grid[i + 1]);
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  HMapSurface surface(nb.surface(), ends);
  return AlphaNet{n_rails, alpha_pt != nullptr, std::move(rails), nb.points(), std::move(grid),
                  std::move(ends), std::move(surface)};
}

} // namespace

AlphaNet build_alpha_net(const MkComplex& cx, const ComplexPath& alpha, const ComplexPath& beta,
                         int n_rails, int subdivisions) {
  return build_net(cx, &alpha, nullptr, beta, n_rails, subdivisions);
}

AlphaNet build_alpha_net(const MkComplex& cx, const ComplexPoint& alpha, const ComplexPath& beta,
                         int n_rails, int subdivisions) {
  return build_net(cx, nullptr, &alpha, beta, n_rails, subdivisions);
}

double adjacent_rail_gap(const AlphaNet& net, int samples) {
  double gap = 0.0;
  for (std::size_t i = 0; i + 1 < net.rails.size(); ++i)
    gap = std::max(gap, path_hausdorff(net.rails[i], net.rails[i + 1], samples));
  return gap;
}

int refine_rail_count(const MkComplex& cx, const ComplexPath& alpha, const ComplexPath& beta,
                      int n0, double gap_tol, int max_rails) {
  if (n0 < 2) throw Error(ErrorKind::Input, "rail count must be at least 2");
  int n = n0;
  while (true) {
    std::vector<ComplexPath> rails;
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / (n - 1);
      rails.push_back(shortest_geodesic(cx, alpha.at(t), beta.at(t)));
      if (i > 0) gap = std::max(gap, path_hausdorff(rails[i - 1], rails[i], 16));
    }
    if (gap < gap_tol || n >= max_rails) return n;
    n = std::min(max_rails, 2 * n);
  }
}

RealizedHMap realize_h_map(const MkComplex& cx, const HMapInput& in) {
  const int nv = static_cast<int>(in.positions.size());
  const int m = in.subdivisions;
  if (m < 1) throw Error(ErrorKind::Input, "subdivisions must be positive");
  if (in.triangles.empty()) throw Error(ErrorKind::Input, "no triangles to realize");
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& t : in.triangles) {
    for (int v : t)
      if (v < 0 || v >= nv) throw Error(ErrorKind::Input, "triangle vertex without a position");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw Error(ErrorKind::Input, "triangle repeats a vertex");
    for (int i = 0; i < 3; ++i) {
      const int a = t[i], b = t[(i + 1) % 3];
      if (++edge_use[{std::min(a, b), std::max(a, b)}] > 2)
        throw Error(ErrorKind::NotASurface, "edge in more than two triangles");
    }
  }
  std::map<std::pair<int, int>, ComplexPath> arcs;
  for (const auto& [key, path] : in.edge_arcs) {
    const std::pair<int, int> k{key[0], key[1]};
    if (k.first >= k.second || !edge_use.count(k))
      throw Error(ErrorKind::Input, "boundary arc does not match an edge of the topology");
    if (!same_point(cx, path.front(), in.positions[k.first]) ||
        !same_point(cx, path.back(), in.positions[k.second]))
      throw Error(ErrorKind::Input, "boundary arc endpoints do not match the vertex positions");
    arcs.emplace(k, path);
  }

  NetBuilder nb(cx);
  std::vector<int> vertex_id(nv);
  for (int v = 0; v < nv; ++v) vertex_id[v] = nb.add(in.positions[v]);
  // Node ids along each edge, oriented from the smaller vertex id.
  std::map<std::pair<int, int>, std::vector<int>> edge_nodes;
  std::map<std::pair<int, int>, double> edge_len;
  for (const auto& [k, uses] : edge_use) {
    (void)uses;
    auto it = arcs.find(k);
    if (it == arcs.end())
      it = arcs.emplace(k, shortest_geodesic(cx, in.positions[k.first], in.positions[k.second]))
               .first;
    const ComplexPath& path = it->second;
    std::vector<int> ids{vertex_id[k.first]};
    for (int j = 1; j < m; ++j) ids.push_back(nb.add(path.at(static_cast<double>(j) / m)));
    ids.push_back(vertex_id[k.second]);
    nb.rail(ids, path.length());
    edge_nodes[k] = std::move(ids);
  }
  auto nodes_from = [&](int a, int b) {
    std::vector<int> ids = edge_nodes.at({std::min(a, b), std::max(a, b)});
    if (a > b) std::reverse(ids.begin(), ids.end());
    return ids;
  };

  for (const auto& t : in.triangles) {
    const int a = t[0], b = t[1], c = t[2];
    const std::vector<int> beta = nodes_from(b, c);
    std::vector<std::vector<int>> grid{nodes_from(a, b)};
    for (int i = 1; i < m; ++i) {
      const ComplexPath rail = shortest_geodesic(cx, in.positions[a], nb.points()[beta[i]]);
      std::vector<int> ids{vertex_id[a]};
      for (int j = 1; j < m; ++j) ids.push_back(nb.add(rail.at(static_cast<double>(j) / m)));
      ids.push_back(beta[i]);
      nb.rail(ids, rail.length());
      grid.push_back(std::move(ids));
    }
    grid.push_back(nodes_from(a, c));
    for (int i = 0; i < m; ++i) nb.ladder(grid[i], grid[i + 1]);
  }

  std::vector<int> dist;
  for (int v : in.distinguished) {
    if (v < 0 || v >= nv) throw Error(ErrorKind::Input, "distinguished vertex out of range");
    dist.push_back(vertex_id[v]);
  }
  return RealizedHMap{HMapSurface(nb.surface(), std::move(dist)), nb.points()};
}

} // namespace mkcx
