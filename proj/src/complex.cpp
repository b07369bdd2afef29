#include "mkcx/complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace mkcx {

namespace {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b; // smaller index stays root
  }

private:
  std::vector<int> parent_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Classes of "(simplex, ordered local tuple)" keys. Key layout: one slot per
// (simplex, code) where code enumerates tuples in a fixed radix.
struct KeySpace {
  std::vector<int> offset; // per simplex
  std::vector<int> radix;
  int total = 0;
  KeySpace(const std::vector<MetricSimplex>& s, int arity) {
    offset.resize(s.size());
    radix.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      offset[i] = total;
      radix[i] = s[i].dim + 1;
      int c = 1;
      for (int k = 0; k < arity; ++k) c *= radix[i];
      total += c;
    }
  }
  int key(int s, std::initializer_list<int> t) const {
    int c = 0;
    for (int v : t) c = c * radix[s] + v;
    return offset[s] + c;
  }
};

bool realizable(const MetricSimplex& s, Curvature k, std::string& why) {
  for (double l : s.lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      why = "edge length must be positive and finite";
      return false;
    }
    if (k.kappa() == 1 && l >= kPi) {
      why = "spherical edge length must be < pi";
      return false;
    }
  }
  auto tri_ok = [&](int i, int j, int m) {
    TriangleSides t{s.length(j, m), s.length(i, m), s.length(i, j), k};
    try {
      triangle_angles_from_sides(t);
    } catch (const Error& e) {
      why = "face (" + s.labels[i] + "," + s.labels[j] + "," + s.labels[m] + ") " + e.what();
      return false;
    }
    return true;
  };
  if (s.dim == 2) return tri_ok(0, 1, 2);
  if (s.dim == 3) {
    for (int f = 0; f < 4; ++f) {
      int v[3], n = 0;
      for (int i = 0; i < 4; ++i)
        if (i != f) v[n++] = i;
      if (!tri_ok(v[0], v[1], v[2])) return false;
    }
    // Face angles at vertex 0 must form a nondegenerate spherical triangle.
    auto fa = [&](int j, int m) {
      return angle_from_sides(s.length(j, m), s.length(0, j), s.length(0, m), k);
    };
    TriangleSides link{fa(2, 3), fa(1, 3), fa(1, 2), Curvature::spherical()};
    try {
      triangle_angles_from_sides(link);
    } catch (const Error&) {
      why = "edge lengths do not span a nondegenerate tetrahedron";
      return false;
    }
  }
  return true;
}

} // namespace

int MetricSimplex::edge_index(int dim, int i, int j) {
  if (i > j) std::swap(i, j);
  const int n = dim + 1;
  // Pairs before row i: sum_{r<i} (n-1-r).
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

int MetricSimplex::local_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

ValidationError::ValidationError(std::vector<Violation> v)
    : Error(ErrorKind::Validation,
            [&] {
              std::string s = "complex rejected:";
              for (const auto& x : v) {
                s += "\n  ";
                if (x.line > 0) s += "line " + std::to_string(x.line) + ": ";
                s += x.message;
              }
              return s;
            }()),
      violations_(std::move(v)) {}

int MkComplex::index_of(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

int MkComplex::max_dim() const {
  int d = 0;
  for (const auto& s : simplices_) d = std::max(d, s.dim);
  return d;
}

bool MkComplex::is_pure(int dim) const {
  return std::all_of(simplices_.begin(), simplices_.end(),
                     [&](const MetricSimplex& s) { return s.dim == dim; });
}

int MkComplex::find_vertex(std::string_view name) const {
  auto it = vertex_lookup_.find(name);
  return it == vertex_lookup_.end() ? -1 : it->second;
}

int MkComplex::edge_of(int s, int i, int j) const {
  return edge_class_[s][MetricSimplex::edge_index(simplices_[s].dim, i, j)];
}

int MkComplex::direction_of(int s, int from, int to) const {
  return direction_class_[s][from * (simplices_[s].dim + 1) + to];
}

MkComplex build_complex(Curvature curvature, std::vector<MetricSimplex> simplices,
                        std::vector<Gluing> gluings) {
  std::vector<Violation> bad;
  MkComplex cx;
  cx.curvature_ = curvature;

  for (std::size_t i = 0; i < simplices.size(); ++i) {
    const auto& s = simplices[i];
    if (!cx.index_.emplace(s.id, static_cast<int>(i)).second)
      bad.push_back({"duplicate simplex id '" + s.id + "'", s.line});
    if (s.dim < 1 || s.dim > 3) {
      bad.push_back({"simplex '" + s.id + "' has unsupported dimension", s.line});
      continue;
    }
    const std::size_t nl = static_cast<std::size_t>(s.dim + 1);
    if (s.labels.size() != nl || s.lengths.size() != nl * (nl - 1) / 2) {
      bad.push_back({"simplex '" + s.id + "' needs " + std::to_string(nl) + " labels and " +
                         std::to_string(nl * (nl - 1) / 2) + " edge lengths",
                     s.line});
      continue;
    }
    std::set<std::string> uniq(s.labels.begin(), s.labels.end());
    if (uniq.size() != nl) {
      bad.push_back({"simplex '" + s.id + "' repeats a vertex label", s.line});
      continue;
    }
    std::string why;
    if (!realizable(s, curvature, why))
      bad.push_back({"simplex '" + s.id + "' is not realizable: " + why, s.line});
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));

  // Gluings.
  struct Resolved {
    int sa, fa, sb, fb;
    std::vector<std::pair<int, int>> map; // local in a -> local in b
  };
  std::vector<Resolved> resolved;
  std::map<std::pair<int, int>, int> face_use;
  for (std::size_t g = 0; g < gluings.size(); ++g) {
    const auto& gl = gluings[g];
    const int sa = cx.index_of(gl.a.simplex), sb = cx.index_of(gl.b.simplex);
    if (sa < 0 || sb < 0) {
      bad.push_back({"gluing references an unknown simplex", gl.line});
      continue;
    }
    const auto& A = simplices[sa];
    const auto& B = simplices[sb];
    if (A.dim != B.dim) {
      bad.push_back({"gluing joins simplices of different dimension", gl.line});
      continue;
    }
    if (gl.a.face < 0 || gl.a.face > A.dim || gl.b.face < 0 || gl.b.face > B.dim) {
      bad.push_back({"gluing face index out of range", gl.line});
      continue;
    }
    if (sa == sb && gl.a.face == gl.b.face) {
      bad.push_back({"face glued to itself", gl.line});
      continue;
    }
    // Vertices of a metric graph may be shared by any number of edges.
    for (auto key : {std::pair{sa, gl.a.face}, std::pair{sb, gl.b.face}}) {
      if (A.dim == 1) break;
      auto [it, fresh] = face_use.emplace(key, static_cast<int>(g));
      if (!fresh)
        bad.push_back({"face " + simplices[key.first].id + "/" + std::to_string(key.second) +
                           " appears in more than one gluing",
                       gl.line});
    }
    Resolved r{sa, gl.a.face, sb, gl.b.face, {}};
    std::set<int> seen_a, seen_b;
    bool ok = static_cast<int>(gl.vertex_map.size()) == A.dim;
    for (const auto& [la, lb] : gl.vertex_map) {
      const int ia = A.local_index(la), ib = B.local_index(lb);
      if (ia < 0 || ib < 0 || ia == gl.a.face || ib == gl.b.face || !seen_a.insert(ia).second ||
          !seen_b.insert(ib).second) {
        ok = false;
        break;
      }
      r.map.emplace_back(ia, ib);
    }
    if (!ok) {
      bad.push_back({"vertex map is not a bijection between the glued faces", gl.line});
      continue;
    }
    for (std::size_t x = 0; x < r.map.size(); ++x)
      for (std::size_t y = x + 1; y < r.map.size(); ++y) {
        const double la = A.length(r.map[x].first, r.map[y].first);
        const double lb = B.length(r.map[x].second, r.map[y].second);
        if (std::abs(la - lb) > kGlueTol)
          bad.push_back({"gluing is not an isometry: edge " + A.labels[r.map[x].first] +
                             A.labels[r.map[y].first] + " of " + A.id + " has length " + fmt(la) +
                             " but " + B.labels[r.map[x].second] + B.labels[r.map[y].second] +
                             " of " + B.id + " has length " + fmt(lb),
                         gl.line});
      }
    resolved.push_back(std::move(r));
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));

  // Quotient classes of vertices, edges, triangles and edge-ends.
  KeySpace k1(simplices, 1), k2(simplices, 2), k3(simplices, 3);
  UnionFind uf1(k1.total), uf2(k2.total), uf3(k3.total), ufd(k2.total);
  for (const auto& r : resolved) {
    const std::size_t m = r.map.size();
    for (std::size_t x = 0; x < m; ++x) {
      const auto [ax, bx] = r.map[x];
      uf1.unite(k1.key(r.sa, {ax}), k1.key(r.sb, {bx}));
      for (std::size_t y = 0; y < m; ++y) {
        if (y == x) continue;
        const auto [ay, by] = r.map[y];
        ufd.unite(k2.key(r.sa, {ax, ay}), k2.key(r.sb, {bx, by}));
        if (x < y) {
          uf2.unite(k2.key(r.sa, {std::min(ax, ay), std::max(ax, ay)}),
                    k2.key(r.sb, {std::min(bx, by), std::max(bx, by)}));
          for (std::size_t z = y + 1; z < m; ++z) {
            int a3[3] = {ax, ay, r.map[z].first}, b3[3] = {bx, by, r.map[z].second};
            std::sort(a3, a3 + 3);
            std::sort(b3, b3 + 3);
            uf3.unite(k3.key(r.sa, {a3[0], a3[1], a3[2]}), k3.key(r.sb, {b3[0], b3[1], b3[2]}));
          }
        }
      }
    }
  }

  const int ns = static_cast<int>(simplices.size());
  std::map<int, int> vid, eid, did, tid;
  cx.vertex_class_.resize(ns);
  cx.edge_class_.resize(ns);
  cx.direction_class_.resize(ns);
  for (int s = 0; s < ns; ++s) {
    const auto& S = simplices[s];
    const int n = S.dim + 1;
    for (int i = 0; i < n; ++i) {
      const int root = uf1.find(k1.key(s, {i}));
      auto [it, fresh] = vid.emplace(root, static_cast<int>(vid.size()));
      if (fresh) cx.vertex_names_.push_back(S.id + "." + S.labels[i]);
      cx.vertex_class_[s].push_back(it->second);
      cx.vertex_lookup_.emplace(S.id + "." + S.labels[i], it->second);
    }
    cx.edge_class_[s].assign(n * (n - 1) / 2, -1);
    cx.direction_class_[s].assign(n * n, -1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const int droot = ufd.find(k2.key(s, {i, j}));
        cx.direction_class_[s][i * n + j] =
            did.emplace(droot, static_cast<int>(did.size())).first->second;
        if (i < j) {
          const int eroot = uf2.find(k2.key(s, {i, j}));
          cx.edge_class_[s][MetricSimplex::edge_index(S.dim, i, j)] =
              eid.emplace(eroot, static_cast<int>(eid.size())).first->second;
        }
      }
    if (S.dim >= 2)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int l = j + 1; l < n; ++l) tid.emplace(uf3.find(k3.key(s, {i, j, l})), 0);
  }
  cx.edge_classes_ = static_cast<int>(eid.size());
  cx.direction_classes_ = static_cast<int>(did.size());
  cx.triangle_classes_ = static_cast<int>(tid.size());

  // Quotient well-definedness: the gluing may not identify two distinct
  // directions of the same edge-end with each other inconsistently.
  for (int s = 0; s < ns; ++s) {
    const int n = simplices[s].dim + 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && cx.direction_class_[s][i * n + j] == cx.direction_class_[s][j * n + i])
          bad.push_back({"gluings identify edge " + simplices[s].labels[i] +
                             simplices[s].labels[j] + " of " + simplices[s].id +
                             " with its own reverse",
                         simplices[s].line});
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));

  // Two-dimensional adjacency, placements and corner angles.
  cx.across_.assign(ns, {});
  cx.placement_.resize(ns);
  cx.corners_.assign(ns, {0, 0, 0});
  for (const auto& r : resolved) {
    if (simplices[r.sa].dim != 2) continue;
    MkComplex::Across ab{r.sb, r.fb, {-1, -1, -1}}, ba{r.sa, r.fa, {-1, -1, -1}};
    for (auto [x, y] : r.map) {
      ab.map[x] = y;
      ba.map[y] = x;
    }
    ab.map[r.fa] = r.fb;
    ba.map[r.fb] = r.fa;
    cx.across_[r.sa][r.fa] = ab;
    cx.across_[r.sb][r.fb] = ba;
  }
  for (int s = 0; s < ns; ++s) {
    const auto& S = simplices[s];
    if (S.dim != 2) continue;
    cx.placement_[s] = comparison_triangle(S.length(0, 1), S.length(1, 2), S.length(0, 2), curvature);
    cx.corners_[s] = {angle_from_sides(S.length(1, 2), S.length(0, 1), S.length(0, 2), curvature),
                      angle_from_sides(S.length(0, 2), S.length(0, 1), S.length(1, 2), curvature),
                      angle_from_sides(S.length(0, 1), S.length(0, 2), S.length(1, 2), curvature)};
  }

  cx.simplices_ = std::move(simplices);
  cx.gluings_ = std::move(gluings);
  return cx;
}

// ---------------------------------------------------------------------------

double LinkComplex::total_length() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.length;
  return s;
}

namespace {

std::vector<int> degrees(const LinkComplex& l) {
  std::vector<int> deg(l.nodes.size(), 0);
  for (const auto& e : l.edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  return deg;
}

bool connected(const LinkComplex& l) {
  if (l.nodes.empty()) return true;
  UnionFind uf(l.nodes.size());
  for (const auto& e : l.edges) uf.unite(e.a, e.b);
  for (std::size_t i = 0; i < l.nodes.size(); ++i)
    if (uf.find(static_cast<int>(i)) != uf.find(0)) return false;
  return true;
}

} // namespace

bool LinkComplex::is_single_cycle() const {
  if (edges.empty() || !connected(*this)) return false;
  auto deg = degrees(*this);
  return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 2; });
}

bool LinkComplex::is_single_path() const {
  if (!connected(*this)) return false;
  if (edges.empty()) return nodes.size() == 1;
  auto deg = degrees(*this);
  int ends = 0;
  for (int d : deg) {
    if (d == 1) ++ends;
    else if (d != 2) return false;
  }
  return ends == 2;
}

LinkComplex vertex_link(const MkComplex& cx, int v) {
  if (v < 0 || v >= cx.vertex_count()) throw Error(ErrorKind::NotFound, "vertex not found");
  LinkComplex link;
  link.base_vertex = v;
  std::map<int, int> node_of; // direction class -> node index
  auto node = [&](int s, int from, int to) {
    const int d = cx.direction_of(s, from, to);
    auto [it, fresh] = node_of.emplace(d, static_cast<int>(link.nodes.size()));
    if (fresh) link.nodes.push_back({d, s, from, to});
    return it->second;
  };
  const Curvature k = cx.curvature();
  std::set<std::tuple<int, int, double>> seen3; // dedupe glued faces in 3-complexes
  for (int s = 0; s < cx.simplex_count(); ++s) {
    const auto& S = cx.simplex(s);
    const int n = S.dim + 1;
    for (int i = 0; i < n; ++i) {
      if (cx.vertex_of(s, i) != v) continue;
      for (int j = 0; j < n; ++j)
        if (j != i) node(s, i, j);
      if (S.dim == 2) {
        const int j = (i + 1) % 3, l = (i + 2) % 3;
        link.edges.push_back({node(s, i, j), node(s, i, l), cx.corner_angles(s)[i], s, i, -1});
      } else if (S.dim == 3) {
        for (int j = 0; j < n; ++j)
          for (int l = j + 1; l < n; ++l) {
            if (j == i || l == i) continue;
            const int a = node(s, i, j), b = node(s, i, l);
            const double ang = angle_from_sides(S.length(j, l), S.length(i, j), S.length(i, l), k);
            auto key = std::tuple{std::min(a, b), std::max(a, b), std::round(ang * 1e9)};
            if (!seen3.insert(key).second) continue;
            link.edges.push_back({a, b, ang, s, i, l});
          }
      }
    }
  }
  return link;
}

int euler_characteristic(const MkComplex& cx) {
  if (!cx.is_pure(2)) throw Error(ErrorKind::NotASurface, "euler characteristic needs a pure 2-complex");
  std::vector<int> per_edge(cx.edge_count(), 0);
  for (int s = 0; s < cx.simplex_count(); ++s)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) ++per_edge[cx.edge_of(s, i, j)];
  // Each glued edge is counted once per incident triangle.
  for (std::size_t e = 0; e < per_edge.size(); ++e)
    if (per_edge[e] > 2)
      throw Error(ErrorKind::NotASurface, "edge class " + std::to_string(e) + " lies in " +
                                              std::to_string(per_edge[e]) + " triangles");
  return cx.vertex_count() - cx.edge_count() + cx.simplex_count();
}

double total_area(const MkComplex& cx) {
  if (cx.curvature().kappa() != -1)
    throw Error(ErrorKind::UnsupportedCurvature, "total area is provided for kappa = -1");
  if (!cx.is_pure(2) && cx.simplex_count() > 0)
    throw Error(ErrorKind::Input, "total area needs a pure 2-complex");
  double a = 0.0;
  for (int s = 0; s < cx.simplex_count(); ++s) a += kPi - (cx.corner_angles(s)[0] + cx.corner_angles(s)[1] + cx.corner_angles(s)[2]);
  return a;
}

} // namespace mkcx
