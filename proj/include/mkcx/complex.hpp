#pragma once

// M_kappa simplicial complexes stored intrinsically by edge lengths and glued
// along faces by isometries.

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mkcx/error.hpp"
#include "mkcx/hypgeom.hpp"

namespace mkcx {

inline constexpr double kGlueTol = 1e-10;

struct MetricSimplex {
  std::string id;
  int dim = 2;
  std::vector<std::string> labels;
  // Lengths of the local edges in lexicographic order of (i, j), i < j.
  std::vector<double> lengths;
  int line = 0; // source line, 0 if not from a file

  static int edge_index(int dim, int i, int j);
  double length(int i, int j) const { return lengths[edge_index(dim, i, j)]; }
  int local_index(std::string_view label) const;
};

// A face is named by the local index of the vertex it omits.
struct FaceRef {
  std::string simplex;
  int face = 0;
  bool operator==(const FaceRef&) const = default;
};

struct Gluing {
  FaceRef a, b;
  std::vector<std::pair<std::string, std::string>> vertex_map; // label in a -> label in b
  int line = 0;
};

struct Violation {
  std::string message;
  int line = 0;
};

class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

private:
  std::vector<Violation> violations_;
};

class MkComplex {
public:
  // Neighbour of a triangle across one of its edges.
  struct Across {
    int simplex = -1;            // -1 on the boundary
    int face = -1;               // face index in the neighbour
    std::array<int, 3> map{-1, -1, -1}; // local vertex of this -> local vertex of neighbour
  };

  MkComplex() = default;

  Curvature curvature() const { return curvature_; }
  const std::vector<MetricSimplex>& simplices() const { return simplices_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  const MetricSimplex& simplex(int s) const { return simplices_[s]; }
  int simplex_count() const { return static_cast<int>(simplices_.size()); }
  int index_of(std::string_view id) const; // -1 if absent
  int max_dim() const;
  bool is_pure(int dim) const;

  int vertex_count() const { return static_cast<int>(vertex_names_.size()); }
  int vertex_of(int s, int local) const { return vertex_class_[s][local]; }
  // Canonical vertex name "<simplex id>.<label>" of the first representative.
  const std::string& vertex_name(int v) const { return vertex_names_[v]; }
  int find_vertex(std::string_view name) const; // accepts any representative name

  int edge_count() const { return edge_classes_; }
  int edge_of(int s, int i, int j) const;
  int triangle_class_count() const { return triangle_classes_; }

  // Two-dimensional adjacency (dim-2 simplices only).
  const Across& across(int s, int face) const { return across_[s][face]; }

  // Canonical placement of a triangle: vertex 0 at the basepoint, vertex 1 on
  // the first axis, vertex 2 in the upper half plane.
  const std::array<ModelPoint, 3>& placement(int s) const { return placement_[s]; }
  // Corner angles of a triangle at its local vertices 0, 1, 2.
  const std::array<double, 3>& corner_angles(int s) const { return corners_[s]; }

  // Directions at a vertex: classes of (simplex, from, to) edge-ends.
  int direction_of(int s, int from, int to) const;
  int direction_count() const { return direction_classes_; }

  friend MkComplex build_complex(Curvature, std::vector<MetricSimplex>, std::vector<Gluing>);

private:
  Curvature curvature_;
  std::vector<MetricSimplex> simplices_;
  std::vector<Gluing> gluings_;
  std::map<std::string, int, std::less<>> index_;
  std::vector<std::vector<int>> vertex_class_;
  std::vector<std::string> vertex_names_;
  std::map<std::string, int, std::less<>> vertex_lookup_;
  std::vector<std::vector<int>> edge_class_;      // per simplex, per local edge index
  std::vector<std::vector<int>> direction_class_; // per simplex, from * (dim+1) + to
  int edge_classes_ = 0;
  int triangle_classes_ = 0;
  int direction_classes_ = 0;
  std::vector<std::array<Across, 3>> across_;
  std::vector<std::array<ModelPoint, 3>> placement_;
  std::vector<std::array<double, 3>> corners_;
};

// Validates every invariant and throws ValidationError listing all
// violations when any fails.
MkComplex build_complex(Curvature curvature, std::vector<MetricSimplex> simplices,
                        std::vector<Gluing> gluings);

// Vertex link. For 2-complexes a metric graph whose edges are the corners of
// the incident triangles; for 3-complexes the 1-skeleton of the spherical
// link (edges are face angles); for 1-complexes a discrete set of points.
struct LinkComplex {
  struct Node {
    int direction = -1; // direction class
    int simplex = -1, from = -1, to = -1;
  };
  struct Edge {
    int a = -1, b = -1; // node indices
    double length = 0.0;
    int simplex = -1;   // triangle (or tetrahedron face owner) providing the corner
    int corner = -1;    // local vertex at the base
    int other = -1;     // for 3-complexes: local vertex of the third face vertex
  };
  int base_vertex = -1;
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  double total_length() const;
  // Connected components as (is_cycle, edge indices in traversal order).
  bool is_single_cycle() const;
  bool is_single_path() const;
};

LinkComplex vertex_link(const MkComplex& complex, int vertex);

// V - E + F over quotient classes of a pure 2-complex whose edges lie in at
// most two triangles.
int euler_characteristic(const MkComplex& complex);

// Sum of hyperbolic triangle areas (kappa = -1, pure 2-complex).
double total_area(const MkComplex& complex);

} // namespace mkcx
