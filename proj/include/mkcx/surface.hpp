#pragma once

// Singular surfaces built from model triangles, and the Gauss-Bonnet and
// h-map area audits on them.

#include <array>
#include <vector>

#include "mkcx/complex.hpp"
#include "mkcx/hypgeom.hpp"

namespace mkcx {

inline constexpr double kHMapTol = 1e-9;

// A compact surface (possibly with boundary) made of M_kappa triangles given
// by their side lengths. Degenerate triangles (tight triangle inequality) are
// allowed so that ruled strips may collapse.
class SingularSurface {
public:
  struct Triangle {
    std::array<int, 3> v{};      // vertex ids
    std::array<double, 3> len{}; // len[i] = length of the side opposite v[i]
  };
  struct Across {
    int tri = -1;  // -1 on the boundary
    int face = -1; // face index (omitted corner) in the neighbour
    std::array<int, 3> map{-1, -1, -1}; // local corner here -> local corner there
  };

  // Edges are identified by their vertex pairs; an edge in more than two
  // triangles or a vertex whose corners do not form a single fan throws
  // NotASurface. Side lengths of shared edges must agree within 1e-9.
  static SingularSurface from_triangles(Curvature c, int vertex_count,
                                        std::vector<Triangle> triangles);
  // The quotient surface of a pure 2-complex.
  static SingularSurface from_complex(const MkComplex& complex);

  Curvature curvature() const { return curvature_; }
  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return edge_count_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Across& across(int t, int face) const { return across_[t][face]; }
  const std::array<double, 3>& corner_angles(int t) const { return corners_[t]; }

  bool is_boundary(int v) const { return boundary_[v]; }
  // Sum of corner angles at v.
  double angle_sum(int v) const { return angle_sum_[v]; }
  // Cone angle at interior vertices, pi minus the interior angle at boundary
  // vertices.
  double theta(int v) const { return boundary_[v] ? kPi - angle_sum_[v] : angle_sum_[v]; }
  // True when every interior cone angle is >= 2*pi - 1e-9.
  bool cat_flag() const;
  int euler_characteristic() const {
    return vertex_count_ - edge_count_ + static_cast<int>(triangles_.size());
  }
  double area() const;
  // Heron's formula for kappa = 0, angle defect or excess otherwise.
  double triangle_area(int t) const;

private:
  void finish();

  Curvature curvature_;
  int vertex_count_ = 0;
  int edge_count_ = 0;
  std::vector<Triangle> triangles_;
  std::vector<std::array<Across, 3>> across_;
  std::vector<std::array<double, 3>> corners_;
  std::vector<double> angle_sum_;
  std::vector<char> boundary_;
};

// Corner angle opposite side a in a model triangle with sides a, b, c. Tight
// or slightly violated triangle inequalities (within 1e-9 relative) clamp to
// 0 or pi; larger violations throw Input.
double model_corner_angle(double a, double b, double c, Curvature k);

// |K*Area + sum_interior (2pi - theta(v)) + sum_boundary theta(v) - 2pi chi|.
double gauss_bonnet_audit(const SingularSurface& surface);

class HMapSurface {
public:
  // Validates the h-map invariants: interior angle sums >= 2pi - 1e-9 and
  // angle sums >= pi - 1e-9 at non-distinguished boundary vertices. Throws
  // Input naming the first offending vertex.
  HMapSurface(SingularSurface surface, std::vector<int> distinguished);

  const SingularSurface& surface() const { return surface_; }
  const std::vector<int>& distinguished() const { return distinguished_; }
  // Exterior angles pi - (interior angle sum) at the distinguished vertices.
  const std::vector<double>& theta() const { return theta_; }
  // Per vertex: the angle sum reaches 2pi (interior) or pi (boundary).
  const std::vector<char>& h_flags() const { return h_flags_; }

private:
  SingularSurface surface_;
  std::vector<int> distinguished_;
  std::vector<double> theta_;
  std::vector<char> h_flags_;
};

// sum theta_i - 2pi chi + K*Area; the h-map area inequality says >= 0.
double h_area_bound_check(const HMapSurface& surface);

// Regular polygon disk with n corners at the given circumradius, fanned from
// its centre. The corners are the distinguished vertices.
HMapSurface regular_ngon_disk(Curvature c, int n, double circumradius);

} // namespace mkcx
