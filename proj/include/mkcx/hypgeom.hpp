#pragma once

// Constant-curvature model geometry for kappa in {-1, 0, +1}.
//
// Points live in quadric models: the upper sheet of the hyperboloid
// <x,x> = -1 (Minkowski form -x0^2 + x1^2 + ...) for kappa = -1, the unit
// sphere for kappa = +1, and plain affine coordinates for kappa = 0.
// The Klein chart (x1/x0, x2/x0) is derived on demand and only used where
// Euclidean convexity predicates are wanted.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>

#include "mkcx/error.hpp"

namespace mkcx {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kModelTol = 1e-12;
inline constexpr double kDistTol = 1e-10;
inline constexpr double kAngleTol = 1e-8;

class Curvature {
public:
  constexpr Curvature() = default;
  explicit Curvature(int kappa);

  static constexpr Curvature hyperbolic() { return Curvature(Tag{}, -1); }
  static constexpr Curvature flat() { return Curvature(Tag{}, 0); }
  static constexpr Curvature spherical() { return Curvature(Tag{}, 1); }

  constexpr int kappa() const { return kappa_; }
  // pi for kappa = +1, +inf otherwise.
  constexpr double diameter_bound() const {
    return kappa_ == 1 ? kPi : std::numeric_limits<double>::infinity();
  }
  constexpr bool operator==(const Curvature&) const = default;

private:
  struct Tag {};
  constexpr Curvature(Tag, int k) : kappa_(k) {}
  int kappa_ = -1;
};

// A point of M_kappa^n. Ambient size is n + 1 for the quadric models and n
// for the flat model; n <= 4.
class ModelPoint {
public:
  static constexpr std::size_t kMaxCoords = 5;

  ModelPoint() = default;

  // Validates the model constraint within kModelTol (relative to the
  // coordinate scale for the hyperboloid).
  static ModelPoint make(Curvature c, std::span<const double> coords);
  static ModelPoint make(Curvature c, std::initializer_list<double> coords);
  // Normalizes an ambient vector onto the model (hyperboloid upper sheet or
  // unit sphere). Throws on vectors that cannot be normalized.
  static ModelPoint project(Curvature c, std::span<const double> coords);

  Curvature curvature() const { return curv_; }
  std::size_t size() const { return n_; }
  // Intrinsic dimension of the model space.
  std::size_t dim() const { return curv_.kappa() == 0 ? n_ : n_ - 1; }
  double operator[](std::size_t i) const { return c_[i]; }
  std::span<const double> coords() const { return {c_.data(), n_}; }

  bool operator==(const ModelPoint& o) const;

private:
  Curvature curv_;
  std::array<double, kMaxCoords> c_{};
  std::size_t n_ = 0;
};

struct TriangleSides {
  double a = 0, b = 0, c = 0;
  Curvature curvature;
};

// Angles opposite to sides a, b and c respectively.
struct TriangleAngles {
  double alpha = 0, beta = 0, gamma = 0;
  double sum() const { return alpha + beta + gamma; }
};

// Bilinear form of the model: Minkowski for kappa = -1, Euclidean otherwise.
double model_dot(Curvature c, std::span<const double> x, std::span<const double> y);

double dist(const ModelPoint& p, const ModelPoint& q);
ModelPoint geodesic_point(const ModelPoint& p, const ModelPoint& q, double t);

// Throws DegenerateTriangle when the triangle inequality is tight and
// Infeasible for a spherical perimeter >= 2*pi.
TriangleAngles triangle_angles_from_sides(const TriangleSides& sides);

// Angle between the sides of lengths b and c, opposite to a. Accepts the
// degenerate (collinear) configurations and returns 0 or pi there. Requires
// b, c > 0 and the (weak) triangle inequality.
double angle_from_sides(double a, double b, double c, Curvature k);

// Three points realizing the given pairwise distances. The first vertex is
// the basepoint, the second lies on the positive first axis and the third in
// the upper half of the first coordinate plane.
std::array<ModelPoint, 3> comparison_triangle(double d_pq, double d_qr, double d_rp,
                                              Curvature target);

// Euclidean angle at p of the comparison triangle with the given sides.
double comparison_angle(double d_pq, double d_pr, double d_qr);

// Hyperbolic only: pi minus the angle sum.
double triangle_area(const TriangleSides& sides);

// ---------------------------------------------------------------------------
// Two-dimensional helpers used for unfolding and charts. Points have ambient
// size 3 (quadrics) or 2 (flat).

ModelPoint base_point(Curvature c, std::size_t dim = 2);

// Unit tangent vector at a pointing towards b (ambient coordinates).
std::array<double, 3> unit_tangent(const ModelPoint& a, const ModelPoint& b);
// Positively oriented unit normal to the tangent u at a (dimension 2 only).
std::array<double, 3> tangent_normal(const ModelPoint& a, const std::array<double, 3>& u);
// Point at distance d from a along the unit tangent direction.
ModelPoint exp_map(const ModelPoint& a, const std::array<double, 3>& dir, double d);

// Angle at a between the geodesics towards b and c, measured with tangent
// vectors. In [0, pi].
double tangent_angle(const ModelPoint& a, const ModelPoint& b, const ModelPoint& c);

// Places c with |ac| = d_ac, |bc| = d_bc on the side of the oriented line ab
// given by side (+1 left, -1 right).
ModelPoint place_third(const ModelPoint& a, const ModelPoint& b, double d_ac, double d_bc,
                       int side);

struct Chart2 {
  double x = 0, y = 0;
};

// Klein chart for kappa = -1, gnomonic chart for kappa = +1 (x0 > 0), identity
// for kappa = 0. Geodesics are straight lines in all three charts.
Chart2 to_chart(const ModelPoint& p);
ModelPoint from_chart(Curvature c, Chart2 k);

// Orientation of three chart points: > 0 counter-clockwise.
double orient2d(Chart2 a, Chart2 b, Chart2 c);

// ---------------------------------------------------------------------------
// Geodesic rays in H^2.

struct Ray {
  ModelPoint base;
  std::array<double, 3> direction{}; // unit tangent at base
  ModelPoint at(double t) const;
  // Endpoint on the boundary circle of the Klein disk.
  Chart2 ideal_endpoint() const;
};

Ray make_ray(const ModelPoint& base, const std::array<double, 3>& direction);

// Distance between the two rays after aligning their parameters so that the
// points at equal parameter lie on a common horocycle (an affine change of
// the arclength parameter). Throws DivergentRays when the ideal endpoints
// differ by more than 1e-9 in the Klein chart.
double asymptotic_ray_gap(const Ray& r1, const Ray& r2, double t);

} // namespace mkcx
