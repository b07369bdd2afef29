#pragma once

// Verification passes for curvature conditions: the link condition, sampled
// CAT(kappa) comparison, metric convexity of geodesics, delta-slimness and
// quasi-geodesic certification.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mkcx/complex.hpp"
#include "mkcx/geodesy.hpp"

namespace mkcx {

enum class ViolationKind { LinkSystole, CatComparison, Convexity, Slimness, QuasiGeodesic };

const char* to_string(ViolationKind kind);

struct ViolationReport {
  ViolationKind kind = ViolationKind::LinkSystole;
  double magnitude = 0.0;
  int vertex = -1;                  // LinkSystole: base vertex of the link
  std::vector<int> loop_edges;      // LinkSystole: link edge indices in loop order
  std::vector<ComplexPoint> points; // CatComparison, Slimness: triangle corners
  std::array<int, 2> sides{-1, -1}; // CatComparison: sides carrying x and y
  std::array<double, 2> params{0.0, 0.0};
  std::string witness; // canonical one-line serialization
};

// Passes (returns nothing) when every injective loop of every vertex link has
// length >= 2pi - 1e-9. Otherwise reports the globally shortest injective
// loop, found by joining each link edge to the shortest path between its ends
// that avoids it; ties go to the lowest edge index. Throws Unsupported for
// complexes with 3-simplices.
std::optional<ViolationReport> link_condition(const MkComplex& complex);

// Length of a loop given as link edges of the vertex; throws Input unless the
// edges form a closed injective loop.
double link_loop_length(const MkComplex& complex, int vertex, const std::vector<int>& loop_edges);

// Three geodesic sides p->q, q->r, r->p whose consecutive endpoints agree
// within 1e-9.
class GeodesicTriangle {
public:
  GeodesicTriangle(ComplexPath pq, ComplexPath qr, ComplexPath rp);
  static GeodesicTriangle from_points(const MkComplex& complex, const ComplexPoint& p,
                                      const ComplexPoint& q, const ComplexPoint& r);

  const MkComplex& complex() const { return sides_[0].complex(); }
  const ComplexPath& side(int i) const { return sides_[i]; }
  const ComplexPoint& corner(int i) const { return sides_[i].front(); }
  double perimeter() const;

private:
  std::vector<ComplexPath> sides_;
};

// Result of a sampled check: the largest value seen and, when positive, the
// witness reproducing it.
struct SampledCheck {
  double value = 0.0;
  int samples = 0;
  std::optional<ViolationReport> worst;
};

// Samples n pairs (x, y) on distinct sides and returns max(0, d(x, y) -
// d(x', y')) with x', y' the corresponding points of the comparison triangle
// in M_kappa (kappa of the complex unless given). Differences below 1e-12
// relative are treated as rounding and reported as 0.
SampledCheck cat_inequality_sample(const GeodesicTriangle& triangle, int n_samples,
                                   std::uint64_t seed,
                                   std::optional<Curvature> comparison = std::nullopt);
// d(x, y) - d(x', y') for x = side_x(s), y = side_y(t).
double cat_pair_violation(const GeodesicTriangle& triangle, int side_x, double s, int side_y,
                          double t, std::optional<Curvature> comparison = std::nullopt);

// Triangle around an interior vertex: three points at radius
// radius_fraction * (largest radius inside the star) in directions splitting
// the cone angle into thirds, starting at `phase` (radians) from the first
// corner of the fan. Throws Input at boundary vertices.
GeodesicTriangle vertex_probe_triangle(const MkComplex& complex, int vertex,
                                       double radius_fraction = 0.5, double phase = 0.0);

// max over t_i = i / n of d(c(t), c'(t)) - [(1 - t) d(c(0), c'(0)) + t d(c(1),
// c'(1))], floored at 0.
SampledCheck convexity_check(const ComplexPath& c, const ComplexPath& c2, int n_samples);
double convexity_violation_at(const ComplexPath& c, const ComplexPath& c2, double t);

// Largest one-sided gap from side pq to the union of the other two sides over
// n seeded random triples, each side sampled at samples_per_side + 1 points.
// Triple i uses its own generator seeded from (seed, i). 2-complexes use
// shortest geodesics; 1-complexes are treated as metric graphs, with points
// written as (edge simplex, bary = {1 - t, t, 0}). A lower bound on delta.
SampledCheck slimness_estimate(const MkComplex& complex, int n_triples, std::uint64_t seed,
                               int samples_per_side = 16);
double triangle_slimness(const MkComplex& complex, const ComplexPoint& p, const ComplexPoint& q,
                         const ComplexPoint& r, int samples_per_side = 16);

struct QuasiParams {
  double lambda = 1.0;
  double eps = 0.0;
};

// Passes when |t - t'| / lambda - eps <= d(path(t), path(t')) <= lambda |t -
// t'| + eps (arclength parameters) for all pairs of the n + 1 equally spaced
// samples, up to tol. Otherwise reports the largest violation.
std::optional<ViolationReport> is_quasi_geodesic(const ComplexPath& path, QuasiParams qp,
                                                 int n_samples, double tol = 1e-9);
// Violation at fractional parameters t, t2 (positive when an inequality fails).
double quasi_violation_at(const ComplexPath& path, QuasiParams qp, double t, double t2);

} // namespace mkcx
