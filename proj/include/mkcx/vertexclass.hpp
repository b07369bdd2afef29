#pragma once

// Classification of boundary vertices from their link curves on the unit
// direction sphere S^2.

#include <array>
#include <optional>
#include <vector>

#include "mkcx/error.hpp"

namespace mkcx {

using Vec3 = std::array<double, 3>;

inline constexpr double kHemisphereMargin = 1e-9;

class SphericalPolygon {
public:
  SphericalPolygon() = default;
  // Validates: at least 3 vertices, unit norm within 1e-12, consecutive
  // vertices not antipodal.
  explicit SphericalPolygon(std::vector<Vec3> vertices);
  // Normalizes the input vectors first.
  static SphericalPolygon from_directions(const std::vector<Vec3>& dirs);

  const std::vector<Vec3>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  const Vec3& operator[](std::size_t i) const { return v_[i]; }
  double arc_length(std::size_t i) const; // arc from vertex i to i+1
  double length() const;
  // Great-circle distance from p to the polygon curve.
  double distance_to(const Vec3& p) const;

private:
  std::vector<Vec3> v_;
};

enum class HemisphereMode { Open, Closed };

// Exact max over unit n of min_i <n, v_i>.
struct HemisphereOptimum {
  double value = 0.0;
  Vec3 center{};
};
HemisphereOptimum hemisphere_optimum(const SphericalPolygon& poly);

// Brute-force estimate on a Fibonacci grid of `grid` normals, refined locally
// around the best grid points. Runs on the active SIMD backend.
HemisphereOptimum grid_hemisphere_optimum(const SphericalPolygon& poly, int grid = 10000);

std::optional<Vec3> hemisphere_fit(const SphericalPolygon& poly, HemisphereMode mode);

// Great-circle segment from `start` to `end` of the given length; a length
// above pi selects the major arc.
struct SphericalSegment {
  Vec3 start{}, end{};
  double length = 0.0;
};

struct CrossingCertificate {
  SphericalSegment l;
  Vec3 x{}, y{};
};

enum class CertificateStatus { Valid, Invalid };
// Throws CertificateMalformed when l is not longer than pi.
CertificateStatus crossing_certificate_check(const SphericalPolygon& poly,
                                             const CrossingCertificate& cert);

enum class VertexKind { Convex, Concave, SVertex, StrictSVertex };
const char* to_string(VertexKind k);

struct VertexClass {
  VertexKind kind = VertexKind::SVertex;
  bool h_vertex = false;
  double optimum = 0.0;              // max-min inner product
  std::optional<Vec3> center;        // open (Convex/Concave) or closed (SVertex) witness
  std::optional<CrossingCertificate> certificate; // StrictSVertex
};

// `outward` is the outward normal side of the boundary surface at the
// vertex, expressed in the same frame as the link directions.
VertexClass classify_vertex(const SphericalPolygon& poly, std::optional<Vec3> outward);

enum class VertexLocation { Interior, Boundary };
bool h_vertex_test(double angle_sum, VertexLocation where);

struct OrientedLink {
  SphericalPolygon poly;
  std::optional<Vec3> outward;
};

struct TwoConvexity {
  bool pass = true;
  int first_failing = -1;
  std::vector<VertexClass> classes;
};
TwoConvexity two_convexity_decision(const std::vector<OrientedLink>& links);

// Largest step (found by 40-step bisection) for which perturb_to_strict
// yields a strict s-vertex; requires a non-strict s-vertex input.
double perturb_step_max(const SphericalPolygon& poly);
SphericalPolygon perturb_to_strict(const SphericalPolygon& poly, double step);

// Unit helpers.
double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
Vec3 normalized(const Vec3& a);
double angle_between(const Vec3& a, const Vec3& b);
Vec3 slerp(const Vec3& a, const Vec3& b, double t);
// Fibonacci lattice on S^2.
std::vector<Vec3> fibonacci_sphere(int n);

} // namespace mkcx
