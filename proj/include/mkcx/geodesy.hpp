#pragma once

// Geodesics in pure 2-complexes with kappa <= 0: path straightening by
// corridor unfolding, shortest geodesics from seeded corridors, closed-geodesic
// tightening, alpha-nets and h-map realization.

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "mkcx/complex.hpp"
#include "mkcx/hypgeom.hpp"
#include "mkcx/surface.hpp"

namespace mkcx {

// A point of a triangle in projective barycentric coordinates: the point is
// the normalized combination sum bary_i P_i of the ambient model coordinates
// of the corners (affine combination for kappa = 0). The coordinates are
// invariant under isometries, so a point on a glued edge has the same
// coordinates in both triangles.
struct ComplexPoint {
  int simplex = -1;
  std::array<double, 3> bary{1.0, 0.0, 0.0};
};

ComplexPoint vertex_point(int simplex, int local);
ComplexPoint centroid_point(int simplex);
ModelPoint point_in(const std::array<ModelPoint, 3>& corners, const std::array<double, 3>& bary);
std::array<double, 3> barycentric_in(const std::array<ModelPoint, 3>& corners,
                                     const ModelPoint& x);
// Position of the point in the canonical placement of its simplex.
ModelPoint placed_point(const MkComplex& complex, const ComplexPoint& p);
// Local vertex of the simplex at which the point sits (within 1e-12), or -1.
int corner_of(const ComplexPoint& p);

struct Waypoint {
  ComplexPoint point;
  bool virtual_vertex = false; // breakpoint at a vertex of the complex
};

class ComplexPath {
public:
  // Consecutive waypoints must lie in one simplex, or represent the same
  // point of a glued face in two simplices (a zero-length hop). Barycentric
  // coordinates must sum to 1 within 1e-12 and be >= -1e-12.
  ComplexPath(const MkComplex& complex, std::vector<Waypoint> waypoints);

  const MkComplex& complex() const { return *complex_; }
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  // Face of waypoint i's simplex crossed by the hop to waypoint i + 1, or -1
  // when both lie in the same simplex.
  int hop_face(std::size_t i) const { return hop_face_[i]; }
  const ComplexPoint& front() const { return waypoints_.front().point; }
  const ComplexPoint& back() const { return waypoints_.back().point; }
  double length() const { return cumulative_.back(); }
  // Point at parameter t in [0, 1], proportional to arclength.
  ComplexPoint at(double t) const;
  // Points at n + 1 equally spaced parameters.
  std::vector<ComplexPoint> sample(int n) const;
  ComplexPath reversed() const;

private:
  const MkComplex* complex_;
  std::vector<Waypoint> waypoints_;
  std::vector<int> hop_face_;
  std::vector<double> cumulative_;
};

// Distance between two points measured in the unfolding of the
// neighbourhood of p's simplex (up to `depth` face crossings). Accurate for
// nearby points; returns +inf when q's simplex is not reached.
double nearby_distance(const MkComplex& complex, const ComplexPoint& p, const ComplexPoint& q,
                       int depth = 4);
bool same_point(const MkComplex& complex, const ComplexPoint& p, const ComplexPoint& q,
                double tol = 1e-9);
// Sampled symmetric Hausdorff distance (n + 1 samples per path plus the
// waypoints), measured in local unfoldings; meant for nearby paths.
double path_hausdorff(const ComplexPath& a, const ComplexPath& b, int n = 64);

// Angles on the two sides of a breakpoint, measured through the incident
// triangles; +inf on a side that is cut by the boundary.
struct BreakpointAngles {
  std::size_t waypoint = 0; // index of the waypoint at the breakpoint
  int vertex = -1;          // quotient vertex, or -1 for a point inside a face
  double left = 0.0, right = 0.0;
};

struct StraightenOptions {
  int max_iters = 500;
  double tol = 1e-8;
};

// Straightens a path with fixed endpoints to a local geodesic: the corridor
// of traversed triangles is unfolded and the shortest path inside it is
// found; where that path bends at a vertex whose angle on the other side is
// below pi - tol, the corridor is rerouted around that side. Throws
// NonConvergence (with the remaining angle deficit) after max_iters
// reroutes.
ComplexPath straighten_path(const ComplexPath& path, const StraightenOptions& opt = {});

// Two-sided angles at every breakpoint of the path where it turns or passes
// through a vertex.
std::vector<BreakpointAngles> breakpoint_angles(const ComplexPath& path);

// Seeds: the k shortest simple paths of the edge graph (1-skeleton plus the
// two endpoints joined to the corners of their simplices), each turned into a
// corridor and straightened. Throws Disconnected when q is unreachable.
std::vector<ComplexPath> geodesic_candidates(const MkComplex& complex, const ComplexPoint& p,
                                             const ComplexPoint& q, int k = 5);
// The shortest of the straightened candidates.
ComplexPath shortest_geodesic(const MkComplex& complex, const ComplexPoint& p,
                              const ComplexPoint& q, int k = 5);
double complex_distance(const MkComplex& complex, const ComplexPoint& p, const ComplexPoint& q);

struct ClosedGeodesic {
  std::optional<ComplexPath> loop; // empty when contracted
  bool contracted = false;
  double length = 0.0;
  int iterations = 0;
  std::vector<double> length_history;
};

// Tightens a closed loop (first and last waypoint the same point in the same
// simplex) by alternately straightening from a basepoint and moving the
// basepoint half way round, until the corner at the basepoint is within tol
// of pi on both sides. A loop whose length drops below contract_tol is
// reported as contracted.
ClosedGeodesic tighten_closed(const ComplexPath& loop, const StraightenOptions& opt = {},
                              double contract_tol = 1e-9);

// Alpha-net between an end curve alpha (or a point) and an arc beta. Rail i
// is the shortest geodesic from alpha(t_i) to beta(t_i), t_i = i / (n_rails -
// 1), and carries `subdivisions` + 1 equally spaced vertices (default
// n_rails - 1); consecutive rails are joined by a ladder of triangles. The
// net surface is built from model triangles whose side lengths are the
// distances in the complex between the vertices.
struct AlphaNet {
  int n_rails = 0;
  bool alpha_is_point = false;
  std::vector<ComplexPath> rails;
  std::vector<ComplexPoint> vertices;        // net vertex positions in the complex
  std::vector<std::vector<int>> rail_vertex; // rail_vertex[i][j] = vertex id
  std::vector<int> end_vertices;             // vertices on alpha and beta
  HMapSurface surface;
};

AlphaNet build_alpha_net(const MkComplex& complex, const ComplexPath& alpha,
                         const ComplexPath& beta, int n_rails, int subdivisions = 0);
AlphaNet build_alpha_net(const MkComplex& complex, const ComplexPoint& alpha,
                         const ComplexPath& beta, int n_rails, int subdivisions = 0);
// Largest sampled distance between consecutive rails.
double adjacent_rail_gap(const AlphaNet& net, int samples = 16);
// Doubles the rail count from n0 until the sampled Hausdorff distance
// between consecutive rails is below gap_tol or the count reaches
// max_rails; returns the rail count reached.
int refine_rail_count(const MkComplex& complex, const ComplexPath& alpha, const ComplexPath& beta,
                      int n0 = 3, double gap_tol = 1e-3, int max_rails = 1024);

// Topology of the surface to be mapped: triangles over vertex ids, the image
// of every vertex in the complex, and the distinguished vertices. Edges are
// mapped to shortest geodesics unless given in `edge_arcs` (keyed by the
// vertex pair in increasing order, oriented from the smaller id).
struct HMapInput {
  std::vector<std::array<int, 3>> triangles;
  std::vector<ComplexPoint> positions;
  std::vector<int> distinguished;
  std::vector<std::pair<std::array<int, 2>, ComplexPath>> edge_arcs;
  int subdivisions = 4; // vertices per edge minus one
};

struct RealizedHMap {
  HMapSurface surface;
  std::vector<ComplexPoint> vertices; // images of the net vertices
};

// Fills every triangle by an alpha-net from its first vertex to the opposite
// edge and glues the nets along shared edges.
RealizedHMap realize_h_map(const MkComplex& complex, const HMapInput& input);

} // namespace mkcx
