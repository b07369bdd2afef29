#pragma once

// Crescents of polygons in the hyperbolic plane and the crescent-move
// convexification. Convexity predicates use the Klein chart, where
// hyperbolic geodesics are straight chords; distances use the hyperboloid.

#include <optional>
#include <string>
#include <vector>

#include "mkcx/hypgeom.hpp"

namespace mkcx {

class HPolygon {
public:
  HPolygon() = default;
  // Vertices in the Klein chart; reoriented counter-clockwise. Throws
  // DegeneratePolygon when all vertices are collinear.
  static HPolygon from_chart(std::vector<Chart2> pts);
  static HPolygon from_points(const std::vector<ModelPoint>& pts);

  std::size_t size() const { return k_.size(); }
  const std::vector<Chart2>& chart() const { return k_; }
  const Chart2& operator[](std::size_t i) const { return k_[i]; }
  ModelPoint point(std::size_t i) const;
  std::size_t next(std::size_t i) const { return (i + 1) % k_.size(); }
  // True when the input order was clockwise and has been reversed.
  bool reoriented() const { return reoriented_; }

  double signed_chart_area() const;
  double area() const; // hyperbolic area of a simple polygon
  bool is_simple() const;
  bool is_convex() const; // strictly convex at every vertex up to 1e-14
  // Closed region test in the chart (boundary counts as inside).
  bool contains(Chart2 p, double tol = 1e-12) const;
  // Hyperbolic distance from p to the closed region (0 inside).
  double distance_to_region(const ModelPoint& p) const;

private:
  std::vector<Chart2> k_;
  bool reoriented_ = false;
};

enum class CrescentSide { Outer, Inner };

struct Crescent2D {
  // alpha-part: polygon vertices start, start+1, ..., end (cyclic); the
  // I-part is the chord from vertex start to vertex end.
  std::size_t start = 0, end = 0;
  CrescentSide side = CrescentSide::Outer;
  int depth = 1;          // level in the deficiency tree (1 = hull pocket)
  int folding = 0;        // folding number
  int parent = -1;        // index into the crescent list
  double size = 0.0;      // sup over the I-part of the distance to the alpha-part

  std::vector<std::size_t> alpha(std::size_t n) const;
  bool operator==(const Crescent2D& o) const {
    return start == o.start && end == o.end && side == o.side;
  }
};

// All crescents of the polygon: hull pockets and, recursively, pockets of
// pockets. Sorted by folding number, then by start index.
std::vector<Crescent2D> find_crescents(const HPolygon& poly);

// A crescent cut off by the chord between two vertices. Validates that the
// chord interior avoids the polygon boundary and that the region has area.
Crescent2D make_crescent(const HPolygon& poly, std::size_t start, std::size_t end);

// Deficiency-tree height of the crescent region.
int folding_number(const Crescent2D& c, const HPolygon& poly);

enum class PairRelation { Disjoint, Nested, Transversal };
const char* to_string(PairRelation r);
PairRelation classify_pair(const Crescent2D& a, const Crescent2D& b, const HPolygon& poly);

// Boundary of the crescent region as a polygon in the chart, alpha-part
// first, closed by the I-part.
std::vector<Chart2> crescent_region(const Crescent2D& c, const HPolygon& poly);

// Replaces the alpha-parts of an overlap class by the convex boundary of the
// union of its crescents.
HPolygon crescent_move(const HPolygon& poly, const std::vector<Crescent2D>& cls);

inline constexpr int kCrescentSizeSamples = 1001;
double crescent_size(const Crescent2D& c, const HPolygon& poly);
// Bound on the gap between the sampled and the true supremum.
double crescent_size_bound(const Crescent2D& c, const HPolygon& poly);

struct MarkedGeodesic {
  Chart2 a, b; // a == b for a marked point
  bool is_point() const { return a.x == b.x && a.y == b.y; }
};

struct HullIteration {
  int max_folding = -1;
  int moves = 0;
  std::size_t vertices_before = 0, vertices_after = 0;
  double max_marked_distance = 0.0;
};

struct HullResult {
  HPolygon polygon;
  std::vector<HullIteration> trace;
  double max_marked_distance = 0.0;
};

inline constexpr double kDefaultEpsilon = 1e-6;

HullResult two_convex_hull(const HPolygon& poly, const std::vector<MarkedGeodesic>& marked,
                           double eps = kDefaultEpsilon);

// Hyperbolic distance from a point to a geodesic segment.
double point_segment_distance(const ModelPoint& x, const ModelPoint& a, const ModelPoint& b);

} // namespace mkcx
