#pragma once

// Parametric fixture complexes.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mkcx/complex.hpp"
#include "mkcx/crescent2d.hpp"

namespace mkcx::gen {

// Triangles over global vertex names; every edge shared by exactly two
// triangles is glued, all others stay on the boundary. The length callback
// receives the two global names of an edge.
using EdgeLength = std::function<double(const std::string&, const std::string&)>;
MkComplex from_triangles(Curvature c, const std::vector<std::array<std::string, 3>>& tris,
                         const EdgeLength& length);
std::vector<MetricSimplex> simplices_from_triangles(
    const std::vector<std::array<std::string, 3>>& tris, const EdgeLength& length);
std::vector<Gluing> gluings_from_triangles(const std::vector<std::array<std::string, 3>>& tris);

// k isosceles triangles around a centre vertex "c", closed up cyclically.
// The legs have length `leg`; the apex angles sum to `total_angle`.
MkComplex cone(Curvature c, int k, double leg, double total_angle);
// k equilateral triangles of the given side around "c".
MkComplex equilateral_cone(Curvature c, int k, double side);
// k equilateral triangles around "c" without closing the fan.
MkComplex open_fan(Curvature c, int k, double side);

// Flat cylinder: n squares-split-in-two around the circumference.
MkComplex flat_cylinder(int n, double circumference, double height);

// Flat nx-by-ny grid of squares of the given side, each split along the
// diagonal from (i, j) to (i + 1, j + 1). Vertex "g<i>_<j>" sits at
// (i * side, j * side); square (i, j) holds triangles 2 * (j * nx + i) (lower
// right) and 2 * (j * nx + i) + 1 (upper left).
MkComplex flat_grid(int nx, int ny, double side);

// The 7-vertex triangulation of the torus with flat unit equilateral triangles.
MkComplex flat_torus7();

// Two copies of a triangle glued along all three edges.
MkComplex doubled_triangle(Curvature c, double a, double b, double cc);

// Disk from the {3, degree} tiling grown `layers` rings around a centre, with
// equilateral triangles of the given side.
MkComplex regular_disk(Curvature c, int degree, int layers, double side);
std::vector<std::array<std::string, 3>> regular_disk_triangles(int degree, int layers);

// Random gluing of hyperbolic triangles whose quotient is a compact surface
// (closed or with boundary). Edge lengths are drawn per edge class from
// [1.0, 1.8], so every triangle is nondegenerate.
MkComplex random_surface(std::uint64_t seed, int triangles, bool allow_boundary);

// Hyperbolic polygons (Klein chart) used by the crescent fixtures.
// Square of chart half-width 0.4 whose top edge midpoint is pushed down by
// `depth` (chart units).
HPolygon notched_square(double depth = 0.2);
// C-shaped polygon whose arms hook inwards; levels 1 or 2 adds a notch in the
// lower hook, nesting one more pocket.
HPolygon hooked_polygon(int levels);
// Square with a wide notch whose left wall bulges into the notch; the bulge
// is a second boundary passage inside the notch's hull.
HPolygon bumped_notch();
// Rectangle whose top edge dips into a bowl; vertices 1..4 form the bowl.
HPolygon bowl_polygon();
// Star-shaped polygon with n vertices at random angles and radii.
HPolygon random_pocketed_polygon(std::uint64_t seed, int n);

} // namespace mkcx::gen
