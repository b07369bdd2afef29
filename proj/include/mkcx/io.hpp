#pragma once

// Line-oriented text format for complexes, crescent polygons and oriented
// vertex links.
//
//   mkcx 1
//   curvature -1
//   simplex <id> <dim> <label> x (dim + 1) <length> x (dim + 1 choose 2)
//   glue <id> <face> <id> <face> <label>=<label> ...
//   polygon <n>            followed by n lines   point <x> <y>
//   marked <x1> <y1> <x2> <y2>
//   link <name> <n> outward <x> <y> <z> | none
//                          followed by n lines   dir <x> <y> <z>
//
// Blank lines and lines starting with '#' are ignored. Numbers are written
// with 17 significant digits, so emit(parse(emit(f))) == emit(f) and parsing
// recovers every value bit for bit.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mkcx/complex.hpp"
#include "mkcx/crescent2d.hpp"
#include "mkcx/vertexclass.hpp"

namespace mkcx {

inline constexpr int kFormatVersion = 1;

struct LinkRecord {
  std::string name;
  std::vector<Vec3> directions;
  std::optional<Vec3> outward;
  int line = 0;
  bool operator==(const LinkRecord& o) const {
    return name == o.name && directions == o.directions && outward == o.outward;
  }
};

struct ComplexFile {
  Curvature curvature = Curvature::hyperbolic();
  std::vector<MetricSimplex> simplices;
  std::vector<Gluing> gluings;
  std::optional<std::vector<Chart2>> polygon;
  int polygon_line = 0;
  std::vector<MarkedGeodesic> marked;
  std::vector<LinkRecord> links;
};

// Structural equality (source line numbers are ignored).
bool same_structure(const ComplexFile& a, const ComplexFile& b);

// Throws Error(Parse) with a message starting "line <n>: ".
ComplexFile parse_complex_file(std::string_view text);
std::string emit_complex_file(const ComplexFile& file);

// Throws Error(Io) when the file cannot be read or written.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

// Builds and validates the complex (ValidationError carries record lines).
MkComplex build_complex(const ComplexFile& file);
// Polygon and marked geodesics for the crescent hull; throws Input when the
// file has no polygon section.
HPolygon file_polygon(const ComplexFile& file);
std::vector<OrientedLink> file_links(const ComplexFile& file);

// Shortest round-trip decimal form used by the writer.
std::string format_double(double x);

} // namespace mkcx
