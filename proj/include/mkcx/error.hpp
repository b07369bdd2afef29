#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mkcx {

enum class ErrorKind {
  Input,              // malformed or mismatched arguments
  DegenerateTriangle, // triangle inequality tight
  Infeasible,         // e.g. spherical perimeter >= 2*pi
  Ambiguous,          // antipodal points on the sphere
  UndefinedAngle,
  UnsupportedCurvature,
  DivergentRays,
  Validation,         // structured complex rejection
  NotFound,
  NotASurface,
  Unsupported,
  NonConvergence,
  Disconnected,
  OrientationMissing,
  CertificateMalformed,
  Precondition,
  DegeneratePolygon,
  Incompressibility,
  NotOverlapClosed,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace mkcx
