#include "mkcx/error.hpp"

namespace mkcx {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Input: return "input";
  case ErrorKind::DegenerateTriangle: return "degenerate-triangle";
  case ErrorKind::Infeasible: return "infeasible";
  case ErrorKind::Ambiguous: return "ambiguous";
  case ErrorKind::UndefinedAngle: return "undefined-angle";
  case ErrorKind::UnsupportedCurvature: return "unsupported-curvature";
  case ErrorKind::DivergentRays: return "divergent-rays";
  case ErrorKind::Validation: return "validation";
  case ErrorKind::NotFound: return "not-found";
  case ErrorKind::NotASurface: return "not-a-surface";
  case ErrorKind::Unsupported: return "unsupported";
  case ErrorKind::NonConvergence: return "non-convergence";
  case ErrorKind::Disconnected: return "disconnected";
  case ErrorKind::OrientationMissing: return "orientation-missing";
  case ErrorKind::CertificateMalformed: return "certificate-malformed";
  case ErrorKind::Precondition: return "precondition";
  case ErrorKind::DegeneratePolygon: return "degenerate-polygon";
  case ErrorKind::Incompressibility: return "incompressibility-violation";
  case ErrorKind::NotOverlapClosed: return "not-overlap-closed";
  case ErrorKind::Parse: return "parse";
  case ErrorKind::Io: return "io";
  }
  return "unknown";
}

} // namespace mkcx
