#include "mkcx/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>

namespace mkcx::kernels {

namespace scalar {

void min_dot3(Soa3 normals, Soa3 points, double* out) {
  for (std::size_t i = 0; i < normals.n; ++i) {
    const double nx = normals.x[i], ny = normals.y[i], nz = normals.z[i];
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < points.n; ++j) {
      double d = nx * points.x[j];
      d = d + ny * points.y[j];
      d = d + nz * points.z[j];
      m = std::min(m, d);
    }
    out[i] = m;
  }
}

void minkowski_dot3(Soa3 pts, const double q[3], double* out) {
  const double nq0 = -q[0];
  for (std::size_t i = 0; i < pts.n; ++i) {
    double d = pts.x[i] * nq0;
    d = d + pts.y[i] * q[1];
    d = d + pts.z[i] * q[2];
    out[i] = d;
  }
}

} // namespace scalar

#ifndef MKCX_HAVE_AVX2_TU
namespace avx2 {
void min_dot3(Soa3 normals, Soa3 points, double* out) { scalar::min_dot3(normals, points, out); }
void minkowski_dot3(Soa3 pts, const double q[3], double* out) {
  scalar::minkowski_dot3(pts, q, out);
}
} // namespace avx2
#endif

namespace {

Backend detect() {
#if defined(MKCX_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

} // namespace

bool avx2_available() { return detect() == Backend::Avx2; }

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_available()) b = Backend::Scalar;
  current().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

void min_dot3(Soa3 normals, Soa3 points, std::span<double> out) {
  if (out.size() < normals.n) throw std::invalid_argument("min_dot3: output too small");
  if (active_backend() == Backend::Avx2)
    avx2::min_dot3(normals, points, out.data());
  else
    scalar::min_dot3(normals, points, out.data());
}

void minkowski_dot3(Soa3 pts, const double q[3], std::span<double> out) {
  if (out.size() < pts.n) throw std::invalid_argument("minkowski_dot3: output too small");
  if (active_backend() == Backend::Avx2)
    avx2::minkowski_dot3(pts, q, out.data());
  else
    scalar::minkowski_dot3(pts, q, out.data());
}

} // namespace mkcx::kernels
