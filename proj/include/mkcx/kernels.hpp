#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and
// an AVX2 version; the dispatcher picks one at runtime. The two versions use
// the same operation order (no FMA contraction) and agree bit for bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace mkcx::kernels {

enum class Backend { Scalar, Avx2 };

bool avx2_available();
Backend active_backend();
// Overrides runtime detection; requesting Avx2 on a machine without it
// falls back to Scalar. Mainly for tests and benchmarks.
void force_backend(Backend b);
std::string_view backend_name(Backend b);

// Structure-of-arrays view of 3-vectors.
struct Soa3 {
  const double* x = nullptr;
  const double* y = nullptr;
  const double* z = nullptr;
  std::size_t n = 0;
};

// out[i] = min_j <normals[i], points[j]> (Euclidean).
void min_dot3(Soa3 normals, Soa3 points, std::span<double> out);

// out[i] = -x0[i]*q[0] + x1[i]*q[1] + x2[i]*q[2] (Minkowski form).
void minkowski_dot3(Soa3 pts, const double q[3], std::span<double> out);

namespace scalar {
void min_dot3(Soa3 normals, Soa3 points, double* out);
void minkowski_dot3(Soa3 pts, const double q[3], double* out);
} // namespace scalar

namespace avx2 {
void min_dot3(Soa3 normals, Soa3 points, double* out);
void minkowski_dot3(Soa3 pts, const double q[3], double* out);
} // namespace avx2

} // namespace mkcx::kernels
