#include "mkcx/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace mkcx::kernels::avx2 {

void min_dot3(Soa3 normals, Soa3 points, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= normals.n; i += 4) {
    const __m256d nx = _mm256_loadu_pd(normals.x + i);
    const __m256d ny = _mm256_loadu_pd(normals.y + i);
    const __m256d nz = _mm256_loadu_pd(normals.z + i);
    __m256d m = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < points.n; ++j) {
      __m256d d = _mm256_mul_pd(nx, _mm256_set1_pd(points.x[j]));
      d = _mm256_add_pd(d, _mm256_mul_pd(ny, _mm256_set1_pd(points.y[j])));
      d = _mm256_add_pd(d, _mm256_mul_pd(nz, _mm256_set1_pd(points.z[j])));
      // min(d, m) keeps the scalar std::min(m, d) semantics for finite input
      m = _mm256_min_pd(d, m);
    }
    _mm256_storeu_pd(out + i, m);
  }
  if (i < normals.n) {
    Soa3 tail{normals.x + i, normals.y + i, normals.z + i, normals.n - i};
    scalar::min_dot3(tail, points, out + i);
  }
}

void minkowski_dot3(Soa3 pts, const double q[3], double* out) {
  const __m256d q0 = _mm256_set1_pd(-q[0]);
  const __m256d q1 = _mm256_set1_pd(q[1]);
  const __m256d q2 = _mm256_set1_pd(q[2]);
  std::size_t i = 0;
  for (; i + 4 <= pts.n; i += 4) {
    __m256d d = _mm256_mul_pd(_mm256_loadu_pd(pts.x + i), q0);
    d = _mm256_add_pd(d, _mm256_mul_pd(_mm256_loadu_pd(pts.y + i), q1));
    d = _mm256_add_pd(d, _mm256_mul_pd(_mm256_loadu_pd(pts.z + i), q2));
    _mm256_storeu_pd(out + i, d);
  }
  if (i < pts.n) {
    Soa3 tail{pts.x + i, pts.y + i, pts.z + i, pts.n - i};
    scalar::minkowski_dot3(tail, q, out + i);
  }
}

} // namespace mkcx::kernels::avx2
