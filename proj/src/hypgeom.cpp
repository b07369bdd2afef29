#include "mkcx/hypgeom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mkcx {

namespace {

bool quadric(Curvature c) { return c.kappa() != 0; }

void check_size(Curvature c, std::size_t n) {
  bool ok = quadric(c) ? (n == 3 || n == 4) : (n >= 1 && n <= 4);
  if (!ok)
    throw Error(ErrorKind::Input, "unsupported model dimension (ambient size " +
                                      std::to_string(n) + ")");
}

double sq_norm_model(Curvature c, std::span<const double> x) { return model_dot(c, x, x); }

// Generalized sine used by the half-angle formulas.
double gsin(double x, Curvature c) {
  switch (c.kappa()) {
  case -1: return std::sinh(x);
  case 1: return std::sin(x);
  default: return x;
  }
}

void require_same(const ModelPoint& p, const ModelPoint& q) {
  if (p.curvature() != q.curvature() || p.size() != q.size())
    throw Error(ErrorKind::Input, "points differ in curvature or dimension");
}

} // namespace

Curvature::Curvature(int kappa) : kappa_(kappa) {
  if (kappa < -1 || kappa > 1)
    throw Error(ErrorKind::Input, "curvature must be -1, 0 or +1");
}

double model_dot(Curvature c, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  if (c.kappa() == -1) s -= 2.0 * x[0] * y[0];
  return s;
}

ModelPoint ModelPoint::make(Curvature c, std::span<const double> coords) {
  check_size(c, coords.size());
  for (double v : coords)
    if (!std::isfinite(v)) throw Error(ErrorKind::Input, "non-finite coordinate");
  if (c.kappa() == -1) {
    double q = sq_norm_model(c, coords);
    double scale = std::max(1.0, coords[0] * coords[0]);
    if (coords[0] <= 0.0 || std::abs(q + 1.0) > kModelTol * scale)
      throw Error(ErrorKind::Input, "point is not on the upper hyperboloid sheet");
  } else if (c.kappa() == 1) {
    if (std::abs(sq_norm_model(c, coords) - 1.0) > 2.0 * kModelTol)
      throw Error(ErrorKind::Input, "point is not on the unit sphere");
  }
  ModelPoint p;
  p.curv_ = c;
  p.n_ = coords.size();
  std::copy(coords.begin(), coords.end(), p.c_.begin());
  return p;
}

ModelPoint ModelPoint::make(Curvature c, std::initializer_list<double> coords) {
  return make(c, std::span<const double>(coords.begin(), coords.size()));
}

ModelPoint ModelPoint::project(Curvature c, std::span<const double> coords) {
  check_size(c, coords.size());
  ModelPoint p;
  p.curv_ = c;
  p.n_ = coords.size();
  std::copy(coords.begin(), coords.end(), p.c_.begin());
  if (c.kappa() == 0) return p;
  double q = sq_norm_model(c, coords);
  if (c.kappa() == -1) {
    if (!(q < 0.0) || coords[0] <= 0.0)
      throw Error(ErrorKind::Input, "vector is not future time-like");
    double s = 1.0 / std::sqrt(-q);
    for (std::size_t i = 0; i < p.n_; ++i) p.c_[i] *= s;
  } else {
    if (!(q > 0.0)) throw Error(ErrorKind::Input, "zero vector cannot be normalized");
    double s = 1.0 / std::sqrt(q);
    for (std::size_t i = 0; i < p.n_; ++i) p.c_[i] *= s;
  }
  return p;
}

bool ModelPoint::operator==(const ModelPoint& o) const {
  if (curv_ != o.curv_ || n_ != o.n_) return false;
  for (std::size_t i = 0; i < n_; ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

double dist(const ModelPoint& p, const ModelPoint& q) {
  require_same(p, q);
  const Curvature c = p.curvature();
  std::array<double, ModelPoint::kMaxCoords> diff{};
  double e2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    diff[i] = p[i] - q[i];
    e2 += diff[i] * diff[i];
  }
  switch (c.kappa()) {
  case 0: return std::sqrt(e2);
  case 1: {
    double s2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s2 += (p[i] + q[i]) * (p[i] + q[i]);
    return 2.0 * std::atan2(std::sqrt(e2), std::sqrt(s2));
  }
  default: {
    double ch = -model_dot(c, p.coords(), q.coords());
    if (ch > 2.0) return std::acosh(ch);
    double m = e2 - 2.0 * diff[0] * diff[0];
    return 2.0 * std::asinh(std::sqrt(std::max(0.0, m)) / 2.0);
  }
  }
}

ModelPoint geodesic_point(const ModelPoint& p, const ModelPoint& q, double t) {
  require_same(p, q);
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  const Curvature c = p.curvature();
  const double d = dist(p, q);
  if (d == 0.0) return p;
  if (c.kappa() == 1 && d > kPi - 1e-12)
    throw Error(ErrorKind::Ambiguous, "antipodal points have no unique minor arc");
  double wp = 1.0 - t, wq = t;
  if (c.kappa() != 0 && d > 1e-8) {
    if (c.kappa() == -1) {
      wp = std::sinh((1.0 - t) * d) / std::sinh(d);
      wq = std::sinh(t * d) / std::sinh(d);
    } else {
      wp = std::sin((1.0 - t) * d) / std::sin(d);
      wq = std::sin(t * d) / std::sin(d);
    }
  }
  std::array<double, ModelPoint::kMaxCoords> x{};
  for (std::size_t i = 0; i < p.size(); ++i) x[i] = wp * p[i] + wq * q[i];
  return ModelPoint::project(c, std::span<const double>(x.data(), p.size()));
}

double angle_from_sides(double a, double b, double c, Curvature k) {
  if (!(b > 0.0) || !(c > 0.0) || !(a >= 0.0))
    throw Error(ErrorKind::UndefinedAngle, "angle needs positive adjacent sides");
  const double s = 0.5 * (a + b + c);
  const double tol = 1e-14 * std::max(1.0, s);
  double sa = s - a, sb = s - b, sc = s - c;
  if (sa < -tol || sb < -tol || sc < -tol)
    throw Error(ErrorKind::Input, "sides violate the triangle inequality");
  sa = std::max(sa, 0.0);
  sb = std::max(sb, 0.0);
  sc = std::max(sc, 0.0);
  if (sa == 0.0) return kPi;
  if (sb == 0.0 || sc == 0.0) return 0.0;
  // Half-angle form: stable for thin and for tiny triangles.
  const double th = std::sqrt(gsin(sb, k) / gsin(s, k)) * std::sqrt(gsin(sc, k) / gsin(sa, k));
  return 2.0 * std::atan(th);
}

TriangleAngles triangle_angles_from_sides(const TriangleSides& t) {
  const Curvature k = t.curvature;
  if (!(t.a > 0.0) || !(t.b > 0.0) || !(t.c > 0.0))
    throw Error(ErrorKind::Input, "triangle sides must be positive");
  if (k.kappa() == 1 && t.a + t.b + t.c >= kTwoPi)
    throw Error(ErrorKind::Infeasible, "spherical triangle perimeter must be < 2*pi");
  const double s = 0.5 * (t.a + t.b + t.c);
  const double slack = std::min({s - t.a, s - t.b, s - t.c});
  if (slack <= 1e-13 * s) {
    throw Error(ErrorKind::DegenerateTriangle,
                "degenerate triangle (" + std::to_string(t.a) + ", " + std::to_string(t.b) +
                    ", " + std::to_string(t.c) + "): vertices are collinear");
  }
  return {angle_from_sides(t.a, t.b, t.c, k), angle_from_sides(t.b, t.c, t.a, k),
          angle_from_sides(t.c, t.a, t.b, k)};
}

ModelPoint base_point(Curvature c, std::size_t dim) {
  std::array<double, ModelPoint::kMaxCoords> x{};
  if (c.kappa() != 0) x[0] = 1.0;
  const std::size_t n = c.kappa() == 0 ? dim : dim + 1;
  return ModelPoint::make(c, std::span<const double>(x.data(), n));
}

namespace {

// Point at distance d from the basepoint in the direction making angle theta
// with the first axis, in the first coordinate plane.
ModelPoint polar_point(Curvature c, std::size_t dim, double d, double theta) {
  std::array<double, ModelPoint::kMaxCoords> x{};
  const double ct = std::cos(theta), st = std::sin(theta);
  switch (c.kappa()) {
  case 0:
    x[0] = d * ct;
    if (dim > 1) x[1] = d * st;
    return ModelPoint::make(c, std::span<const double>(x.data(), dim));
  case -1:
    x[0] = std::cosh(d);
    x[1] = std::sinh(d) * ct;
    x[2] = std::sinh(d) * st;
    return ModelPoint::project(c, std::span<const double>(x.data(), dim + 1));
  default:
    x[0] = std::cos(d);
    x[1] = std::sin(d) * ct;
    x[2] = std::sin(d) * st;
    return ModelPoint::project(c, std::span<const double>(x.data(), dim + 1));
  }
}

} // namespace

std::array<ModelPoint, 3> comparison_triangle(double d_pq, double d_qr, double d_rp,
                                              Curvature target) {
  if (d_pq < 0 || d_qr < 0 || d_rp < 0)
    throw Error(ErrorKind::Input, "negative distance");
  const double tol = 1e-12 * std::max(1.0, d_pq + d_qr + d_rp);
  if (d_pq > d_qr + d_rp + tol || d_qr > d_pq + d_rp + tol || d_rp > d_pq + d_qr + tol)
    throw Error(ErrorKind::Input, "distances violate the triangle inequality");
  if (target.kappa() == 1 && d_pq + d_qr + d_rp >= kTwoPi)
    throw Error(ErrorKind::Infeasible, "spherical comparison needs perimeter < 2*pi");
  const std::size_t dim = 2;
  ModelPoint p = base_point(target, dim);
  ModelPoint q = polar_point(target, dim, d_pq, 0.0);
  double theta = 0.0;
  if (d_pq > 0.0 && d_rp > 0.0) theta = angle_from_sides(d_qr, d_pq, d_rp, target);
  ModelPoint r = polar_point(target, dim, d_rp, theta);
  return {p, q, r};
}

double comparison_angle(double d_pq, double d_pr, double d_qr) {
  if (d_pq <= 0.0 || d_pr <= 0.0)
    throw Error(ErrorKind::UndefinedAngle, "comparison angle undefined at a degenerate side");
  return angle_from_sides(d_qr, d_pq, d_pr, Curvature::flat());
}

double triangle_area(const TriangleSides& sides) {
  if (sides.curvature.kappa() != -1)
    throw Error(ErrorKind::UnsupportedCurvature, "triangle area is only provided for kappa = -1");
  return kPi - triangle_angles_from_sides(sides).sum();
}

// ---------------------------------------------------------------------------

std::array<double, 3> unit_tangent(const ModelPoint& a, const ModelPoint& b) {
  require_same(a, b);
  const Curvature c = a.curvature();
  std::array<double, 3> u{};
  const std::size_t n = a.size();
  if (n > 3) throw Error(ErrorKind::Input, "tangent helpers are two-dimensional");
  if (c.kappa() == 0) {
    for (std::size_t i = 0; i < n; ++i) u[i] = b[i] - a[i];
  } else {
    const double ab = model_dot(c, a.coords(), b.coords());
    // Project b onto the tangent space at a.
    const double s = c.kappa() == -1 ? ab : -ab;
    for (std::size_t i = 0; i < n; ++i) u[i] = b[i] + s * a[i];
  }
  const double nn = model_dot(c, std::span<const double>(u.data(), n),
                              std::span<const double>(u.data(), n));
  if (!(nn > 0.0)) throw Error(ErrorKind::UndefinedAngle, "coincident points have no direction");
  const double inv = 1.0 / std::sqrt(nn);
  for (auto& v : u) v *= inv;
  return u;
}

std::array<double, 3> tangent_normal(const ModelPoint& a, const std::array<double, 3>& u) {
  const Curvature c = a.curvature();
  if (c.kappa() == 0) return {-u[1], u[0], 0.0};
  if (a.size() != 3) throw Error(ErrorKind::Input, "tangent helpers are two-dimensional");
  std::array<double, 3> n{a[1] * u[2] - a[2] * u[1], a[2] * u[0] - a[0] * u[2],
                          a[0] * u[1] - a[1] * u[0]};
  if (c.kappa() == -1) n[0] = -n[0];
  return n;
}

ModelPoint exp_map(const ModelPoint& a, const std::array<double, 3>& dir, double d) {
  const Curvature c = a.curvature();
  const std::size_t n = a.size();
  std::array<double, ModelPoint::kMaxCoords> x{};
  double ca = 1.0, sd = d;
  if (c.kappa() == -1) {
    ca = std::cosh(d);
    sd = std::sinh(d);
  } else if (c.kappa() == 1) {
    ca = std::cos(d);
    sd = std::sin(d);
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = ca * a[i] + sd * dir[i];
  if (c.kappa() == 0)
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i] + d * dir[i];
  return ModelPoint::project(c, std::span<const double>(x.data(), n));
}

double tangent_angle(const ModelPoint& a, const ModelPoint& b, const ModelPoint& c) {
  const Curvature k = a.curvature();
  auto u = unit_tangent(a, b);
  auto v = unit_tangent(a, c);
  const std::size_t n = a.size();
  double cs = model_dot(k, std::span<const double>(u.data(), n), std::span<const double>(v.data(), n));
  double sn;
  if (n <= 3 && a.dim() == 2) {
    auto w = tangent_normal(a, u);
    sn = std::abs(model_dot(k, std::span<const double>(w.data(), n),
                            std::span<const double>(v.data(), n)));
  } else {
    sn = std::sqrt(std::max(0.0, 1.0 - cs * cs));
  }
  return std::atan2(sn, cs);
}

ModelPoint place_third(const ModelPoint& a, const ModelPoint& b, double d_ac, double d_bc,
                       int side) {
  const double d_ab = dist(a, b);
  if (d_ac == 0.0) return a;
  const double theta = angle_from_sides(d_bc, d_ab, d_ac, a.curvature());
  auto u = unit_tangent(a, b);
  auto n = tangent_normal(a, u);
  const double s = side >= 0 ? std::sin(theta) : -std::sin(theta);
  const double cth = std::cos(theta);
  std::array<double, 3> dir{};
  for (int i = 0; i < 3; ++i) dir[i] = cth * u[i] + s * n[i];
  return exp_map(a, dir, d_ac);
}

Chart2 to_chart(const ModelPoint& p) {
  if (p.curvature().kappa() == 0) return {p[0], p.size() > 1 ? p[1] : 0.0};
  return {p[1] / p[0], p[2] / p[0]};
}

ModelPoint from_chart(Curvature c, Chart2 k) {
  if (c.kappa() == 0) return ModelPoint::make(c, {k.x, k.y});
  const double x[3] = {1.0, k.x, k.y};
  return ModelPoint::project(c, x);
}

double orient2d(Chart2 a, Chart2 b, Chart2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// ---------------------------------------------------------------------------

ModelPoint Ray::at(double t) const { return exp_map(base, direction, t); }

Chart2 Ray::ideal_endpoint() const {
  const double x0 = base[0] + direction[0];
  return {(base[1] + direction[1]) / x0, (base[2] + direction[2]) / x0};
}

Ray make_ray(const ModelPoint& base, const std::array<double, 3>& direction) {
  const Curvature c = base.curvature();
  if (c.kappa() != -1 || base.size() != 3)
    throw Error(ErrorKind::UnsupportedCurvature, "rays are provided in H^2 only");
  const std::span<const double> d(direction.data(), 3);
  if (std::abs(model_dot(c, d, base.coords())) > 1e-10 ||
      std::abs(model_dot(c, d, d) - 1.0) > 1e-10)
    throw Error(ErrorKind::Input, "ray direction must be a unit tangent at the base");
  return Ray{base, direction};
}

double asymptotic_ray_gap(const Ray& r1, const Ray& r2, double t) {
  const Chart2 e1 = r1.ideal_endpoint(), e2 = r2.ideal_endpoint();
  if (std::hypot(e1.x - e2.x, e1.y - e2.y) > 1e-9)
    throw Error(ErrorKind::DivergentRays, "rays have distinct ideal endpoints");
  if (t < 0.0) throw Error(ErrorKind::Input, "ray parameter must be non-negative");
  // Busemann level of r_i(t) w.r.t. the shared ideal point is -t - log(xi_i0),
  // where xi_i = base + direction; shift one ray to match horocycles.
  const double shift = std::log(r1.base[0] + r1.direction[0]) -
                       std::log(r2.base[0] + r2.direction[0]);
  const double t1 = shift >= 0.0 ? t : t - shift;
  const double t2 = shift >= 0.0 ? t + shift : t;
  return dist(r1.at(t1), r2.at(t2));
}

} // namespace mkcx
