#include "mkcx/vertexclass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mkcx/hypgeom.hpp"
#include "mkcx/kernels.hpp"

namespace mkcx {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(const Vec3& a) {
  const double n = std::sqrt(dot(a, a));
  if (!(n > 0.0)) throw Error(ErrorKind::Input, "cannot normalize a zero vector");
  return {a[0] / n, a[1] / n, a[2] / n};
}

double angle_between(const Vec3& a, const Vec3& b) {
  const Vec3 c = cross(a, b);
  return std::atan2(std::sqrt(dot(c, c)), dot(a, b));
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  const double th = angle_between(a, b);
  if (th < 1e-15) return a;
  const double s = std::sin(th);
  const double wa = std::sin((1.0 - t) * th) / s, wb = std::sin(t * th) / s;
  return normalized({wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]});
}

std::vector<Vec3> fibonacci_sphere(int n) {
  std::vector<Vec3> out;
  out.reserve(n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return out;
}

namespace {

double distance_to_arc(const Vec3& p, const Vec3& a, const Vec3& b) {
  const double ends = std::min(angle_between(p, a), angle_between(p, b));
  const Vec3 ab = cross(a, b);
  const double nab = std::sqrt(dot(ab, ab));
  if (nab < 1e-15) return ends;
  const Vec3 m{ab[0] / nab, ab[1] / nab, ab[2] / nab};
  const double h = dot(p, m);
  Vec3 q{p[0] - h * m[0], p[1] - h * m[1], p[2] - h * m[2]};
  if (dot(q, q) < 1e-30) return ends;
  q = normalized(q);
  // q lies on the minor arc iff it is on the positive side of both end rays.
  if (dot(cross(a, q), m) >= 0.0 && dot(cross(q, b), m) >= 0.0)
    return std::min(ends, std::abs(std::asin(std::clamp(h, -1.0, 1.0))));
  return ends;
}

double min_dot(const std::vector<Vec3>& v, const Vec3& n) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : v) m = std::min(m, dot(n, p));
  return m;
}

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 neg(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

// Barycentric coordinates of the origin in the tetrahedron (a, b, c, d);
// returns the smallest coordinate, or -inf for a flat tetrahedron.
double origin_in_tetrahedron(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                             std::array<double, 4>& lam) {
  const Vec3 ba = sub(b, a), ca = sub(c, a), da = sub(d, a), na = neg(a);
  const double D = det3(ba, ca, da);
  if (std::abs(D) < 1e-14) return -std::numeric_limits<double>::infinity();
  lam[1] = det3(na, ca, da) / D;
  lam[2] = det3(ba, na, da) / D;
  lam[3] = det3(ba, ca, na) / D;
  lam[0] = 1.0 - lam[1] - lam[2] - lam[3];
  return std::min({lam[0], lam[1], lam[2], lam[3]});
}

std::optional<CrossingCertificate> find_certificate(const SphericalPolygon& poly) {
  auto search = [](const std::vector<Vec3>& pts, std::array<int, 4>& best) {
    double best_min = -std::numeric_limits<double>::infinity();
    std::array<double, 4> lam{};
    const int m = static_cast<int>(pts.size());
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (int k = j + 1; k < m; ++k)
          for (int l = k + 1; l < m; ++l) {
            const double v = origin_in_tetrahedron(pts[i], pts[j], pts[k], pts[l], lam);
            if (v > best_min) {
              best_min = v;
              best = {i, j, k, l};
            }
          }
    return best_min;
  };
  std::vector<Vec3> pts = poly.vertices();
  std::array<int, 4> idx{};
  double quality = search(pts, idx);
  if (!(quality > 1e-9)) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
      for (double t : {1.0 / 3.0, 0.5, 2.0 / 3.0}) pts.push_back(slerp(poly[i], poly[(i + 1) % n], t));
    quality = search(pts, idx);
  }
  if (!(quality > 1e-12)) return std::nullopt;
  CrossingCertificate cert;
  cert.l.start = pts[idx[0]];
  cert.l.end = pts[idx[1]];
  cert.l.length = kTwoPi - angle_between(pts[idx[0]], pts[idx[1]]);
  cert.x = pts[idx[2]];
  cert.y = pts[idx[3]];
  return cert;
}

} // namespace

SphericalPolygon::SphericalPolygon(std::vector<Vec3> vertices) : v_(std::move(vertices)) {
  if (v_.size() < 3) throw Error(ErrorKind::Input, "a spherical polygon needs at least 3 vertices");
  for (const auto& p : v_) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2]) ||
        std::abs(std::sqrt(dot(p, p)) - 1.0) > 1e-12)
      throw Error(ErrorKind::Input, "spherical polygon vertices must be unit vectors");
  }
  for (std::size_t i = 0; i < v_.size(); ++i)
    if (kPi - angle_between(v_[i], v_[(i + 1) % v_.size()]) < 1e-12)
      throw Error(ErrorKind::Input, "consecutive spherical polygon vertices are antipodal");
}

SphericalPolygon SphericalPolygon::from_directions(const std::vector<Vec3>& dirs) {
  std::vector<Vec3> v;
  v.reserve(dirs.size());
  for (const auto& d : dirs) v.push_back(normalized(d));
  return SphericalPolygon(std::move(v));
}

double SphericalPolygon::arc_length(std::size_t i) const {
  return angle_between(v_[i], v_[(i + 1) % v_.size()]);
}

double SphericalPolygon::length() const {
  double s = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) s += arc_length(i);
  return s;
}

double SphericalPolygon::distance_to(const Vec3& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v_.size(); ++i)
    d = std::min(d, distance_to_arc(p, v_[i], v_[(i + 1) % v_.size()]));
  return d;
}

HemisphereOptimum hemisphere_optimum(const SphericalPolygon& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  HemisphereOptimum best{-std::numeric_limits<double>::infinity(), {0, 0, 1}};
  auto consider = [&](const Vec3& c) {
    const double nn = dot(c, c);
    if (nn < 1e-28) return;
    const double inv = 1.0 / std::sqrt(nn);
    for (double sgn : {1.0, -1.0}) {
      const Vec3 u{sgn * c[0] * inv, sgn * c[1] * inv, sgn * c[2] * inv};
      const double m = min_dot(v, u);
      if (m > best.value) best = {m, u};
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    consider(v[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      consider({v[i][0] + v[j][0], v[i][1] + v[j][1], v[i][2] + v[j][2]});
      consider(cross(v[i], v[j]));
      for (std::size_t k = j + 1; k < n; ++k) consider(cross(sub(v[j], v[i]), sub(v[k], v[i])));
    }
  }
  return best;
}

HemisphereOptimum grid_hemisphere_optimum(const SphericalPolygon& poly, int grid) {
  const auto normals = fibonacci_sphere(grid);
  std::vector<double> nx(grid), ny(grid), nz(grid);
  for (int i = 0; i < grid; ++i) {
    nx[i] = normals[i][0];
    ny[i] = normals[i][1];
    nz[i] = normals[i][2];
  }
  const auto& v = poly.vertices();
  std::vector<double> px(v.size()), py(v.size()), pz(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    px[j] = v[j][0];
    py[j] = v[j][1];
    pz[j] = v[j][2];
  }
  std::vector<double> values(grid);
  kernels::min_dot3({nx.data(), ny.data(), nz.data(), static_cast<std::size_t>(grid)},
                    {px.data(), py.data(), pz.data(), v.size()}, values);

  std::vector<int> order(grid);
  for (int i = 0; i < grid; ++i) order[i] = i;
  const int keep = std::min(grid, 16);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](int a, int b) { return values[a] > values[b]; });

  // Local refinement around the best grid points: in tangent coordinates
  // (a, b) the objective is a minimum of nearly affine functions, so each
  // step maximizes the linearized minimum over a box by enumerating the
  // vertices of the arrangement, then evaluates the candidates exactly.
  HemisphereOptimum best{values[order[0]], normals[order[0]]};
  const double h = 2.0 * std::sqrt(4.0 * kPi / grid);
  const int starts = std::min(keep, 4);
  for (int r = 0; r < starts; ++r) {
    Vec3 c = normals[order[r]];
    double val = values[order[r]];
    double radius = h;
    for (int iter = 0; iter < 400 && radius > 1e-13; ++iter) {
      const Vec3 e1 = normalized(std::abs(c[0]) < 0.9 ? cross(c, {1, 0, 0}) : cross(c, {0, 1, 0}));
      const Vec3 e2 = cross(c, e1);
      struct Lin {
        double a0, ga, gb;
      };
      std::vector<Lin> act;
      double amin = std::numeric_limits<double>::infinity();
      for (const auto& p : v) amin = std::min(amin, dot(c, p));
      for (const auto& p : v)
        if (dot(c, p) <= amin + 4.0 * radius) act.push_back({dot(c, p), dot(e1, p), dot(e2, p)});
      std::vector<std::array<double, 2>> cand{{radius, radius}, {radius, -radius}, {-radius, radius}, {-radius, -radius}};
      const std::size_t m = act.size();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
          // l_i = l_j meets the box edges.
          const double da = act[i].a0 - act[j].a0, dga = act[i].ga - act[j].ga, dgb = act[i].gb - act[j].gb;
          for (double e : {radius, -radius}) {
            if (std::abs(dgb) > 1e-15) cand.push_back({e, -(da + dga * e) / dgb});
            if (std::abs(dga) > 1e-15) cand.push_back({-(da + dgb * e) / dga, e});
          }
          for (std::size_t k = j + 1; k < m; ++k) {
            const double ea = act[i].a0 - act[k].a0, ega = act[i].ga - act[k].ga, egb = act[i].gb - act[k].gb;
            const double det = dga * egb - dgb * ega;
            if (std::abs(det) < 1e-15) continue;
            cand.push_back({(-da * egb + dgb * ea) / det, (-dga * ea + ega * da) / det});
          }
        }
      bool moved = false;
      Vec3 next = c;
      for (const auto& ab : cand) {
        if (std::abs(ab[0]) > radius * (1 + 1e-12) || std::abs(ab[1]) > radius * (1 + 1e-12)) continue;
        const Vec3 n = normalized({c[0] + ab[0] * e1[0] + ab[1] * e2[0], c[1] + ab[0] * e1[1] + ab[1] * e2[1],
                                   c[2] + ab[0] * e1[2] + ab[1] * e2[2]});
        const double m2 = min_dot(v, n);
        if (m2 > val) {
          val = m2;
          next = n;
          moved = true;
        }
      }
      if (moved)
        c = next;
      else
        radius *= 0.5;
    }
    if (val > best.value) best = {val, c};
  }
  return best;
}

std::optional<Vec3> hemisphere_fit(const SphericalPolygon& poly, HemisphereMode mode) {
  const auto opt = hemisphere_optimum(poly);
  if (mode == HemisphereMode::Open) {
    if (opt.value > kHemisphereMargin) return opt.center;
  } else if (opt.value >= -kHemisphereMargin) {
    return opt.center;
  }
  return std::nullopt;
}

CertificateStatus crossing_certificate_check(const SphericalPolygon& poly,
                                             const CrossingCertificate& cert) {
  const auto& l = cert.l;
  if (!(l.length > kPi) || !(l.length < kTwoPi))
    throw Error(ErrorKind::CertificateMalformed, "certificate segment must be longer than pi");
  const double d = angle_between(l.start, l.end);
  if (std::abs((kTwoPi - d) - l.length) > 1e-9)
    throw Error(ErrorKind::CertificateMalformed, "segment length does not match its endpoints");
  if (poly.distance_to(l.start) > 1e-9 || poly.distance_to(l.end) > 1e-9)
    throw Error(ErrorKind::CertificateMalformed, "segment endpoints are not on the link");
  if (poly.distance_to(cert.x) > 1e-9 || poly.distance_to(cert.y) > 1e-9)
    return CertificateStatus::Invalid;
  if (angle_between(cert.x, cert.y) < 1e-12 || kPi - angle_between(cert.x, cert.y) < 1e-12)
    return CertificateStatus::Invalid;

  const Vec3 m = normalized(cross(l.start, l.end));
  const double sx = dot(m, cert.x), sy = dot(m, cert.y);
  if (!(sx * sy < 0.0) || std::abs(sx) < 1e-12 || std::abs(sy) < 1e-12)
    return CertificateStatus::Invalid;
  // Crossing of the minor arc xy with the great circle of l.
  const double mu = sx / (sx - sy);
  const Vec3 P = normalized({cert.x[0] + mu * (cert.y[0] - cert.x[0]),
                             cert.x[1] + mu * (cert.y[1] - cert.x[1]),
                             cert.x[2] + mu * (cert.y[2] - cert.x[2])});
  // Position of P along the major arc, measured from start away from end.
  const Vec3 w = normalized(sub(l.end, {dot(l.end, l.start) * l.start[0], dot(l.end, l.start) * l.start[1],
                                        dot(l.end, l.start) * l.start[2]}));
  double s = std::atan2(-dot(P, w), dot(P, l.start));
  if (s < 0.0) s += kTwoPi;
  const double tol = 1e-12;
  if (!(s > tol && s < l.length - tol)) return CertificateStatus::Invalid;
  if (!(s < kPi && l.length - s < kPi)) return CertificateStatus::Invalid;
  return CertificateStatus::Valid;
}

const char* to_string(VertexKind k) {
  switch (k) {
  case VertexKind::Convex:
    return "convex";
  case VertexKind::Concave:
    return "concave";
  case VertexKind::SVertex:
    return "s-vertex";
  case VertexKind::StrictSVertex:
    return "strict-s-vertex";
  }
  return "?";
}

bool h_vertex_test(double angle_sum, VertexLocation where) {
  if (!(angle_sum > 0.0)) throw Error(ErrorKind::Input, "angle sum must be positive");
  const double full = where == VertexLocation::Interior ? kTwoPi : kPi;
  return angle_sum >= full - 1e-9;
}

VertexClass classify_vertex(const SphericalPolygon& poly, std::optional<Vec3> outward) {
  VertexClass out;
  const auto opt = hemisphere_optimum(poly);
  out.optimum = opt.value;
  out.h_vertex = h_vertex_test(poly.length(), VertexLocation::Interior);
  if (opt.value > kHemisphereMargin) {
    if (!outward)
      throw Error(ErrorKind::OrientationMissing,
                  "link lies in an open hemisphere; an outward normal is required");
    const double s = dot(opt.center, normalized(*outward));
    if (std::abs(s) < 1e-9)
      throw Error(ErrorKind::Ambiguous, "outward normal is tangent to the hemisphere boundary");
    out.kind = s < 0.0 ? VertexKind::Convex : VertexKind::Concave;
    out.center = opt.center;
  } else if (opt.value >= -kHemisphereMargin) {
    out.kind = VertexKind::SVertex;
    out.center = opt.center;
  } else {
    out.kind = VertexKind::StrictSVertex;
    out.certificate = find_certificate(poly);
    if (!out.certificate)
      throw Error(ErrorKind::NonConvergence, "no crossing certificate found for a strict s-vertex");
  }
  return out;
}

TwoConvexity two_convexity_decision(const std::vector<OrientedLink>& links) {
  TwoConvexity out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    out.classes.push_back(classify_vertex(links[i].poly, links[i].outward));
    if (out.pass && out.classes.back().kind == VertexKind::Concave) {
      out.pass = false;
      out.first_failing = static_cast<int>(i);
    }
  }
  return out;
}

namespace {

struct PerturbPlan {
  Vec3 n{};
  std::vector<int> direction; // -1 pushed away from n, +1 towards n, 0 fixed
};

PerturbPlan plan_perturbation(const SphericalPolygon& poly) {
  const auto opt = hemisphere_optimum(poly);
  if (opt.value > kHemisphereMargin)
    throw Error(ErrorKind::Precondition, "link fits an open hemisphere; not an s-vertex");
  if (opt.value < -kHemisphereMargin)
    throw Error(ErrorKind::Precondition, "link is already a strict s-vertex");
  PerturbPlan plan{opt.center, std::vector<int>(poly.size(), 0)};
  std::vector<int> contacts;
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (std::abs(dot(poly[i], plan.n)) <= 1e-8) contacts.push_back(static_cast<int>(i));
  if (contacts.size() < poly.size()) {
    for (int i : contacts) plan.direction[i] = -1;
    return plan;
  }
  // Totally geodesic image: push a triangle around the origin away from n and
  // everything else towards n.
  const Vec3 e1 = normalized(poly[0]);
  const Vec3 e2 = cross(plan.n, e1);
  auto ang = [&](int i) { return std::atan2(dot(poly[i], e2), dot(poly[i], e1)); };
  const int m = static_cast<int>(poly.size());
  double best = -1.0;
  std::array<int, 3> tri{-1, -1, -1};
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        double a[3] = {ang(i), ang(j), ang(k)};
        std::sort(a, a + 3);
        const double gap = std::max({a[1] - a[0], a[2] - a[1], kTwoPi - (a[2] - a[0])});
        // The origin is strictly inside iff every angular gap is below pi.
        const double q = kPi - gap;
        if (q > best) {
          best = q;
          tri = {i, j, k};
        }
      }
  for (int i = 0; i < m; ++i) plan.direction[i] = 1;
  if (best > 1e-9)
    for (int i : tri) plan.direction[i] = -1;
  return plan;
}

SphericalPolygon apply_plan(const SphericalPolygon& poly, const PerturbPlan& plan, double step) {
  std::vector<Vec3> v = poly.vertices();
  const double c = std::cos(step), s = std::sin(step);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (plan.direction[i] == 0) continue;
    const double sg = plan.direction[i];
    v[i] = normalized({c * v[i][0] + sg * s * plan.n[0], c * v[i][1] + sg * s * plan.n[1],
                       c * v[i][2] + sg * s * plan.n[2]});
  }
  return SphericalPolygon(std::move(v));
}

bool strict_after(const SphericalPolygon& poly, const PerturbPlan& plan, double step) {
  try {
    return hemisphere_optimum(apply_plan(poly, plan, step)).value < -kHemisphereMargin;
  } catch (const Error&) {
    return false;
  }
}

} // namespace

double perturb_step_max(const SphericalPolygon& poly) {
  const auto plan = plan_perturbation(poly);
  double hi = kPi / 4.0;
  if (strict_after(poly, plan, hi)) return hi;
  double good = hi;
  for (int i = 0; i < 40; ++i) {
    good *= 0.5;
    if (strict_after(poly, plan, good)) break;
    if (i == 39)
      throw Error(ErrorKind::NonConvergence, "no perturbation step makes the link strict");
  }
  double bad = std::min(hi, 2.0 * good);
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (good + bad);
    (strict_after(poly, plan, mid) ? good : bad) = mid;
  }
  return good;
}

SphericalPolygon perturb_to_strict(const SphericalPolygon& poly, double step) {
  if (!(step >= 0.0)) throw Error(ErrorKind::Input, "perturbation step must be non-negative");
  const auto plan = plan_perturbation(poly);
  if (step == 0.0) return poly;
  return apply_plan(poly, plan, step);
}

} // namespace mkcx
