#include "selfix/core.hpp"

#include <algorithm>
#include <limits>

#include "selfix/error.hpp"

namespace selfix {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::NotASurface: return "NotASurface";
    case ErrorCode::NegativeDeficit: return "NegativeDeficit";
    case ErrorCode::Exhausted: return "Exhausted";
    case ErrorCode::NonTriangularCell: return "NonTriangularCell";
    case ErrorCode::StillIntersecting: return "StillIntersecting";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::MissingRep: return "MissingRep";
    case ErrorCode::OpenBoundary: return "OpenBoundary";
    case ErrorCode::IsolatedNonManifoldEdge: return "IsolatedNonManifoldEdge";
    case ErrorCode::NewIntersectionIntroduced: return "NewIntersectionIntroduced";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

Mat3 Mat3::rotation(const Vec3& axis, double angle) {
  const Vec3 u = normalized(axis);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  Mat3 r;
  r.m = {t * u.x * u.x + c,       t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y,
         t * u.x * u.y + s * u.z, t * u.y * u.y + c,       t * u.y * u.z - s * u.x,
         t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c};
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += (*this)(i, k) * o(k, j);
      r(i, j) = acc;
    }
  }
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double Mat3::determinant() const {
  return det3({m[0], m[1], m[2]}, {m[3], m[4], m[5]}, {m[6], m[7], m[8]});
}

double Mat3::orthogonality_defect() const {
  const Mat3 p = transposed() * *this;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

double Mat3::max_abs_diff(const Mat3& o) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < 9; ++i) worst = std::max(worst, std::abs(m[i] - o.m[i]));
  return worst;
}

Tolerance Tolerance::for_extent(double bbox_diagonal) {
  Tolerance tol;
  tol.eps_point = 1e-9 * (bbox_diagonal > 0.0 ? bbox_diagonal : 1.0);
  return tol;
}

void Tolerance::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(eps_point) || !ok(eps_param) || !ok(eps_angle))
    throw Error(ErrorCode::InvalidArgument, "tolerances must be finite and strictly positive");
}

double triangle_area(const Point3& a, const Point3& b, const Point3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

Plane plane_of_triangle(const Point3& a, const Point3& b, const Point3& c, const Tolerance& tol) {
  const Vec3 n = cross(b - a, c - a);
  const double len = norm(n);
  if (!(0.5 * len > tol.eps_point * tol.eps_point))
    throw Error(ErrorCode::DegenerateTriangle, "triangle area below eps_point^2");
  return Plane{a, n / len};
}

std::optional<double> segment_plane_alpha(const Point3& vi, const Point3& vj, const Plane& plane,
                                          const Tolerance& tol) {
  const Vec3 d = vj - vi;
  const double denom = dot(d, plane.normal);
  if (std::abs(denom) <= tol.eps_angle * norm(d)) return std::nullopt;
  const double alpha = dot(plane.point - vi, plane.normal) / denom;
  if (alpha < -tol.eps_param || alpha > 1.0 + tol.eps_param) return std::nullopt;
  return alpha;
}

bool point_in_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c,
                       const Tolerance& tol) {
  const Vec3 n = plane_of_triangle(a, b, c, tol).normal;
  const std::array<Point3, 3> v{a, b, c};
  for (int i = 0; i < 3; ++i) {
    const Point3& base = v[static_cast<std::size_t>(i)];
    const Point3& next = v[static_cast<std::size_t>((i + 1) % 3)];
    const Vec3 inward = normalized(cross(n, next - base));
    if (dot(inward, p - base) < -tol.eps_point) return false;
  }
  return true;
}

double point_segment_distance(const Point3& p, const Point3& a, const Point3& b) {
  const Vec3 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return distance(p, a + d * t);
}

PointIndex::PointIndex(double eps) : eps_(eps), inv_cell_(1.0 / eps) {}

std::size_t PointIndex::KeyHash::operator()(const Key& key) const noexcept {
  std::uint64_t h = static_cast<std::uint64_t>(key.i) * 0x9E3779B97F4A7C15ull;
  h ^= static_cast<std::uint64_t>(key.j) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
  h ^= static_cast<std::uint64_t>(key.k) + 0x94D049BB133111EBull + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

PointIndex::Key PointIndex::key_of(const Point3& p) const {
  return {static_cast<std::int64_t>(std::floor(p.x * inv_cell_)),
          static_cast<std::int64_t>(std::floor(p.y * inv_cell_)),
          static_cast<std::int64_t>(std::floor(p.z * inv_cell_))};
}

std::optional<std::uint32_t> PointIndex::find(const Point3& p) const {
  const Key k = key_of(p);
  std::optional<std::uint32_t> best;
  for (std::int64_t di = -1; di <= 1; ++di) {
    for (std::int64_t dj = -1; dj <= 1; ++dj) {
      for (std::int64_t dk = -1; dk <= 1; ++dk) {
        auto it = cells_.find(Key{k.i + di, k.j + dj, k.k + dk});
        if (it == cells_.end()) continue;
        for (std::uint32_t id : it->second) {
          if (distance(points_[id], p) <= eps_ && (!best || id < *best)) best = id;
        }
      }
    }
  }
  return best;
}

std::uint32_t PointIndex::insert(const Point3& p) {
  const auto id = static_cast<std::uint32_t>(points_.size());
  points_.push_back(p);
  cells_[key_of(p)].push_back(id);
  return id;
}

std::pair<std::uint32_t, bool> PointIndex::find_or_insert(const Point3& p) {
  if (auto id = find(p)) return {*id, false};
  return {insert(p), true};
}

std::vector<Point3> dedupe_points(std::span<const Point3> ps, const Tolerance& tol) {
  PointIndex index(tol.eps_point);
  for (const Point3& p : ps) index.find_or_insert(p);
  return index.points();
}

void BoundingBox::extend(const Point3& p) {
  lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
  hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
}

bool BoundingBox::overlaps(const BoundingBox& o, double pad) const {
  return lo.x <= o.hi.x + pad && o.lo.x <= hi.x + pad && lo.y <= o.hi.y + pad &&
         o.lo.y <= hi.y + pad && lo.z <= o.hi.z + pad && o.lo.z <= hi.z + pad;
}

BoundingBox bounding_box(std::span<const Point3> ps) {
  BoundingBox box;
  for (const Point3& p : ps) box.extend(p);
  return box;
}

}  // namespace selfix
