#pragma once

// Tolerance-aware 3D geometry kernel. Everything here is a pure function of
// its arguments.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace selfix {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  constexpr bool operator==(const Vec3&) const = default;
};

using Point3 = Vec3;

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }
inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}
// Lexicographic order, used wherever output must be deterministic.
inline bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}
constexpr double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
};
constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::sqrt(dot(v, v)); }

// Row-major 3x3 matrix; used for symmetry elements and tie-break rotations.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }
  static Mat3 rotation(const Vec3& axis, double angle);

  double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
  double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const;
  Mat3 transposed() const;
  double determinant() const;
  // max |entry| of (M^T M - I)
  double orthogonality_defect() const;
  double max_abs_diff(const Mat3& o) const;
};

// eps_point: coincidence distance. eps_param: slack on the edge parameter
// range [-eps, 1+eps]. eps_angle: threshold on unit-vector dot products.
struct Tolerance {
  double eps_point = 1e-9;
  double eps_param = 1e-9;
  double eps_angle = 1e-12;

  // Default tolerances scaled to a model with the given bounding-box diagonal.
  static Tolerance for_extent(double bbox_diagonal);
  // Throws InvalidArgument unless all three are finite and strictly positive.
  void validate() const;
};

struct Plane {
  Point3 point;
  Vec3 normal;  // unit length

  double signed_distance(const Point3& p) const { return dot(p - point, normal); }
};

double triangle_area(const Point3& a, const Point3& b, const Point3& c);

// Normal is (b-a)x(c-a) normalized, base point a. Throws DegenerateTriangle
// when the area is not above eps_point^2.
Plane plane_of_triangle(const Point3& a, const Point3& b, const Point3& c, const Tolerance& tol);

// Parameter alpha of the crossing of the line v_i + alpha (v_j - v_i) with the
// plane, if the segment is not parallel to it and alpha is within
// [-eps_param, 1 + eps_param].
std::optional<double> segment_plane_alpha(const Point3& vi, const Point3& vj, const Plane& plane,
                                          const Tolerance& tol);

inline Point3 lerp(const Point3& vi, const Point3& vj, double alpha) {
  return vj * alpha + vi * (1.0 - alpha);
}

// p is assumed to lie in the plane of (a, b, c). True if p is inside or on
// the boundary within eps_point.
bool point_in_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c,
                       const Tolerance& tol);

// Distance from p to the closed segment ab.
double point_segment_distance(const Point3& p, const Point3& a, const Point3& b);

// Uniform hash grid with cell size eps; finds a stored point within eps.
class PointIndex {
 public:
  explicit PointIndex(double eps);

  // Index of the first stored point within eps of p, if any.
  std::optional<std::uint32_t> find(const Point3& p) const;
  std::uint32_t insert(const Point3& p);
  // Existing index within eps, or a newly inserted one. Second member is
  // true when the point was inserted.
  std::pair<std::uint32_t, bool> find_or_insert(const Point3& p);

  const std::vector<Point3>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  struct Key {
    std::int64_t i, j, k;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const noexcept;
  };
  Key key_of(const Point3& p) const;

  double eps_;
  double inv_cell_;
  std::vector<Point3> points_;
  std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> cells_;
};

// Output points are pairwise farther apart than eps_point; every input point
// is within eps_point of an output point; first occurrence is kept.
std::vector<Point3> dedupe_points(std::span<const Point3> ps, const Tolerance& tol);

struct BoundingBox {
  Point3 lo{INFINITY, INFINITY, INFINITY};
  Point3 hi{-INFINITY, -INFINITY, -INFINITY};

  void extend(const Point3& p);
  bool empty() const { return lo.x > hi.x; }
  double diagonal() const { return empty() ? 0.0 : distance(lo, hi); }
  bool overlaps(const BoundingBox& o, double pad) const;
};

BoundingBox bounding_box(std::span<const Point3> ps);

}  // namespace selfix
