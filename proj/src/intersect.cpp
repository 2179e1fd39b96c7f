#include "selfix/intersect.hpp"

#include <algorithm>

#include "selfix/parallel.hpp"

namespace selfix {

namespace {

// Parameter range of the part of segment pq inside triangle t (all in the
// plane with normal n). Cyrus-Beck against the three inward side normals.
// Cuts [lo, hi] to where the linear function with endpoint values f0, f1 is
// non-negative. Returns false when it is negative on the whole segment.
bool cut_range(double f0, double f1, std::array<double, 2>& r) {
  if (f0 < 0.0 && f1 < 0.0) return false;
  if (f0 < 0.0) r[0] = std::max(r[0], f0 / (f0 - f1));
  if (f1 < 0.0) r[1] = std::min(r[1], f0 / (f0 - f1));
  return true;
}

// The eps-padded triangle decides whether the piece is empty. The returned
// range uses side values with |f| <= eps snapped to zero, so a segment
// running along a side is not cut by rounding noise; it collapses to a point
// when only the padding overlaps.
std::optional<std::array<double, 2>> clip_to_triangle(const Point3& p, const Point3& q,
                                                      const Triangle& t, const Vec3& n,
                                                      const Tolerance& tol) {
  const double eps = tol.eps_point;
  std::array<double, 2> padded{0.0, 1.0};
  std::array<double, 2> exact{0.0, 1.0};
  bool exact_empty = false;
  auto snap = [eps](double f) { return std::abs(f) <= eps ? 0.0 : f; };
  for (std::size_t i = 0; i < 3; ++i) {
    const Point3& base = t[i];
    const Vec3 inward = normalized(cross(n, t[(i + 1) % 3] - base));
    const double f0 = dot(inward, p - base);
    const double f1 = dot(inward, q - base);
    if (!cut_range(f0 + eps, f1 + eps, padded)) return std::nullopt;
    if (!cut_range(snap(f0), snap(f1), exact)) exact_empty = true;
  }
  if (padded[0] > padded[1]) return std::nullopt;
  if (!exact_empty && exact[0] <= exact[1]) return exact;
  const double mid = exact_empty ? 0.5 * (padded[0] + padded[1])
                                 : std::clamp(0.5 * (exact[0] + exact[1]), padded[0], padded[1]);
  return std::array<double, 2>{mid, mid};
}

bool on_boundary(const Point3& p, const Triangle& t, std::size_t edge, const Tolerance& tol) {
  return point_segment_distance(p, t[edge], t[(edge + 1) % 3]) <= tol.eps_point;
}

// Pieces of t_src's edges that lie inside t_dst and not along its boundary.
std::vector<std::array<Point3, 2>> edges_inside(const Triangle& t_src, const Triangle& t_dst,
                                                const Vec3& n, const Tolerance& tol) {
  std::vector<std::array<Point3, 2>> out;
  for (std::size_t i = 0; i < 3; ++i) {
    const Point3& p = t_src[i];
    const Point3& q = t_src[(i + 1) % 3];
    auto range = clip_to_triangle(p, q, t_dst, n, tol);
    if (!range) continue;
    const Point3 a = lerp(p, q, (*range)[0]);
    const Point3 b = lerp(p, q, (*range)[1]);
    if (distance(a, b) <= tol.eps_point) continue;
    bool along = false;
    for (std::size_t e = 0; e < 3 && !along; ++e) along = on_boundary(a, t_dst, e, tol) && on_boundary(b, t_dst, e, tol);
    if (!along) out.push_back({a, b});
  }
  return out;
}

void add_unique(std::vector<Point3>& pts, const Point3& p, const Tolerance& tol) {
  for (const Point3& q : pts) {
    if (distance(p, q) <= tol.eps_point) return;
  }
  pts.push_back(p);
}

// Points where the edges of `src` meet the triangle `dst` (whose plane is P).
void edge_hits(const Triangle& src, const std::array<double, 3>& dist, const Triangle& dst,
               const Plane& P, const Tolerance& tol, std::vector<Point3>& pts) {
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3;
    const bool on_i = std::abs(dist[i]) <= tol.eps_point;
    const bool on_j = std::abs(dist[j]) <= tol.eps_point;
    if (on_i && on_j) {
      if (auto range = clip_to_triangle(src[i], src[j], dst, P.normal, tol)) {
        add_unique(pts, lerp(src[i], src[j], (*range)[0]), tol);
        add_unique(pts, lerp(src[i], src[j], (*range)[1]), tol);
      }
      continue;
    }
    std::optional<Point3> hit;
    if (on_i) {
      hit = src[i];
    } else if (on_j) {
      hit = src[j];
    } else if ((dist[i] > 0.0) != (dist[j] > 0.0)) {
      if (auto alpha = segment_plane_alpha(src[i], src[j], P, tol)) hit = lerp(src[i], src[j], *alpha);
    }
    if (hit && point_in_triangle(*hit, dst[0], dst[1], dst[2], tol)) add_unique(pts, *hit, tol);
  }
}

}  // namespace

CoplanarResult coplanar_intersection(const Triangle& t1, const Triangle& t2, const Tolerance& tol) {
  CoplanarResult r;
  const Vec3 n = plane_of_triangle(t1[0], t1[1], t1[2], tol).normal;
  r.inside_first = edges_inside(t2, t1, n, tol);
  r.inside_second = edges_inside(t1, t2, n, tol);

  for (std::size_t i = 0; i < 3; ++i) {
    const Point3& a = t1[i];
    const Point3& b = t1[(i + 1) % 3];
    const double la = distance(a, b);
    for (std::size_t j = 0; j < 3; ++j) {
      const Point3& p = t2[j];
      const Point3& q = t2[(j + 1) % 3];
      const double lp = distance(p, q);
      const double sp = dot(n, cross(b - a, p - a)) / la;
      const double sq = dot(n, cross(b - a, q - a)) / la;
      const double sa = dot(n, cross(q - p, a - p)) / lp;
      const double sb = dot(n, cross(q - p, b - p)) / lp;
      const bool cross_pq = (sp > tol.eps_point && sq < -tol.eps_point) ||
                            (sp < -tol.eps_point && sq > tol.eps_point);
      const bool cross_ab = (sa > tol.eps_point && sb < -tol.eps_point) ||
                            (sa < -tol.eps_point && sb > tol.eps_point);
      if (cross_pq && cross_ab) r.crossings.push_back(lerp(p, q, sp / (sp - sq)));
    }
  }

  if (r.inside_first.empty() && r.inside_second.empty()) {
    r.kind = CoplanarKind::NoOverlap;
    return r;
  }
  auto all_in = [&](const Triangle& inner, const Triangle& outer) {
    return std::all_of(inner.begin(), inner.end(), [&](const Point3& p) {
      return point_in_triangle(p, outer[0], outer[1], outer[2], tol);
    });
  };
  r.kind = (all_in(t2, t1) || all_in(t1, t2)) ? CoplanarKind::Contained : CoplanarKind::CrossingEdges;
  return r;
}

PairIntersection triangle_pair_intersection(const Triangle& t1, const Triangle& t2,
                                            std::span<const Point3> shared, const Tolerance& tol) {
  PairIntersection r;
  const Plane P1 = plane_of_triangle(t1[0], t1[1], t1[2], tol);
  const Plane P2 = plane_of_triangle(t2[0], t2[1], t2[2], tol);
  std::array<double, 3> d1{};
  std::array<double, 3> d2{};
  for (std::size_t i = 0; i < 3; ++i) {
    d1[i] = P2.signed_distance(t1[i]);
    d2[i] = P1.signed_distance(t2[i]);
  }
  auto within = [&](const std::array<double, 3>& d) {
    return std::all_of(d.begin(), d.end(), [&](double x) { return std::abs(x) <= tol.eps_point; });
  };
  auto one_side = [&](const std::array<double, 3>& d) {
    return std::all_of(d.begin(), d.end(), [&](double x) { return x > tol.eps_point; }) ||
           std::all_of(d.begin(), d.end(), [&](double x) { return x < -tol.eps_point; });
  };

  if (within(d1) || within(d2)) {
    r.coplanar = coplanar_intersection(t1, t2, tol);
    r.kind = r.coplanar.kind == CoplanarKind::NoOverlap ? PairKind::None : PairKind::Coplanar;
    return r;
  }
  if (one_side(d1) || one_side(d2)) return r;

  std::vector<Point3> pts;
  edge_hits(t1, d1, t2, P2, tol, pts);
  edge_hits(t2, d2, t1, P1, tol, pts);
  if (pts.empty()) return r;

  auto is_shared = [&](const Point3& p) {
    return std::any_of(shared.begin(), shared.end(),
                       [&](const Point3& s) { return distance(p, s) <= tol.eps_point; });
  };
  if (std::all_of(pts.begin(), pts.end(), is_shared)) return r;

  if (pts.size() == 1) {
    r.kind = PairKind::Touch;
    r.p0 = r.p1 = pts[0];
    return r;
  }
  std::size_t bi = 0;
  std::size_t bj = 1;
  if (pts.size() > 2) {
    r.tolerance_warning = true;
    double best = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double dd = distance(pts[i], pts[j]);
        if (dd > best) {
          best = dd;
          bi = i;
          bj = j;
        }
      }
    }
  }
  r.kind = PairKind::Segment;
  r.p0 = pts[bi];
  r.p1 = pts[bj];
  if (lex_less(r.p1, r.p0)) std::swap(r.p0, r.p1);
  return r;
}

PairIntersection face_pair_intersection(const EmbeddedComplex& X, FaceId a, FaceId b,
                                        const Tolerance& tol) {
  const Triple& fa = X.complex().face(a);
  const Triple& fb = X.complex().face(b);
  std::vector<Point3> shared;
  for (VertexId u : fa) {
    if (std::find(fb.begin(), fb.end(), u) != fb.end()) shared.push_back(X.point(u));
  }
  return triangle_pair_intersection(X.triangle(a), X.triangle(b), shared, tol);
}

bool record_pair(IntersectionSet& out, FaceId a, FaceId b, const PairIntersection& r) {
  if (r.tolerance_warning) ++out.warnings;
  switch (r.kind) {
    case PairKind::None:
      return false;
    case PairKind::Touch:
      ++out.touch_count;
      return false;
    case PairKind::Segment:
      out.segments.push_back({a, b, r.p0, r.p1});
      out.per_face[a].push_back({r.p0, r.p1, b, false});
      out.per_face[b].push_back({r.p0, r.p1, a, false});
      return true;
    case PairKind::Coplanar:
      ++out.coplanar_pairs;
      for (const auto& s : r.coplanar.inside_first) out.per_face[a].push_back({s[0], s[1], b, true});
      for (const auto& s : r.coplanar.inside_second) out.per_face[b].push_back({s[0], s[1], a, true});
      return true;
  }
  return false;
}

std::vector<std::array<FaceId, 2>> IntersectionSet::offending_pairs() const {
  std::vector<std::array<FaceId, 2>> out;
  for (const auto& s : segments) out.push_back({s.face_a, s.face_b});
  for (FaceId f = 0; f < per_face.size(); ++f) {
    for (const Constraint& c : per_face[f]) {
      if (c.coplanar && f < c.other) out.push_back({f, c.other});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IntersectionSet all_intersections(const EmbeddedComplex& X, const Tolerance& tol,
                                  const IntersectOptions& opts) {
  const std::size_t nf = X.complex().face_count();
  std::vector<BoundingBox> boxes(nf);
  for (FaceId f = 0; f < nf; ++f) {
    const auto t = X.triangle(f);
    boxes[f] = bounding_box(t);
  }
  std::vector<std::vector<std::pair<FaceId, PairIntersection>>> rows(nf);
  parallel_for(nf, opts.jobs, [&](std::size_t i) {
    const auto a = static_cast<FaceId>(i);
    for (FaceId b = a + 1; b < nf; ++b) {
      if (!boxes[a].overlaps(boxes[b], tol.eps_point)) continue;
      PairIntersection r = face_pair_intersection(X, a, b, tol);
      if (r.kind != PairKind::None || r.tolerance_warning) rows[a].emplace_back(b, std::move(r));
    }
  });

  IntersectionSet out;
  out.per_face.resize(nf);
  out.pair_tests = nf * (nf - (nf > 0 ? 1 : 0)) / 2;
  for (FaceId a = 0; a < nf; ++a) {
    for (const auto& [b, r] : rows[a]) record_pair(out, a, b, r);
  }
  return out;
}

void write_segments(std::FILE* out, const IntersectionSet& set) {
  for (const auto& s : set.segments) {
    std::fprintf(out, "seg %u %u %.17g %.17g %.17g %.17g %.17g %.17g\n", s.face_a, s.face_b, s.p0.x,
                 s.p0.y, s.p0.z, s.p1.x, s.p1.y, s.p1.z);
  }
}

}  // namespace selfix
