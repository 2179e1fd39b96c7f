#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "selfix/fixtures.hpp"
#include "selfix/intersect.hpp"
#include "support.hpp"

using namespace selfix;

namespace {

const Tolerance tol{};

bool same_segment(const Point3& a0, const Point3& a1, const Point3& b0, const Point3& b1, double eps) {
  return (distance(a0, b0) <= eps && distance(a1, b1) <= eps) ||
         (distance(a0, b1) <= eps && distance(a1, b0) <= eps);
}

Point3 random_point(std::mt19937_64& rng, double r) {
  return {testing::uniform(rng, -r, r), testing::uniform(rng, -r, r), testing::uniform(rng, -r, r)};
}

// Multiset equality of segments keyed by face pair, endpoints within eps.
bool same_segments(const IntersectionSet& a, const IntersectionSet& b, double eps) {
  if (a.segments.size() != b.segments.size()) return false;
  std::vector<bool> used(b.segments.size(), false);
  for (const auto& s : a.segments) {
    bool found = false;
    for (std::size_t i = 0; i < b.segments.size() && !found; ++i) {
      const auto& t = b.segments[i];
      if (used[i] || std::minmax(s.face_a, s.face_b) != std::minmax(t.face_a, t.face_b)) continue;
      if (same_segment(s.p0, s.p1, t.p0, t.p1, eps)) used[i] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("intersect") {

TEST_CASE("triangle_pair_intersection examples") {
  const Triangle f1{Point3{0, 0, 0}, Point3{2, 0, 0}, Point3{0, 2, 0}};
  const Triangle f2{Point3{0.5, 0.5, -1}, Point3{0.5, 0.5, 1}, Point3{5, 0.5, 0}};
  const auto r = triangle_pair_intersection(f1, f2, {}, tol);
  REQUIRE(r.kind == PairKind::Segment);
  CHECK(same_segment(r.p0, r.p1, {0.5, 0.5, 0}, {1.5, 0.5, 0}, 1e-12));

  const auto T = fixtures::tetrahedron().embed();
  const auto e = T.complex().edge(0);
  std::vector<FaceId> on_edge = T.complex().edge_faces(0);
  CAPTURE(e[0]);
  REQUIRE(on_edge.size() == 2);
  CHECK(face_pair_intersection(T, on_edge[0], on_edge[1], tol).kind == PairKind::None);

  const Triangle low{Point3{0, 0, 0}, Point3{1, 0, 0}, Point3{0, 1, 0}};
  const Triangle high{Point3{0, 0, 1}, Point3{1, 0, 1}, Point3{0, 1, 1}};
  CHECK(triangle_pair_intersection(low, high, {}, tol).kind == PairKind::None);
}

TEST_CASE("coplanar_intersection examples") {
  const Triangle a{Point3{0, 0, 0}, Point3{1, 0, 0}, Point3{0, 1, 0}};
  const Triangle far{Point3{5, 5, 0}, Point3{6, 5, 0}, Point3{5, 6, 0}};
  CHECK(coplanar_intersection(a, far, tol).kind == CoplanarKind::NoOverlap);

  const Triangle big{Point3{0, 0, 0}, Point3{4, 0, 0}, Point3{0, 4, 0}};
  const Triangle small{Point3{0.5, 0.5, 0}, Point3{1.5, 0.5, 0}, Point3{0.5, 1.5, 0}};
  CHECK(coplanar_intersection(big, small, tol).kind == CoplanarKind::Contained);

  // Star of David: two equilateral triangles rotated by 60 degrees
  Triangle up, down;
  for (int i = 0; i < 3; ++i) {
    const double t = 2 * M_PI * i / 3 + M_PI / 2;
    up[i] = {std::cos(t), std::sin(t), 0};
    down[i] = {std::cos(t + M_PI), std::sin(t + M_PI), 0};
  }
  const auto star = coplanar_intersection(up, down, tol);
  CHECK(star.kind == CoplanarKind::CrossingEdges);
  CHECK(dedupe_points(star.crossings, tol).size() == 6);
  // 2D oracle: each crossing lies on an edge of both triangles
  for (const Point3& p : star.crossings) {
    double du = INFINITY, dd = INFINITY;
    for (int i = 0; i < 3; ++i) {
      du = std::min(du, point_segment_distance(p, up[i], up[(i + 1) % 3]));
      dd = std::min(dd, point_segment_distance(p, down[i], down[(i + 1) % 3]));
    }
    CHECK(du < 1e-12);
    CHECK(dd < 1e-12);
  }
  // the full pair test reports the coplanar outcome
  CHECK(triangle_pair_intersection(up, down, {}, tol).kind == PairKind::Coplanar);
}

TEST_CASE("all_intersections examples") {
  CHECK(all_intersections(fixtures::icosahedron().embed(), tol).empty());

  const auto M = fixtures::interlocked_tetrahedra();
  const auto X = M.embed();
  const Tolerance t = M.tolerance();
  const auto hits = all_intersections(X, t);
  CHECK_FALSE(hits.empty());
  // exhaustive oracle over the pairs that share no vertex
  std::size_t expected = 0;
  const auto& K = X.complex();
  for (FaceId a = 0; a < K.face_count(); ++a)
    for (FaceId b = a + 1; b < K.face_count(); ++b) {
      const auto& A = K.face(a);
      const auto& B = K.face(b);
      bool shared = false;
      for (VertexId u : A)
        for (VertexId v : B) shared = shared || u == v;
      if (shared) continue;
      const auto o = oracle::interval_intersection(X.triangle(a), X.triangle(b));
      if (o.segment && distance((*o.segment)[0], (*o.segment)[1]) > 1e-9) ++expected;
    }
  CHECK(hits.segments.size() == expected);
  for (const auto& s : hits.segments) {
    for (FaceId f : {s.face_a, s.face_b}) {
      const auto tr = X.triangle(f);
      const Plane P = plane_of_triangle(tr[0], tr[1], tr[2], t);
      for (const Point3& p : {s.p0, s.p1}) {
        CHECK(std::abs(P.signed_distance(p)) <= 10 * t.eps_point);
        CHECK(point_in_triangle(p, tr[0], tr[1], tr[2], t));
      }
    }
  }
}

TEST_CASE("pair test is symmetric") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 2000; ++i) {
    const Triangle a{random_point(rng, 1), random_point(rng, 1), random_point(rng, 1)};
    const Triangle b{random_point(rng, 1), random_point(rng, 1), random_point(rng, 1)};
    if (triangle_area(a[0], a[1], a[2]) < 1e-3 || triangle_area(b[0], b[1], b[2]) < 1e-3) continue;
    const auto r1 = triangle_pair_intersection(a, b, {}, tol);
    const auto r2 = triangle_pair_intersection(b, a, {}, tol);
    REQUIRE(r1.kind == r2.kind);
    if (r1.kind == PairKind::Segment) CHECK(same_segment(r1.p0, r1.p1, r2.p0, r2.p1, 1e-9));
  }
}

TEST_CASE("segment decision agrees with the interval oracle") {
  std::mt19937_64 rng(23);
  int agreed = 0, segments = 0, compared = 0;
  for (int i = 0; i < 10000; ++i) {
    const Triangle a{random_point(rng, 1), random_point(rng, 1), random_point(rng, 1)};
    const Triangle b{random_point(rng, 1), random_point(rng, 1), random_point(rng, 1)};
    if (triangle_area(a[0], a[1], a[2]) < 1e-2 || triangle_area(b[0], b[1], b[2]) < 1e-2) continue;
    const auto o = oracle::interval_intersection(a, b);
    if (o.coplanar || o.clearance < 1e-6) continue;
    const bool oracle_segment = o.segment && distance((*o.segment)[0], (*o.segment)[1]) > 1e-6;
    const bool oracle_none = !o.segment;
    if (!oracle_segment && !oracle_none) continue;  // tolerance band
    ++compared;
    const auto r = triangle_pair_intersection(a, b, {}, tol);
    const bool ours = r.kind == PairKind::Segment;
    if (ours == oracle_segment) ++agreed;
    if (ours && oracle_segment) {
      ++segments;
      CHECK(same_segment(r.p0, r.p1, (*o.segment)[0], (*o.segment)[1], 1e-9));
    }
  }
  CHECK(compared > 5000);
  CHECK(segments > 200);
  CHECK(agreed == compared);
}

TEST_CASE("intersections commute with orthogonal maps") {
  const auto M = fixtures::great_icosahedron();
  const auto X = M.embed();
  const Tolerance t = M.tolerance();
  const Mat3 R = Mat3::rotation(normalized(Vec3{0.3, -0.2, 0.9}), 1.1);
  Mat3 S = R;  // a reflection composed with the rotation
  for (int c = 0; c < 3; ++c) S(0, c) = -S(0, c);
  const auto base = all_intersections(X, t);
  for (const Mat3& g : {R, S}) {
    const auto Y = fixtures::transformed(M, g).embed();
    const auto moved = all_intersections(Y, t);
    IntersectionSet mapped = base;
    for (auto& s : mapped.segments) {
      s.p0 = g * s.p0;
      s.p1 = g * s.p1;
    }
    CHECK(same_segments(mapped, moved, 10 * t.eps_point));
  }
}

TEST_CASE("parallel evaluation is deterministic") {
  const auto M = fixtures::great_icosahedron();
  const auto X = M.embed();
  const auto one = all_intersections(X, M.tolerance(), {1});
  const auto four = all_intersections(X, M.tolerance(), {4});
  REQUIRE(one.segments.size() == four.segments.size());
  for (std::size_t i = 0; i < one.segments.size(); ++i) {
    CHECK(one.segments[i].face_a == four.segments[i].face_a);
    CHECK(one.segments[i].face_b == four.segments[i].face_b);
    CHECK(one.segments[i].p0 == four.segments[i].p0);
    CHECK(one.segments[i].p1 == four.segments[i].p1);
  }
}

}  // TEST_SUITE
