#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "random_subdivision.hpp"
#include "selfix/fixtures.hpp"
#include "selfix/intersect.hpp"
#include "selfix/retriangulate.hpp"
#include "support.hpp"

using namespace selfix;

namespace {

const Tolerance tol{};
const Triangle face{Point3{0, 0, 0}, Point3{4, 0, 0}, Point3{0, 4, 0}};

PlanarSubdivision flat(std::vector<Point3> vertices, std::vector<PlanarEdge> edges, std::vector<bool> boundary) {
  PlanarSubdivision l;
  l.origin = {0, 0, 0};
  l.ex = {1, 0, 0};
  l.ey = {0, 1, 0};
  l.normal = {0, 0, 1};
  l.vertices = std::move(vertices);
  l.edges = std::move(edges);
  l.boundary = std::move(boundary);
  return l;
}

bool has_edge(const PlanarSubdivision& l, std::uint32_t a, std::uint32_t b) {
  for (const auto& e : l.edges)
    if ((e[0] == a && e[1] == b) || (e[0] == b && e[1] == a)) return true;
  return false;
}

}  // namespace

TEST_SUITE("retriangulate") {

TEST_CASE("clean_data examples") {
  auto l = flat({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1 + 1e-12, 0, 0}}, {{0, 1}, {1, 2}, {2, 0}, {0, 3}},
                {true, true, true, false});
  auto c = clean_data(l, tol);
  CHECK(c.vertices.size() == 3);
  CHECK(c.edges.size() == 3);
  CHECK(c.boundary_edge_count() == 3);  // the merged copy of a boundary edge stays boundary

  auto twice = flat({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1}, {1, 2}, {2, 0}, {1, 0}}, {true, true, true, false});
  CHECK(clean_data(twice, tol).edges.size() == 3);

  auto once = clean_data(make_subdivision(face, std::vector<Constraint>{{{1, 1, 0}, {2, 1, 0}, 1, false}}, tol), tol);
  auto again = clean_data(once, tol);
  CHECK(again.vertices == once.vertices);
  CHECK(again.edges == once.edges);
}

TEST_CASE("fix_planar_intersections examples") {
  // one segment from edge (0,1) to edge (2,0)
  const std::vector<Constraint> chord{{{1, 0, 0}, {0, 1, 0}, 1, false}};
  auto l = fix_planar_intersections(clean_data(make_subdivision(face, chord, tol), tol), tol);
  CHECK(l.vertices.size() == 5);
  CHECK(l.edges.size() == 6);
  CHECK(l.boundary_edge_count() == 5);

  // two interior segments crossing in an X
  const std::vector<Constraint> x{{{0.5, 0.5, 0}, {1.5, 1.5, 0}, 1, false}, {{0.5, 1.5, 0}, {1.5, 0.5, 0}, 2, false}};
  auto m = fix_planar_intersections(clean_data(make_subdivision(face, x, tol), tol), tol);
  CHECK(m.vertices.size() == 3 + 4 + 1);
  CHECK(m.edges.size() == 3 + 4);
  CHECK(m.vertices.back() == Point3{1, 1, 0});

  auto bare = clean_data(make_subdivision(face, {}, tol), tol);
  auto fixed = fix_planar_intersections(bare, tol);
  CHECK(fixed.vertices == bare.vertices);
  CHECK(fixed.edges == bare.edges);
}

TEST_CASE("required_inner_edges examples") {
  CHECK(required_inner_edges(3, 3, 3) == 0);
  CHECK(required_inner_edges(4, 3, 3) == 3);
  CHECK(required_inner_edges(4, 4, 4) == 1);
  CHECK_THROWS_CODE(required_inner_edges(3, 3, 5), ErrorCode::NegativeDeficit);
}

TEST_CASE("triangulate_disc examples") {
  // quadrilateral: diagonal 0-2 (sqrt 10) is shorter than 1-3 (sqrt 13)
  auto quad = flat({{0, 0, 0}, {3, 0, 0}, {3, 1, 0}, {0, 2, 0}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
                   {true, true, true, true});
  auto q = triangulate_disc(quad, tol);
  CHECK(q.edges.size() == 5);
  CHECK(has_edge(q, 0, 2));
  CHECK_FALSE(has_edge(q, 1, 3));
  CHECK(extract_triangles(q).size() == 2);

  // non-convex L-shaped disc: no edge may leave the polygon
  auto ell = flat({{0, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1, 1, 0}, {1, 2, 0}, {0, 2, 0}},
                  {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}, std::vector<bool>(6, true));
  auto L = triangulate_disc(ell, tol);
  CHECK_FALSE(has_edge(L, 2, 4));
  CHECK(extract_triangles(L).size() == 4);

  // triangle plus centroid: three spokes
  auto cone = flat({{0, 0, 0}, {3, 0, 0}, {0, 3, 0}, {1, 1, 0}}, {{0, 1}, {1, 2}, {2, 0}}, {true, true, true});
  auto c = triangulate_disc(cone, tol);
  CHECK(c.edges.size() == 6);
  for (std::uint32_t v = 0; v < 3; ++v) CHECK(has_edge(c, v, 3));
  const auto tris = extract_triangles(c);
  CHECK(tris.size() == 3);
  double area = 0;
  for (const Triple& t : tris) area += triangle_area(c.vertices[t[0]], c.vertices[t[1]], c.vertices[t[2]]);
  CHECK(area == doctest::Approx(4.5));
}

TEST_CASE("Star of David face: F = (2E+E')/3, positive areas") {
  Triangle big{Point3{-4, -3, 0}, Point3{4, -3, 0}, Point3{0, 5, 0}};
  std::vector<Constraint> star;
  Point3 up[3], down[3];
  for (int i = 0; i < 3; ++i) {
    const double t = 2 * M_PI * i / 3 + M_PI / 2;
    up[i] = {std::cos(t), std::sin(t), 0};
    down[i] = {-std::cos(t), -std::sin(t), 0};
  }
  for (int i = 0; i < 3; ++i) {
    star.push_back({up[i], up[(i + 1) % 3], 1, true});
    star.push_back({down[i], down[(i + 1) % 3], 2, true});
  }
  testing::SubdivisionInstance inst{big, star};
  const auto check = testing::check_disc(inst, tol);
  CHECK_MESSAGE(check.ok, check.failure);
  // independent count: 3 corners + 12 star points, all edges of the star
  // graph plus the doubled-disc Euler relation give F = 2V - E' - 2
  CHECK(check.triangles == 2 * 15 - 3 - 2);
}

TEST_CASE("extract_triangles examples") {
  auto bare = clean_data(make_subdivision(face, {}, tol), tol);
  const auto t = extract_triangles(bare);
  REQUIRE(t.size() == 1);
  CHECK(sorted_triple(t[0]) == Triple{0, 1, 2});
  auto open = flat({{0, 0, 0}, {3, 0, 0}, {3, 1, 0}, {0, 2, 0}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
                   {true, true, true, true});
  CHECK_THROWS_CODE(extract_triangles(open), ErrorCode::NonTriangularCell);
}

TEST_CASE("random subdivisions satisfy the disc invariants") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 100; ++i) {
    const auto inst = testing::random_instance(rng);
    const auto check = testing::check_disc(inst, tol);
    CHECK_MESSAGE(check.ok, "instance " << i << ": " << check.failure);
  }
}

TEST_CASE("doubling a disc across its boundary gives a sphere") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto inst = testing::random_instance(rng);
    auto l = triangulate_disc(fix_planar_intersections(clean_data(make_subdivision(inst.face, inst.constraints, tol), tol), tol), tol);
    const long V = static_cast<long>(l.vertices.size());
    const long Eb = static_cast<long>(l.boundary_edge_count());
    const long Ei = static_cast<long>(l.edges.size()) - Eb;
    const long F = static_cast<long>(extract_triangles(l).size());
    // two copies glued along the boundary cycle (Eb vertices, Eb edges)
    CHECK((2 * V - Eb) - (2 * Ei + Eb) + 2 * F == 2);
  }
}

TEST_CASE("rebuild_complex examples") {
  const auto I = fixtures::icosahedron().embed();
  std::vector<std::vector<Triangle>> same;
  for (FaceId f = 0; f < I.complex().face_count(); ++f) same.push_back({I.triangle(f)});
  const auto R = rebuild_complex(I, same, Tolerance{});
  CHECK(R.complex().faces() == I.complex().faces());
  CHECK(R.coords() == I.coords());

  const auto M = fixtures::interlocked_tetrahedra();
  const auto X = M.embed();
  const Tolerance t = M.tolerance();
  const auto hits = all_intersections(X, t);
  const auto pieces = retriangulate_faces(X, hits, t);
  const auto Y = rebuild_complex(X, pieces, t);
  CHECK(all_intersections(Y, t).empty());
  for (FaceId f = 0; f < X.complex().face_count(); ++f) {
    const auto tri = X.triangle(f);
    double sum = 0;
    for (const auto& p : pieces[f]) sum += triangle_area(p[0], p[1], p[2]);
    CHECK(sum == doctest::Approx(triangle_area(tri[0], tri[1], tri[2])).epsilon(1e-9));
  }
  double before = 0, after = 0;
  for (FaceId f = 0; f < X.complex().face_count(); ++f) {
    const auto tri = X.triangle(f);
    before += triangle_area(tri[0], tri[1], tri[2]);
  }
  for (FaceId f = 0; f < Y.complex().face_count(); ++f) {
    const auto tri = Y.triangle(f);
    after += triangle_area(tri[0], tri[1], tri[2]);
  }
  CHECK(after == doctest::Approx(before).epsilon(1e-9));
}

}  // TEST_SUITE
