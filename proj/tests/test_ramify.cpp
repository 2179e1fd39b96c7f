#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "selfix/chambers.hpp"
#include "selfix/fixtures.hpp"
#include "selfix/intersect.hpp"
#include "selfix/ramify.hpp"
#include "support.hpp"

using namespace selfix;

namespace {

// Tetrahedral wedges around the z axis, edge (0,0,0)-(0,0,1). Each wedge
// spans the angles [from, to] (degrees) with unit apexes at height 0.5.
fixtures::Mesh wedges(const std::vector<std::pair<double, double>>& spans, bool mirror = false) {
  fixtures::Mesh m;
  m.coords = {{0, 0, 0}, {0, 0, 1}};
  auto apex = [&](double deg) {
    const double t = deg * M_PI / 180;
    const double y = std::abs(std::sin(t)) < 1e-15 ? 0.0 : std::sin(t);
    const double x = std::abs(std::cos(t)) < 1e-15 ? 0.0 : std::cos(t);
    return Point3{x, mirror ? -y : y, 0.5};
  };
  for (const auto& [from, to] : spans) {
    const VertexId a = static_cast<VertexId>(m.coords.size());
    m.coords.push_back(apex(from));
    m.coords.push_back(apex(to));
    m.faces.push_back({0, 1, a});
    m.faces.push_back({0, 1, a + 1});
    m.faces.push_back({0, a, a + 1});
    m.faces.push_back({1, a, a + 1});
  }
  return m;
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0)) * 180 / M_PI;
}

// Two cones over a regular hexagon meeting apex to apex at the origin, each
// closed by a fan over its base.
fixtures::Mesh hourglass() {
  fixtures::Mesh m;
  m.coords = {{0, 0, 0}};
  for (double h : {-1.0, 1.0}) {
    const VertexId centre = static_cast<VertexId>(m.coords.size());
    m.coords.push_back({0, 0, h});
    for (int k = 0; k < 6; ++k) m.coords.push_back({std::cos(M_PI / 3 * k), std::sin(M_PI / 3 * k), h});
    for (VertexId k = 0; k < 6; ++k) {
      const VertexId a = centre + 1 + k, b = centre + 1 + (k + 1) % 6;
      m.faces.push_back({0, a, b});
      m.faces.push_back({centre, a, b});
    }
  }
  return m;
}

// Every output vertex lies within `bound` of some input vertex.
double max_vertex_offset(const EmbeddedComplex& in, const EmbeddedComplex& out) {
  double worst = 0;
  for (const Point3& p : out.coords()) {
    double best = INFINITY;
    for (const Point3& q : in.coords()) best = std::min(best, distance(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_SUITE("ramify") {

TEST_CASE("classify_nonmanifold_edges examples") {
  const auto S = fixtures::icosahedron().embed();
  const auto none = classify_nonmanifold_edges(S.complex());
  CHECK(none.inner.empty());
  CHECK(none.outer.empty());

  const auto X = fixtures::chain_boxes().embed();
  const auto c = classify_nonmanifold_edges(X.complex());
  REQUIRE(c.inner.size() == 1);
  REQUIRE(c.outer.size() == 2);
  const EdgeKey mid = X.complex().edge(c.inner[0]);
  CHECK(std::min(X.point(mid[0]).x, X.point(mid[1]).x) == doctest::Approx(1.0));
  CHECK(std::max(X.point(mid[0]).x, X.point(mid[1]).x) == doctest::Approx(2.0));

  CHECK_THROWS_CODE(classify_nonmanifold_edges(fixtures::tetrahedra_sharing_edge().embed().complex()),
                    ErrorCode::IsolatedNonManifoldEdge);
  CHECK(classify_edges(fixtures::tetrahedra_sharing_edge().embed().complex()).isolated.size() == 1);
}

TEST_CASE("nonmanifold path of the chain fixture") {
  const auto X = fixtures::chain_boxes().embed();
  const auto paths = nonmanifold_paths(X);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].edges.size() == 3);
  CHECK(paths[0].vertices.size() == 4);
  CHECK_FALSE(paths[0].circle);
}

TEST_CASE("split_direction on a symmetric four-face fan") {
  const auto X = wedges({{0, 90}, {180, 270}}).embed();
  const EdgeId e = *X.complex().find_edge(0, 1);
  const Vec3 s = split_direction(X, e);
  // bisects the outer wedge between 270 and 360 degrees
  CHECK(distance(s, {0.5, -0.5, 0.5}) < 1e-12);
  CHECK(std::abs(std::atan2(s.y, s.x) * 180 / M_PI) == doctest::Approx(45.0));
}

TEST_CASE("split_direction mirrors with the fixture") {
  const auto X = wedges({{0, 90}, {180, 270}}).embed();
  const auto Y = wedges({{0, 90}, {180, 270}}, true).embed();
  const Vec3 s = split_direction(X, *X.complex().find_edge(0, 1));
  const Vec3 t = split_direction(Y, *Y.complex().find_edge(0, 1));
  CHECK(distance(t, {s.x, -s.y, s.z}) < 1e-12);
}

TEST_CASE("split_direction for a nearly flat fold") {
  const auto X = wedges({{5, 180}, {185, 360}}).embed();
  const EdgeId e = *X.complex().find_edge(0, 1);
  const Vec3 s = split_direction(X, e);
  // the two faces around a 5 degree outer wedge: s is within 2.5 degrees of
  // both apex directions
  double nearest = 180;
  for (VertexId v = 2; v < X.complex().vertex_count(); ++v)
    nearest = std::min(nearest, angle_between(s, X.point(v) - X.point(0)));
  CHECK(nearest <= 2.5 + 1e-9);
  CHECK(nearest > 0.0);
}

TEST_CASE("split_direction at either endpoint") {
  const auto X = wedges({{0, 90}, {180, 270}}).embed();
  const EdgeId e = *X.complex().find_edge(0, 1);
  const Vec3 at0 = split_direction(X, e, 0);
  const Vec3 at1 = split_direction(X, e, 1);
  CHECK(distance(at0 - at1, {0, 0, 1}) < 1e-12);
  CHECK_THROWS_CODE(split_direction(X, e, 2), ErrorCode::InvalidArgument);
}

TEST_CASE("split_nonmanifold_paths examples") {
  const auto S = fixtures::icosahedron();
  const auto same = split_nonmanifold_paths(S.embed(), 1e-3, S.tolerance());
  CHECK(same.complex.complex().faces() == S.embed().complex().faces());
  CHECK(same.plan.added_vertices == 0);

  const auto M = fixtures::chain_boxes();
  const auto X = M.embed();
  const double eps = 1e-3;
  const auto r = split_nonmanifold_paths(X, eps, M.tolerance());
  const auto& K = r.complex.complex();
  CHECK(nonmanifold_edges(K).empty());
  CHECK(K.face_count() == X.complex().face_count());
  // the two interior path vertices are split, every path edge is doubled
  CHECK(r.plan.added_vertices == 2);
  CHECK(r.plan.duplicated_edges == 3);
  CHECK(K.vertex_count() == X.complex().vertex_count() + r.plan.added_vertices);
  CHECK(K.edge_count() == X.complex().edge_count() + r.plan.duplicated_edges);
  for (const VertexSplit& vs : r.plan.vertices) {
    for (const Vec3& shift : vs.shifts) CHECK(norm(shift) <= eps * 2.0);
  }
  CHECK(all_intersections(r.complex, M.tolerance()).empty());
}

TEST_CASE("split_nonmanifold_vertices examples") {
  const auto S = fixtures::octahedron();
  const auto same = split_nonmanifold_vertices(S.embed(), 1e-3, S.tolerance());
  CHECK(same.complex.complex().faces() == S.embed().complex().faces());

  const auto T = fixtures::tetrahedra_sharing_vertex();
  const auto r = split_nonmanifold_vertices(T.embed(), 1e-3, T.tolerance());
  const auto& K = r.complex.complex();
  CHECK(K.vertex_count() == 8);
  CHECK(K.euler_characteristic() == 4);
  CHECK(oracle::components(K.faces()) == 2);
  CHECK(oracle::is_simplicial_surface(K.faces()));

  CHECK_THROWS_CODE(split_nonmanifold_vertices(fixtures::chain_boxes().embed(), 1e-3, Tolerance{}),
                    ErrorCode::PreconditionViolated);
}

TEST_CASE("umbrella direction of a symmetric cone points along the axis") {
  const auto H = hourglass();
  const double eps = 1e-3;
  const auto r = split_nonmanifold_vertices(H.embed(), eps, H.tolerance());
  REQUIRE(r.plan.vertices.size() == 1);
  const VertexSplit& vs = r.plan.vertices[0];
  REQUIRE(vs.shifts.size() == 2);
  for (const Vec3& s : vs.shifts) {
    CHECK(std::abs(s.x) < 1e-15);
    CHECK(std::abs(s.y) < 1e-15);
    CHECK(std::abs(std::abs(s.z) - eps) < 1e-15);
  }
  CHECK(vs.shifts[0].z * vs.shifts[1].z < 0);
  CHECK(oracle::is_simplicial_surface(r.complex.complex().faces()));
}

TEST_CASE("ramify repairs the fixtures to surfaces") {
  for (const char* name : {"chain-boxes", "tetrahedra-sharing-vertex", "cube-with-diaphragm", "hourglass"}) {
    CAPTURE(name);
    const auto M = std::string(name) == "hourglass" ? hourglass() : fixtures::by_name(name);
    const auto X = outer_hull(M.embed(), M.tolerance()).complex;
    const auto R = ramify(X, M.tolerance());
    const auto& K = R.surface.complex();
    CHECK(oracle::is_simplicial_surface(K.faces()));
    CHECK(is_surface(K));
    CHECK(K.face_count() == X.complex().face_count());
    CHECK(all_intersections(R.surface, M.tolerance()).empty());
    CHECK(R.report.max_displacement <= R.report.displacement_bound + 1e-15);
    CHECK(max_vertex_offset(X, R.surface) <= R.report.displacement_bound + 1e-15);
  }
}

TEST_CASE("ramify on the chain: counts per pass") {
  const auto M = fixtures::chain_boxes();
  const auto X = M.embed();
  const auto R = ramify(X, M.tolerance());
  const auto& K = R.surface.complex();
  CHECK(R.report.inner_edges == 1);
  CHECK(R.report.outer_edges == 2);
  CHECK(K.vertex_count() == X.complex().vertex_count() + 4);
  CHECK(K.euler_characteristic() == 4);
  CHECK(oracle::components(K.faces()) == 2);
  const std::string text = format_report(R.report);
  CHECK(text.find("epsilon") != std::string::npos);
}

TEST_CASE("ramify leaves a surface untouched") {
  const auto M = fixtures::icosahedron();
  const auto X = M.embed();
  const auto R = ramify(X, M.tolerance());
  CHECK(R.surface.complex().faces() == X.complex().faces());
  CHECK(R.surface.coords() == X.coords());
  CHECK(R.report.max_displacement == 0.0);
}

TEST_CASE("ramify rejects isolated non-manifold edges") {
  const auto M = fixtures::tetrahedra_sharing_edge();
  CHECK_THROWS_CODE(ramify(M.embed(), M.tolerance()), ErrorCode::IsolatedNonManifoldEdge);
}

}  // TEST_SUITE
