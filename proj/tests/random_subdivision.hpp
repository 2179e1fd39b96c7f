#pragma once

// Random per-face constraint sets and the checks every triangulated disc
// must pass. Shared by the unit tests and the acceptance run.

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "selfix/retriangulate.hpp"

namespace testing {

struct SubdivisionInstance {
  selfix::Triangle face;
  std::vector<selfix::Constraint> constraints;
};

inline SubdivisionInstance random_instance(std::mt19937_64& rng) {
  using selfix::Point3;
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  SubdivisionInstance inst;
  // reasonably shaped face: all angles above 15 degrees
  for (;;) {
    for (auto& p : inst.face) p = Point3{U(rng), U(rng), U(rng)} * 3.0;
    double min_angle = M_PI;
    for (int i = 0; i < 3; ++i) {
      const auto d1 = inst.face[(i + 1) % 3] - inst.face[i];
      const auto d2 = inst.face[(i + 2) % 3] - inst.face[i];
      min_angle = std::min(min_angle, std::acos(selfix::dot(d1, d2) / (selfix::norm(d1) * selfix::norm(d2))));
    }
    if (min_angle > M_PI / 12) break;
  }
  const auto& f = inst.face;
  auto at = [&](double u, double v) { return f[0] + (f[1] - f[0]) * u + (f[2] - f[0]) * v; };
  std::uniform_real_distribution<double> T(0.05, 0.95);
  auto on_edge = [&](int e) {
    const double t = T(rng);
    const Point3& a = f[e];
    const Point3& b = f[(e + 1) % 3];
    return a + (b - a) * t;
  };
  auto interior = [&] {
    for (;;) {
      const double u = T(rng), v = T(rng);
      if (u + v < 0.95) return at(u, v);
    }
  };
  std::uniform_int_distribution<int> count(1, 6), kind(0, 2), edge(0, 2);
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    selfix::Constraint c;
    switch (kind(rng)) {
      case 0: {
        const int e0 = edge(rng);
        const int e1 = (e0 + 1 + edge(rng) % 2) % 3;
        c.p0 = on_edge(e0);
        c.p1 = on_edge(e1);
        break;
      }
      case 1:
        c.p0 = interior();
        c.p1 = interior();
        break;
      default:
        c.p0 = on_edge(edge(rng));
        c.p1 = interior();
        break;
    }
    c.other = static_cast<selfix::FaceId>(i + 1);
    inst.constraints.push_back(c);
  }
  return inst;
}

struct DiscCheck {
  bool ok = true;
  std::string failure;
  std::size_t triangles = 0;
};

// Runs the per-face pipeline step by step and checks the disc invariants.
inline DiscCheck check_disc(const SubdivisionInstance& inst, const selfix::Tolerance& tol) {
  using namespace selfix;
  DiscCheck out;
  auto fail = [&](const std::string& why) {
    if (out.ok) out.failure = why;
    out.ok = false;
  };
  PlanarSubdivision l = make_subdivision(inst.face, inst.constraints, tol);
  l = clean_data(std::move(l), tol);
  l = fix_planar_intersections(std::move(l), tol);
  l = triangulate_disc(std::move(l), tol);
  const std::size_t V = l.vertices.size();
  const std::size_t Eb = l.boundary_edge_count();
  const std::size_t Ei = l.edges.size() - Eb;
  if ((2 * Ei + Eb) % 3 != 0) fail("2E+E' not divisible by 3");
  const std::size_t F = (2 * Ei + Eb) / 3;
  if (static_cast<long>(V) - static_cast<long>(l.edges.size()) + static_cast<long>(F) != 1) {
    std::ostringstream os;
    os << "disc criterion: V=" << V << " E=" << l.edges.size() << " F=" << F;
    fail(os.str());
  }
  const std::vector<Triple> tris = extract_triangles(l);
  out.triangles = tris.size();
  if (tris.size() != F) fail("triangle count differs from (2E+E')/3");

  const double face_area = triangle_area(inst.face[0], inst.face[1], inst.face[2]);
  double total = 0.0;
  std::vector<std::array<Vec2, 3>> flat;
  for (const Triple& t : tris) {
    const double a = triangle_area(l.vertices[t[0]], l.vertices[t[1]], l.vertices[t[2]]);
    if (!(a > 0.0)) fail("triangle without area");
    total += a;
    flat.push_back({l.project(l.vertices[t[0]]), l.project(l.vertices[t[1]]), l.project(l.vertices[t[2]])});
  }
  if (std::abs(total - face_area) > 1e-6 * face_area) fail("area not conserved");
  const double overlap_tol = 1e-9 * std::sqrt(face_area);
  for (std::size_t i = 0; i < flat.size(); ++i)
    for (std::size_t j = i + 1; j < flat.size(); ++j)
      if (oracle::triangles_overlap_2d(flat[i], flat[j], overlap_tol)) fail("overlapping triangles");

  // interior edges border two triangles, boundary edges one
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> uses;
  for (const Triple& t : tris)
    for (int i = 0; i < 3; ++i) ++uses[std::minmax(t[i], t[(i + 1) % 3])];
  for (std::size_t e = 0; e < l.edges.size(); ++e) {
    const auto key = std::minmax(l.edges[e][0], l.edges[e][1]);
    const int want = l.boundary[e] ? 1 : 2;
    if (uses[key] != want) fail("edge incidence");
  }
  return out;
}

}  // namespace testing
