#include "selfix/fixtures.hpp"

#include <algorithm>
#include <numbers>
#include <random>

#include "selfix/error.hpp"

namespace selfix::fixtures {

namespace {

constexpr double phi = std::numbers::phi;

void add_quad(std::vector<Triple>& faces, VertexId a, VertexId b, VertexId c, VertexId d) {
  faces.push_back({a, b, c});
  faces.push_back({a, c, d});
}

// Triples of vertices pairwise at the given distance.
std::vector<Triple> triangles_at_distance(const std::vector<Point3>& pts, double dist) {
  std::vector<Triple> out;
  const auto n = static_cast<VertexId>(pts.size());
  auto close = [&](VertexId a, VertexId b) { return std::abs(distance(pts[a], pts[b]) - dist) < 1e-9; };
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b)
      for (VertexId c = b + 1; c < n; ++c)
        if (close(a, b) && close(b, c) && close(a, c)) out.push_back({a, b, c});
  return out;
}

std::vector<Point3> icosahedron_points() {
  std::vector<Point3> pts;
  for (double s1 : {-1.0, 1.0}) {
    for (double s2 : {-phi, phi}) {
      pts.push_back({0, s1, s2});
      pts.push_back({s1, s2, 0});
      pts.push_back({s2, 0, s1});
    }
  }
  return pts;
}

Mesh merged(const Mesh& a, const Mesh& b) {
  Mesh out = a;
  const auto off = static_cast<VertexId>(a.coords.size());
  out.coords.insert(out.coords.end(), b.coords.begin(), b.coords.end());
  for (Triple t : b.faces) out.faces.push_back({t[0] + off, t[1] + off, t[2] + off});
  return out;
}

Mesh regular_tetrahedron() {
  return {{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
}

}  // namespace

Tolerance Mesh::tolerance() const { return Tolerance::for_extent(bounding_box(coords).diagonal()); }

EmbeddedComplex Mesh::embed() const {
  return EmbeddedComplex(SimplicialComplex::build(faces), coords, tolerance());
}

Mesh tetrahedron() {
  return {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
}

Mesh octahedron() {
  Mesh m;
  m.coords = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (VertexId x : {0u, 1u})
    for (VertexId y : {2u, 3u})
      for (VertexId z : {4u, 5u}) m.faces.push_back({x, y, z});
  return m;
}

Mesh cube(const Point3& lo, double side) {
  Mesh m;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) m.coords.push_back(lo + Vec3{double(i), double(j), double(k)} * side);
  add_quad(m.faces, 0, 2, 6, 4);
  add_quad(m.faces, 1, 5, 7, 3);
  add_quad(m.faces, 0, 4, 5, 1);
  add_quad(m.faces, 2, 3, 7, 6);
  add_quad(m.faces, 0, 1, 3, 2);
  add_quad(m.faces, 4, 6, 7, 5);
  return m;
}

Mesh icosahedron() {
  Mesh m;
  m.coords = icosahedron_points();
  m.faces = triangles_at_distance(m.coords, 2.0);
  return m;
}

Mesh great_icosahedron() {
  Mesh m;
  m.coords = icosahedron_points();
  m.faces = triangles_at_distance(m.coords, 2.0 * phi);
  return m;
}

Mesh cube_with_diaphragm() {
  Mesh m;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) m.coords.push_back({double(i), double(j), double(k)});
  add_quad(m.faces, 0, 1, 3, 2);
  add_quad(m.faces, 4, 5, 7, 6);
  add_quad(m.faces, 8, 10, 11, 9);
  for (VertexId b : {0u, 4u}) {
    add_quad(m.faces, b, b + 1, b + 5, b + 4);
    add_quad(m.faces, b + 1, b + 3, b + 7, b + 5);
    add_quad(m.faces, b + 3, b + 2, b + 6, b + 7);
    add_quad(m.faces, b + 2, b, b + 4, b + 6);
  }
  return m;
}

Mesh nested_cubes() { return merged(cube({0, 0, 0}, 3.0), cube({1, 1, 1}, 1.0)); }

Mesh interlocked_tetrahedra() {
  const Mesh a = regular_tetrahedron();
  const Mesh b = translated(transformed(regular_tetrahedron(), Mat3::rotation({1, 2, 3}, 0.7)),
                            {0.6, 0.25, -0.15});
  return merged(a, b);
}

Mesh star_tetrahedron() {
  const Mesh a = regular_tetrahedron();
  Mat3 minus;
  minus.m = {-1, 0, 0, 0, -1, 0, 0, 0, -1};
  return merged(a, transformed(a, minus));
}

Mesh tetrahedra_sharing_vertex() {
  return {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}},
          {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {0, 4, 5}, {0, 4, 6}, {0, 5, 6}, {4, 5, 6}}};
}

Mesh tetrahedra_sharing_edge() {
  return {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}},
          {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {0, 3, 4}, {0, 3, 5}, {0, 4, 5}, {3, 4, 5}}};
}

Mesh chain_boxes() {
  Mesh m;
  constexpr int stations = 4;
  for (int s = 0; s < stations; ++s) m.coords.push_back({double(s), 0, 0});
  const std::array<std::array<double, 2>, 4> sections[2] = {
      {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}},
      {{{0, 0}, {-1, 0}, {-1, -1}, {0, -1}}},
  };
  for (const auto& corners : sections) {
    std::array<std::array<VertexId, 4>, stations> id{};
    for (int s = 0; s < stations; ++s) {
      id[s][0] = static_cast<VertexId>(s);
      for (int c = 1; c < 4; ++c) {
        id[s][c] = static_cast<VertexId>(m.coords.size());
        m.coords.push_back({double(s), corners[c][0], corners[c][1]});
      }
    }
    for (int s = 0; s + 1 < stations; ++s)
      for (int c = 0; c < 4; ++c)
        add_quad(m.faces, id[s][c], id[s + 1][c], id[s + 1][(c + 1) % 4], id[s][(c + 1) % 4]);
    add_quad(m.faces, id[0][0], id[0][3], id[0][2], id[0][1]);
    add_quad(m.faces, id[stations - 1][0], id[stations - 1][1], id[stations - 1][2], id[stations - 1][3]);
  }
  return m;
}

Mesh cyclic_surface(std::uint32_t n, double twist, bool folded) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "cyclic surface needs n >= 3");
  Mesh m;
  m.coords = {{0, 0, 1.5}, {0, 0, -1.5}};
  const double step = 2.0 * std::numbers::pi / n;
  auto ring = [&](double radius, double z, double offset) {
    for (std::uint32_t k = 0; k < n; ++k) {
      const double a = step * (k + offset);
      m.coords.push_back({radius * std::cos(a), radius * std::sin(a), z});
    }
  };
  ring(1.0, 0.8, 0.0);
  if (folded) {
    ring(0.5, 2.0, twist);
  } else {
    ring(1.4, 0.0, twist);
  }
  ring(1.0, -0.8, 0.0);
  const VertexId N = 0, S = 1;
  auto A = [&](std::uint32_t k) { return 2 + k % n; };
  auto B = [&](std::uint32_t k) { return 2 + n + k % n; };
  auto C = [&](std::uint32_t k) { return 2 + 2 * n + k % n; };
  for (std::uint32_t k = 0; k < n; ++k) {
    m.faces.push_back({N, A(k), A(k + 1)});
    m.faces.push_back({A(k), B(k), A(k + 1)});
    m.faces.push_back({A(k + 1), B(k), B(k + 1)});
    m.faces.push_back({B(k), C(k), B(k + 1)});
    m.faces.push_back({B(k + 1), C(k), C(k + 1)});
    m.faces.push_back({C(k), S, C(k + 1)});
  }
  return m;
}

Mesh random_convex(std::uint32_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Mesh m;
  while (m.coords.size() < n) {
    const Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
    if (norm(v) > 1e-3) m.coords.push_back(normalized(v));
  }
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b)
      for (VertexId c = b + 1; c < n; ++c) {
        const Vec3 nrm = cross(m.coords[b] - m.coords[a], m.coords[c] - m.coords[a]);
        int pos = 0, neg = 0;
        for (VertexId d = 0; d < n; ++d) {
          if (d == a || d == b || d == c) continue;
          const double s = dot(nrm, m.coords[d] - m.coords[a]);
          if (s > 1e-12) ++pos;
          if (s < -1e-12) ++neg;
        }
        if (pos == 0 || neg == 0) m.faces.push_back({a, b, c});
      }
  return m;
}

Mesh translated(Mesh m, const Vec3& d) {
  for (Point3& p : m.coords) p += d;
  return m;
}

Mesh transformed(Mesh m, const Mat3& M) {
  for (Point3& p : m.coords) p = M * p;
  return m;
}

std::vector<Mat3> cyclic_group(std::uint32_t n, const Vec3& axis) {
  std::vector<Mat3> out;
  for (std::uint32_t k = 0; k < n; ++k) {
    out.push_back(k == 0 ? Mat3::identity() : Mat3::rotation(axis, 2.0 * std::numbers::pi * k / n));
  }
  return out;
}

std::vector<Mat3> dihedral_group(std::uint32_t n, const Vec3& axis, const Vec3& perp) {
  std::vector<Mat3> out = cyclic_group(n, axis);
  for (std::uint32_t k = 0; k < n; ++k) {
    const Vec3 flip_axis = Mat3::rotation(axis, std::numbers::pi * k / n) * perp;
    out.push_back(Mat3::rotation(flip_axis, std::numbers::pi));
  }
  return out;
}

std::vector<Mat3> generate_group(const std::vector<Mat3>& generators, std::size_t limit) {
  std::vector<Mat3> out{Mat3::identity()};
  auto known = [&](const Mat3& m) {
    return std::any_of(out.begin(), out.end(), [&](const Mat3& o) { return o.max_abs_diff(m) < 1e-9; });
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const Mat3& g : generators) {
      const Mat3 p = g * out[i];
      if (!known(p)) {
        if (out.size() >= limit) throw Error(ErrorCode::NotAGroup, "closure exceeds the size limit");
        out.push_back(p);
      }
    }
  }
  return out;
}

std::vector<Mat3> icosahedral_group() {
  Mat3 cyc;
  cyc.m = {0, 1, 0, 0, 0, 1, 1, 0, 0};
  Mat3 flip;
  flip.m = {-1, 0, 0, 0, 1, 0, 0, 0, 1};
  const Mat3 five = Mat3::rotation({0, 1, phi}, 2.0 * std::numbers::pi / 5.0);
  return generate_group({cyc, flip, five});
}

Mesh by_name(const std::string& name) {
  if (name == "tetrahedron") return tetrahedron();
  if (name == "octahedron") return octahedron();
  if (name == "cube") return cube();
  if (name == "icosahedron") return icosahedron();
  if (name == "great-icosahedron") return great_icosahedron();
  if (name == "cube-with-diaphragm") return cube_with_diaphragm();
  if (name == "nested-cubes") return nested_cubes();
  if (name == "interlocked-tetrahedra") return interlocked_tetrahedra();
  if (name == "star-tetrahedron") return star_tetrahedron();
  if (name == "tetrahedra-sharing-vertex") return tetrahedra_sharing_vertex();
  if (name == "tetrahedra-sharing-edge") return tetrahedra_sharing_edge();
  if (name == "chain-boxes") return chain_boxes();
  if (name == "c23") return cyclic_surface(23, 0.5, true);
  if (name == "c23-smooth") return cyclic_surface(23, 0.0, false);
  throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + name + "'");
}

std::vector<std::string> names() {
  return {"tetrahedron",         "octahedron",       "cube",
          "icosahedron",         "great-icosahedron", "cube-with-diaphragm",
          "nested-cubes",        "interlocked-tetrahedra", "star-tetrahedron",
          "tetrahedra-sharing-vertex", "tetrahedra-sharing-edge", "chain-boxes",
          "c23",                 "c23-smooth"};
}

}  // namespace selfix::fixtures
