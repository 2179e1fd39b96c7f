#pragma once

// Deterministic test and demo geometry.

#include <cstdint>
#include <string>
#include <vector>

#include "selfix/complex.hpp"

namespace selfix::fixtures {

struct Mesh {
  std::vector<Point3> coords;
  std::vector<Triple> faces;

  EmbeddedComplex embed() const;
  Tolerance tolerance() const;
};

Mesh tetrahedron();  // (0,0,0),(1,0,0),(0,1,0),(0,0,1)
Mesh octahedron();
Mesh cube(const Point3& lo = {0, 0, 0}, double side = 1.0);
// Vertices (0,+-1,+-phi) and cyclic permutations, edge length 2.
Mesh icosahedron();
// Same vertices, faces spanned by vertices at distance 2 phi.
Mesh great_icosahedron();
// Two unit boxes stacked in z sharing the wall z = 1.
Mesh cube_with_diaphragm();
// Cube [0,3]^3 with the disjoint cube [1,2]^3 inside.
Mesh nested_cubes();
// Two regular tetrahedra pierced through each other in general position.
Mesh interlocked_tetrahedra();
// The compound of the two tetrahedra inscribed in the cube [-1,1]^3.
Mesh star_tetrahedron();
Mesh tetrahedra_sharing_vertex();
Mesh tetrahedra_sharing_edge();
// Two boxes of three unit sections each, glued along the line y = z = 0,
// 0 <= x <= 3: three non-manifold edges in a chain.
Mesh chain_boxes();
// Sphere-like surface with cyclic symmetry of order n about z: poles plus
// three rings, 6 faces per wedge. `twist` rotates the middle ring by that
// many wedges. A folded surface lifts the middle ring above the north pole,
// so the lower band cuts through the north cap.
Mesh cyclic_surface(std::uint32_t n, double twist, bool folded);
// Convex hull of n random points on the unit sphere (brute force).
Mesh random_convex(std::uint32_t n, std::uint64_t seed);

Mesh translated(Mesh m, const Vec3& d);
Mesh transformed(Mesh m, const Mat3& M);

// Rotations by 2 pi k / n about the axis, k = 0..n-1.
std::vector<Mat3> cyclic_group(std::uint32_t n, const Vec3& axis = {0, 0, 1});
// cyclic_group plus the n half-turns about axes perpendicular to `axis`
// (the first one along `perp`).
std::vector<Mat3> dihedral_group(std::uint32_t n, const Vec3& axis = {0, 0, 1},
                                 const Vec3& perp = {1, 0, 0});
// Full icosahedral group (order 120) of icosahedron().
std::vector<Mat3> icosahedral_group();
// Closure of the generators under multiplication, identity first.
std::vector<Mat3> generate_group(const std::vector<Mat3>& generators, std::size_t limit = 1024);

// Looks up a fixture by name ("great-icosahedron", "c23", ...).
Mesh by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace selfix::fixtures
