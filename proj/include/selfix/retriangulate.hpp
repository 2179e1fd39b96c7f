#pragma once

// Per-face planar repair: subdivide a face along its intersection
// constraints, triangulate the resulting disc, and glue the faces back into
// one complex.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "selfix/complex.hpp"
#include "selfix/intersect.hpp"

namespace selfix {

using PlanarEdge = std::array<std::uint32_t, 2>;

// The structure `l` of one face: coplanar 3D vertices (the three corners
// first) and the edges between them. Planar predicates use a 2D frame with
// origin at corner 0, x along corner 1 - corner 0 and y = normal x x.
struct PlanarSubdivision {
  std::vector<Point3> vertices;
  std::vector<PlanarEdge> edges;
  std::vector<bool> boundary;  // per edge
  Point3 origin;
  Vec3 ex;
  Vec3 ey;
  Vec3 normal;

  Vec2 project(const Point3& p) const {
    const Vec3 d = p - origin;
    return {dot(d, ex), dot(d, ey)};
  }
  std::size_t boundary_edge_count() const;
};

// Corners plus one edge per constraint, not yet cleaned.
PlanarSubdivision make_subdivision(const Triangle& face, std::span<const Constraint> constraints,
                                   const Tolerance& tol);

// Merges vertices within eps_point (first occurrence wins), remaps edges,
// drops zero-length and duplicate edges. A merged duplicate of a boundary
// edge stays boundary.
PlanarSubdivision clean_data(PlanarSubdivision l, const Tolerance& tol);

// Splits edges at vertices lying on them and at proper crossings until no
// vertex lies inside an edge and no two edges cross.
PlanarSubdivision fix_planar_intersections(PlanarSubdivision l, const Tolerance& tol);

// (3V - 2E' - 3) - (E_total - E'). Throws NegativeDeficit below zero.
std::size_t required_inner_edges(std::size_t V, std::size_t E_boundary, std::size_t E_total);

// Inserts the shortest admissible candidate edges until the disc criterion
// holds. Throws Exhausted when candidates run out first.
PlanarSubdivision triangulate_disc(PlanarSubdivision l, const Tolerance& tol);

// Triangles of a triangulated disc as vertex-index triples, counter-clockwise
// about the face normal. Throws NonTriangularCell.
std::vector<Triple> extract_triangles(const PlanarSubdivision& l);

// The whole per-face pipeline; a face without constraints returns itself.
std::vector<Triangle> retriangulate_face(const Triangle& face, std::span<const Constraint> constraints,
                                         const Tolerance& tol);

std::vector<std::vector<Triangle>> retriangulate_faces(const EmbeddedComplex& X,
                                                       const IntersectionSet& hits,
                                                       const Tolerance& tol, unsigned jobs = 1);

struct RebuildOptions {
  bool strict_recheck = true;
  unsigned jobs = 1;
};

// Welds all triangles into one complex. Original vertices keep their ids.
// With strict_recheck the result must be free of intersections, otherwise
// StillIntersecting lists the offending pairs.
EmbeddedComplex rebuild_complex(const EmbeddedComplex& X,
                                const std::vector<std::vector<Triangle>>& per_face,
                                const Tolerance& tol, const RebuildOptions& opts = {});

}  // namespace selfix
