#pragma once

// Triangle-triangle intersection of embedded face pairs and the per-face
// collection of intersection constraints.

#include <array>
#include <cstdio>
#include <optional>
#include <span>
#include <vector>

#include "selfix/complex.hpp"
#include "selfix/core.hpp"

namespace selfix {

using Triangle = std::array<Point3, 3>;

struct IntersectionSegment {
  FaceId face_a = 0;
  FaceId face_b = 0;
  Point3 p0;
  Point3 p1;
};

enum class CoplanarKind { NoOverlap, CrossingEdges, Contained };

struct CoplanarResult {
  CoplanarKind kind = CoplanarKind::NoOverlap;
  // Points where an edge of one triangle properly crosses an edge of the other.
  std::vector<Point3> crossings;
  // Pieces of the other triangle's edges inside each triangle, excluding
  // pieces lying on the receiving triangle's own boundary.
  std::vector<std::array<Point3, 2>> inside_first;
  std::vector<std::array<Point3, 2>> inside_second;
};

enum class PairKind { None, Touch, Segment, Coplanar };

struct PairIntersection {
  PairKind kind = PairKind::None;
  Point3 p0;  // Touch point or segment start (lexicographically smaller)
  Point3 p1;
  CoplanarResult coplanar;
  // More than two distinct points survived deduplication; the farthest pair
  // was kept.
  bool tolerance_warning = false;
};

// `shared` holds the positions of the vertices the two faces have in common
// (Def. of intersection points excludes them).
PairIntersection triangle_pair_intersection(const Triangle& t1, const Triangle& t2,
                                            std::span<const Point3> shared, const Tolerance& tol);

// Both triangles must be coplanar within eps_point.
CoplanarResult coplanar_intersection(const Triangle& t1, const Triangle& t2, const Tolerance& tol);

// A piece of geometry a face must be retriangulated along.
struct Constraint {
  Point3 p0;
  Point3 p1;
  FaceId other = 0;
  bool coplanar = false;
};

struct IntersectionSet {
  // Transversal segments, one per face pair, in ascending pair order.
  std::vector<IntersectionSegment> segments;
  std::vector<std::vector<Constraint>> per_face;
  std::size_t pair_tests = 0;
  std::size_t touch_count = 0;
  std::size_t coplanar_pairs = 0;
  std::size_t warnings = 0;

  bool empty() const { return segments.empty() && coplanar_pairs == 0; }
  // Face pairs that produced a segment or a coplanar overlap.
  std::vector<std::array<FaceId, 2>> offending_pairs() const;
};

struct IntersectOptions {
  unsigned jobs = 1;
};

// Records every intersecting face pair under both faces.
IntersectionSet all_intersections(const EmbeddedComplex& X, const Tolerance& tol,
                                  const IntersectOptions& opts = {});

// Tests one face pair of X, handling shared vertices.
PairIntersection face_pair_intersection(const EmbeddedComplex& X, FaceId a, FaceId b,
                                        const Tolerance& tol);

// Adds the outcome of testing (a, b) to the set. Returns true if anything was
// recorded.
bool record_pair(IntersectionSet& out, FaceId a, FaceId b, const PairIntersection& r);

// One line per segment: "seg <fa> <fb> x0 y0 z0 x1 y1 z1".
void write_segments(std::FILE* out, const IntersectionSet& set);

}  // namespace selfix
