#pragma once

// Start configuration for the outer hull and chamber extraction by upward
// continuation around edge fans.

#include <cstdint>
#include <vector>

#include "selfix/complex.hpp"

namespace selfix {

// Positive is the side the right-hand normal of the sorted triple points to.
enum class Side : std::uint8_t { Positive = 0, Negative = 1 };

inline Side opposite(Side s) { return s == Side::Positive ? Side::Negative : Side::Positive; }

struct FaceSide {
  FaceId face = 0;
  Side side = Side::Positive;

  std::uint32_t index() const { return 2 * face + static_cast<std::uint32_t>(side); }
  static FaceSide from_index(std::uint32_t i) { return {i / 2, static_cast<Side>(i % 2)}; }
  bool operator==(const FaceSide&) const = default;
};

struct FanEntry {
  FaceId face = 0;
  double angle = 0.0;      // in [0, 2 pi), counter-clockwise about the axis
  bool positive_ccw = false;  // the Positive side faces increasing angle
};

// Faces around an edge, ordered by angle about the axis from the lower to
// the higher vertex id. Angle 0 is the lowest face id.
struct EdgeFan {
  EdgeId edge = 0;
  std::vector<FanEntry> entries;

  std::size_t position(FaceId f) const;
};

EdgeFan edge_fan(const EmbeddedComplex& X, EdgeId e);
std::vector<EdgeFan> all_edge_fans(const EmbeddedComplex& X);

// The face and side reached by rotating from `from`'s given side around the
// edge, in the direction that side faces.
FaceSide upward_continuation(const EdgeFan& fan, FaceSide from);

struct StartPair {
  FaceId face = 0;
  Vec3 normal;  // unit, outward
  Side side = Side::Positive;
  VertexId vertex = 0;
  EdgeId edge = 0;
  bool rotated = false;  // the max-x tie was broken by a rotation
};

// Max-x vertex, the incident edge closest to perpendicular to x, the face on
// that edge with the largest |n_x|, normal negated to n_x >= 0. Ties on the
// vertex are broken by a seeded random rotation of a coordinate copy; ties on
// the edge or face by the smallest id. `faces` restricts the search (empty =
// all faces).
StartPair initial_face(const EmbeddedComplex& X, std::uint64_t seed = 1,
                       const std::vector<FaceId>& faces = {});

// Breadth-first walk over face sides by upward continuation. The result is
// sorted by FaceSide::index(). Throws OpenBoundary on an edge with fewer
// than two faces.
std::vector<FaceSide> extract_chamber(const EmbeddedComplex& X, const std::vector<EdgeFan>& fans,
                                      FaceSide start);
std::vector<FaceSide> extract_chamber(const EmbeddedComplex& X, FaceSide start);

}  // namespace selfix
