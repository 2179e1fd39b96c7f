#pragma once

// Chamber decomposition of an intersection-free closed complex, the outer
// hull, and the exploded view.

#include <cstdint>
#include <string>
#include <vector>

#include "selfix/complex.hpp"
#include "selfix/outerhull.hpp"

namespace selfix {

struct Chamber {
  std::uint32_t id = 0;
  bool bounded = true;
  std::vector<FaceSide> sides;        // sorted by index
  std::vector<std::uint32_t> shells;  // connected boundary components
  double volume = 0.0;                // enclosed volume; for the unbounded chamber, the hull volume
  long euler = 0;                     // V - E + F of the boundary, faces counted once
  Point3 centroid;                    // mean of the distinct boundary vertices
};

struct ChamberSet {
  std::vector<Chamber> chambers;      // id 0 is the unbounded chamber
  std::vector<std::uint32_t> label;   // chamber id per FaceSide::index()
  std::vector<std::uint32_t> shell;   // shell id per FaceSide::index()
  std::vector<double> shell_volume;   // signed, positive for the outer boundary of a bounded chamber
  StartPair start;

  std::size_t bounded_count() const { return chambers.empty() ? 0 : chambers.size() - 1; }
  std::uint32_t chamber_of(FaceSide fs) const { return label[fs.index()]; }
};

// Labels every face side. Nested components are placed by casting rays from
// their extreme vertex. Throws OpenBoundary, PreconditionViolated.
ChamberSet all_chambers(const EmbeddedComplex& X, std::uint64_t seed = 1);

// Chamber containing p (0 when p is outside everything).
std::uint32_t locate_point(const EmbeddedComplex& X, const ChamberSet& C, const Point3& p,
                           std::uint64_t seed = 1);

struct SurfaceMesh {
  std::vector<Point3> coords;
  std::vector<Triple> faces;  // oriented
};

// Boundary of a chamber, oriented with normals pointing away from it.
SurfaceMesh chamber_surface(const EmbeddedComplex& X, const ChamberSet& C, std::uint32_t id);

struct OuterHull {
  EmbeddedComplex complex;
  std::vector<Triple> oriented;   // outward, in hull vertex ids
  std::vector<FaceId> source;     // input face per hull face
};

// Faces with a side on the unbounded chamber.
OuterHull outer_hull(const EmbeddedComplex& X, const ChamberSet& C, const Tolerance& tol);
OuterHull outer_hull(const EmbeddedComplex& X, const Tolerance& tol, std::uint64_t seed = 1);

struct ExplodedPiece {
  std::uint32_t chamber = 0;
  Vec3 translation;
  SurfaceMesh mesh;  // translated
};

// Each bounded chamber moved by m (centroid - mean of all vertices).
std::vector<ExplodedPiece> exploded_view(const EmbeddedComplex& X, const ChamberSet& C, double magnitude);

// "chamber <id> <volume> <chi> <tx> <ty> <tz> <file>" per piece.
std::string manifest_line(const ExplodedPiece& piece, const Chamber& chamber, const std::string& file);

}  // namespace selfix
