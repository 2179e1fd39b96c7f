#pragma once

// Combinatorial simplicial complexes (closed, set-based) and their
// embeddings. Faces are stored as sorted vertex triples; orientation is an
// overlay computed on demand.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "selfix/core.hpp"

namespace selfix {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using FaceId = std::uint32_t;
using Triple = std::array<VertexId, 3>;
using EdgeKey = std::array<VertexId, 2>;

inline Triple sorted_triple(Triple t) {
  if (t[0] > t[1]) std::swap(t[0], t[1]);
  if (t[1] > t[2]) std::swap(t[1], t[2]);
  if (t[0] > t[1]) std::swap(t[0], t[1]);
  return t;
}
inline EdgeKey edge_key(VertexId a, VertexId b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  // Builds the complex spanned by the given faces. Vertex ids must be dense
  // (every id in [0, max] used). Throws DegenerateFace on a repeated id or a
  // repeated triple, NotClosed (with all offending edges) when an edge lies in
  // fewer than two faces.
  static SimplicialComplex build(std::vector<Triple> faces);

  std::size_t vertex_count() const { return vertex_faces_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t face_count() const { return faces_.size(); }

  const std::vector<Triple>& faces() const { return faces_; }
  const Triple& face(FaceId f) const { return faces_[f]; }
  const std::vector<EdgeKey>& edges() const { return edges_; }
  const EdgeKey& edge(EdgeId e) const { return edges_[e]; }

  // The three edges of a face, opposite vertex 0, 1, 2 of the sorted triple.
  const std::array<EdgeId, 3>& face_edges(FaceId f) const { return face_edges_[f]; }
  const std::vector<FaceId>& edge_faces(EdgeId e) const { return edge_faces_[e]; }
  // X_2(v)
  const std::vector<FaceId>& vertex_faces(VertexId v) const { return vertex_faces_[v]; }
  const std::vector<EdgeId>& vertex_edges(VertexId v) const { return vertex_edges_[v]; }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;
  std::optional<FaceId> find_face(Triple t) const;
  // Vertex of f not on edge e.
  VertexId apex(FaceId f, EdgeId e) const;

  long euler_characteristic() const {
    return static_cast<long>(vertex_count()) - static_cast<long>(edge_count()) +
           static_cast<long>(face_count());
  }

 private:
  std::vector<Triple> faces_;
  std::vector<EdgeKey> edges_;
  std::vector<std::array<EdgeId, 3>> face_edges_;
  std::vector<std::vector<FaceId>> edge_faces_;
  std::vector<std::vector<FaceId>> vertex_faces_;
  std::vector<std::vector<EdgeId>> vertex_edges_;
};

// A complex with an injective vertex -> R^3 map.
class EmbeddedComplex {
 public:
  EmbeddedComplex() = default;
  // Validates that coords covers the vertex set exactly, coordinates are
  // finite and pairwise farther apart than eps_point.
  EmbeddedComplex(SimplicialComplex complex, std::vector<Point3> coords, const Tolerance& tol);

  // Builds from faces over arbitrary (possibly sparse) vertex ids, keeping
  // only referenced vertices in their original relative order.
  static EmbeddedComplex from_faces(std::span<const Point3> coords, std::span<const Triple> faces,
                                    const Tolerance& tol);

  const SimplicialComplex& complex() const { return complex_; }
  const std::vector<Point3>& coords() const { return coords_; }
  const Point3& point(VertexId v) const { return coords_[v]; }
  std::array<Point3, 3> triangle(FaceId f) const;
  // Unit normal of the sorted triple by the right-hand rule.
  Vec3 face_normal(FaceId f) const;
  BoundingBox bounds() const { return bounding_box(coords_); }
  double shortest_edge() const;

 private:
  SimplicialComplex complex_;
  std::vector<Point3> coords_;
};

// Edges with three or more incident faces.
std::vector<EdgeId> nonmanifold_edges(const SimplicialComplex& X);

// Vertices whose faces do not form one cycle through edges containing the
// vertex. Throws PreconditionViolated while non-manifold edges remain.
std::vector<VertexId> nonmanifold_vertices(const SimplicialComplex& X);

bool is_surface(const SimplicialComplex& X);

// Local umbrellas: the edge-connected components of X_2(v), where two faces
// are adjacent when they share an edge through v that has exactly two faces.
std::vector<std::vector<FaceId>> local_umbrellas(const SimplicialComplex& X, VertexId v);

// Cyclic vertex order per face, consistent across shared edges. Each
// connected component is anchored at its lowest face id, which keeps its
// sorted order. Throws NotASurface / NonOrientable.
std::vector<Triple> orient(const SimplicialComplex& X);

// orient() with every component flipped so its signed volume is positive.
std::vector<Triple> orient_outward(const EmbeddedComplex& X);

double signed_volume(std::span<const Point3> coords, std::span<const Triple> oriented_faces);

// Connected components of faces under edge adjacency; labels per face.
std::vector<std::uint32_t> face_components(const SimplicialComplex& X, std::size_t* count);

}  // namespace selfix
