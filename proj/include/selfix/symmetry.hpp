#pragma once

// Orbit machinery for a supplied finite group of orthogonal matrices leaving
// an embedded complex invariant.

#include <cstdint>
#include <vector>

#include "selfix/complex.hpp"
#include "selfix/intersect.hpp"

namespace selfix {

using Permutation = std::vector<std::uint32_t>;

struct SymmetryGroup {
  std::vector<Mat3> matrices;
  std::vector<Permutation> vertex_perm;  // per element
  std::vector<Permutation> face_perm;    // per element
  std::uint32_t identity = 0;

  std::size_t order() const { return matrices.size(); }
};

// Checks orthogonality (within eps_angle), invariance of the vertex set
// (nearest image within eps_point), that faces map to faces, and the group
// axioms on the induced vertex permutations.
SymmetryGroup verify_group(const EmbeddedComplex& X, const std::vector<Mat3>& matrices,
                           const Tolerance& tol);

struct OrbitDecomposition {
  std::vector<FaceId> face_reps;
  std::vector<FaceId> rep_of;           // per face
  std::vector<std::uint32_t> witness;   // per face: element g with g(rep_of[f]) = f
  std::vector<std::vector<std::uint32_t>> stabilizer;  // per rep index
  // Per rep index: partners f' such that the pairs {rep, f'} represent every
  // unordered face-pair orbit exactly once.
  std::vector<std::vector<FaceId>> pair_reps;

  std::size_t orbit_count() const { return face_reps.size(); }
  std::size_t pair_rep_count() const;
  std::size_t rep_index(FaceId rep) const;
};

OrbitDecomposition face_orbits(const EmbeddedComplex& X, const SymmetryGroup& G);

// (1/|G|) sum_g |Fix(g)| over permutations of one set.
std::size_t burnside_orbit_count(const std::vector<Permutation>& perms);

// Tests only the representative pairs and maps the results by the group.
// pair_tests counts the representative pairs.
IntersectionSet symmetric_all_intersections(const EmbeddedComplex& X, const SymmetryGroup& G,
                                            const OrbitDecomposition& orbits, const Tolerance& tol,
                                            unsigned jobs = 1);

// rep_triangles is indexed by face id and must be filled for every orbit
// representative. Face f receives M_w applied to its representative's
// triangles, w = witness[f]. Throws MissingRep.
std::vector<std::vector<Triangle>> transfer_retriangulations(
    const SymmetryGroup& G, const OrbitDecomposition& orbits,
    const std::vector<std::vector<Triangle>>& rep_triangles);

// Retriangulates the representatives only and transfers the rest.
std::vector<std::vector<Triangle>> symmetric_retriangulate_faces(const EmbeddedComplex& X,
                                                                 const SymmetryGroup& G,
                                                                 const OrbitDecomposition& orbits,
                                                                 const IntersectionSet& hits,
                                                                 const Tolerance& tol,
                                                                 unsigned jobs = 1);

// True if every matrix maps the vertex set of Y onto itself within eps_point.
bool vertex_set_invariant(const EmbeddedComplex& Y, const std::vector<Mat3>& matrices,
                          const Tolerance& tol);

}  // namespace selfix
