#pragma once

// Repair of non-manifold edges and vertices by splitting vertices and
// shifting the copies by a small amount.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfix/complex.hpp"

namespace selfix {

struct EdgeClassification {
  std::vector<EdgeId> inner;     // both endpoints touch another non-manifold edge
  std::vector<EdgeId> outer;     // exactly one endpoint does
  std::vector<EdgeId> isolated;  // neither
};

EdgeClassification classify_edges(const SimplicialComplex& X);
// Same, but throws IsolatedNonManifoldEdge when `isolated` is non-empty.
EdgeClassification classify_nonmanifold_edges(const SimplicialComplex& X);

struct NonManifoldPath {
  std::vector<EdgeId> edges;
  std::vector<VertexId> vertices;  // edges.size() + 1 entries; first == last for a circle
  bool circle = false;
  std::vector<bool> junction;      // per vertex
};

// Paths through the non-manifold edges. At a junction the straightest pair of
// edges continues the path (ties by edge id), other branches end there.
std::vector<NonManifoldPath> nonmanifold_paths(const EmbeddedComplex& X);

struct ChamberSet;

// s_e for the face f1 on e with det[v, e, n_f1] > 0 (first in fan order) and
// its fan neighbour f2 along n_f1, taken at `endpoint` (default: lower id).
// n_f is the normal of the side of f on the unbounded chamber; the labeling
// is computed when not given. v is the component of the apex offset
// orthogonal to e, and e points from the lower to the higher vertex id.
Vec3 split_direction(const EmbeddedComplex& X, EdgeId e, std::optional<VertexId> endpoint = {},
                     const ChamberSet* chambers = nullptr);

struct VertexSplit {
  VertexId original = 0;
  std::vector<VertexId> ids;                 // per part; ids[0] may be the original
  std::vector<Vec3> shifts;                  // per part, already scaled by epsilon
  std::vector<std::vector<FaceId>> faces;    // per part
};

struct SplitPlan {
  std::vector<VertexSplit> vertices;
  std::size_t added_vertices = 0;
  std::size_t duplicated_edges = 0;
};

struct SplitResult {
  EmbeddedComplex complex;
  SplitPlan plan;
};

// Splits the vertices shared by two or more non-manifold edges. Faces around
// each non-manifold edge are paired across the wedges that do not belong to
// the unbounded chamber, so X should be an outer hull. The part holding the
// lowest face keeps the vertex in place; the other parts move by eps * s.
SplitResult split_nonmanifold_paths(const EmbeddedComplex& X, double eps, const Tolerance& tol,
                                    std::uint64_t seed = 1);

// Every vertex with m >= 2 local umbrellas becomes m vertices v0 + eps * p_a.
// Throws PreconditionViolated while non-manifold edges remain.
SplitResult split_nonmanifold_vertices(const EmbeddedComplex& X, double eps, const Tolerance& tol);

struct RamifyOptions {
  std::optional<double> epsilon;  // default 1e-4 * bounding-box diagonal
  int max_backoff = 8;
  int max_iterations = 16;
  bool strict_recheck = true;
  unsigned jobs = 1;
  std::uint64_t seed = 1;
};

struct RamifyReport {
  std::size_t inner_edges = 0;
  std::size_t outer_edges = 0;
  std::vector<NonManifoldPath> paths;
  std::size_t nonmanifold_vertices = 0;  // after the edge passes
  std::vector<SplitPlan> plans;          // per pass, in order
  std::vector<std::string> passes;       // "edges" or "vertices"
  double epsilon = 0.0;
  int backoffs = 0;
  double max_displacement = 0.0;
  double displacement_bound = 0.0;       // eps * largest |s| or |p|
};

struct RamifyResult {
  EmbeddedComplex surface;
  RamifyReport report;
};

// Edge passes, then vertex passes, until no non-manifold part remains. On
// NewIntersectionIntroduced epsilon is halved and the repair restarted.
RamifyResult ramify(const EmbeddedComplex& X, const Tolerance& tol, const RamifyOptions& opts = {});

std::string format_report(const RamifyReport& r);

}  // namespace selfix
