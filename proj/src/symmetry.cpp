#include "selfix/symmetry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "selfix/error.hpp"
#include "selfix/parallel.hpp"
#include "selfix/retriangulate.hpp"

namespace selfix {

SymmetryGroup verify_group(const EmbeddedComplex& X, const std::vector<Mat3>& matrices,
                           const Tolerance& tol) {
  if (matrices.empty()) throw Error(ErrorCode::InvalidArgument, "empty list of symmetry matrices");
  const SimplicialComplex& K = X.complex();
  PointIndex index(tol.eps_point);
  for (const Point3& p : X.coords()) index.insert(p);

  SymmetryGroup G;
  G.matrices = matrices;
  for (std::uint32_t g = 0; g < matrices.size(); ++g) {
    const Mat3& M = matrices[g];
    if (!(M.orthogonality_defect() <= tol.eps_angle)) {
      throw Error(ErrorCode::NotOrthogonal,
                  "matrix " + std::to_string(g) + " is not orthogonal (defect " +
                      std::to_string(M.orthogonality_defect()) + ")",
                  {{g, 0}});
    }
    Permutation vp(K.vertex_count());
    for (VertexId v = 0; v < vp.size(); ++v) {
      auto image = index.find(M * X.point(v));
      if (!image) {
        throw Error(ErrorCode::NotInvariant,
                    "matrix " + std::to_string(g) + " moves vertex " + std::to_string(v) +
                        " off the vertex set",
                    {{g, v}});
      }
      vp[v] = *image;
    }
    Permutation fp(K.face_count());
    for (FaceId f = 0; f < fp.size(); ++f) {
      const Triple& t = K.face(f);
      auto image = K.find_face({vp[t[0]], vp[t[1]], vp[t[2]]});
      if (!image) {
        throw Error(ErrorCode::NotInvariant,
                    "matrix " + std::to_string(g) + " maps face " + std::to_string(f) + " to a non-face",
                    {{g, f}});
      }
      fp[f] = *image;
    }
    G.vertex_perm.push_back(std::move(vp));
    G.face_perm.push_back(std::move(fp));
  }

  std::map<Permutation, std::uint32_t> lookup;
  for (std::uint32_t g = 0; g < G.order(); ++g) {
    if (!lookup.emplace(G.vertex_perm[g], g).second) {
      throw Error(ErrorCode::NotAGroup, "elements " + std::to_string(lookup[G.vertex_perm[g]]) +
                                            " and " + std::to_string(g) + " act identically");
    }
  }
  Permutation id(K.vertex_count());
  std::iota(id.begin(), id.end(), 0u);
  auto it = lookup.find(id);
  if (it == lookup.end()) throw Error(ErrorCode::NotAGroup, "identity element missing");
  G.identity = it->second;

  Permutation prod(K.vertex_count());
  for (std::uint32_t g = 0; g < G.order(); ++g) {
    bool has_inverse = false;
    for (std::uint32_t h = 0; h < G.order(); ++h) {
      for (VertexId v = 0; v < prod.size(); ++v) prod[v] = G.vertex_perm[g][G.vertex_perm[h][v]];
      if (!lookup.count(prod)) {
        throw Error(ErrorCode::NotAGroup, "product of elements " + std::to_string(g) + " and " +
                                              std::to_string(h) + " is not in the set",
                    {{g, h}});
      }
      if (prod == id) has_inverse = true;
    }
    if (!has_inverse) throw Error(ErrorCode::NotAGroup, "element " + std::to_string(g) + " has no inverse");
  }
  return G;
}

std::size_t OrbitDecomposition::pair_rep_count() const {
  std::size_t n = 0;
  for (const auto& p : pair_reps) n += p.size();
  return n;
}

std::size_t OrbitDecomposition::rep_index(FaceId rep) const {
  auto it = std::lower_bound(face_reps.begin(), face_reps.end(), rep);
  if (it == face_reps.end() || *it != rep) throw Error(ErrorCode::MissingRep, "face is not a representative");
  return static_cast<std::size_t>(it - face_reps.begin());
}

OrbitDecomposition face_orbits(const EmbeddedComplex& X, const SymmetryGroup& G) {
  const std::size_t nf = X.complex().face_count();
  constexpr FaceId unset = ~FaceId{0};
  OrbitDecomposition O;
  O.rep_of.assign(nf, unset);
  O.witness.assign(nf, 0);
  for (FaceId f = 0; f < nf; ++f) {
    if (O.rep_of[f] != unset) continue;
    O.face_reps.push_back(f);
    std::vector<std::uint32_t> stab;
    for (std::uint32_t g = 0; g < G.order(); ++g) {
      const FaceId img = G.face_perm[g][f];
      if (img == f) stab.push_back(g);
      if (O.rep_of[img] == unset) {
        O.rep_of[img] = f;
        O.witness[img] = g;
      }
    }
    O.stabilizer.push_back(std::move(stab));
  }
  // Identity witnesses for the representatives themselves.
  for (FaceId r : O.face_reps) O.witness[r] = G.identity;

  auto pair_key = [&](FaceId a, FaceId b) {
    std::array<FaceId, 2> best{~FaceId{0}, ~FaceId{0}};
    for (std::uint32_t g = 0; g < G.order(); ++g) {
      FaceId x = G.face_perm[g][a];
      FaceId y = G.face_perm[g][b];
      if (x > y) std::swap(x, y);
      best = std::min(best, std::array<FaceId, 2>{x, y});
    }
    return best;
  };
  std::set<std::array<FaceId, 2>> seen;
  for (std::size_t ri = 0; ri < O.face_reps.size(); ++ri) {
    const FaceId r = O.face_reps[ri];
    std::vector<bool> covered(nf, false);
    std::vector<FaceId> partners;
    for (FaceId f = 0; f < nf; ++f) {
      if (f == r || covered[f]) continue;
      for (std::uint32_t g : O.stabilizer[ri]) covered[G.face_perm[g][f]] = true;
      if (seen.insert(pair_key(r, f)).second) partners.push_back(f);
    }
    O.pair_reps.push_back(std::move(partners));
  }
  return O;
}

std::size_t burnside_orbit_count(const std::vector<Permutation>& perms) {
  if (perms.empty()) throw Error(ErrorCode::InvalidArgument, "empty group");
  std::size_t fixed = 0;
  for (const Permutation& p : perms) {
    for (std::uint32_t i = 0; i < p.size(); ++i) fixed += p[i] == i;
  }
  if (fixed % perms.size() != 0) {
    throw Error(ErrorCode::NotAGroup, "fixed-point total is not divisible by the group order");
  }
  return fixed / perms.size();
}

namespace {

Point3 apply(const Mat3& M, const Point3& p) { return M * p; }

PairIntersection transformed(const PairIntersection& r, const Mat3& M, bool swap_roles) {
  PairIntersection out = r;
  out.p0 = apply(M, r.p0);
  out.p1 = apply(M, r.p1);
  if (lex_less(out.p1, out.p0)) std::swap(out.p0, out.p1);
  auto map_pieces = [&](std::vector<std::array<Point3, 2>>& pieces) {
    for (auto& s : pieces) s = {apply(M, s[0]), apply(M, s[1])};
  };
  map_pieces(out.coplanar.inside_first);
  map_pieces(out.coplanar.inside_second);
  for (Point3& p : out.coplanar.crossings) p = apply(M, p);
  if (swap_roles) std::swap(out.coplanar.inside_first, out.coplanar.inside_second);
  return out;
}

}  // namespace

IntersectionSet symmetric_all_intersections(const EmbeddedComplex& X, const SymmetryGroup& G,
                                            const OrbitDecomposition& orbits, const Tolerance& tol,
                                            unsigned jobs) {
  struct Task {
    FaceId a, b;
  };
  std::vector<Task> tasks;
  for (std::size_t ri = 0; ri < orbits.face_reps.size(); ++ri) {
    for (FaceId f : orbits.pair_reps[ri]) tasks.push_back({orbits.face_reps[ri], f});
  }
  std::vector<PairIntersection> results(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    results[i] = face_pair_intersection(X, tasks[i].a, tasks[i].b, tol);
  });

  std::map<std::array<FaceId, 2>, PairIntersection> found;
  std::size_t touches = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const PairIntersection& r = results[i];
    if (r.kind == PairKind::None && !r.tolerance_warning) continue;
    std::set<std::array<FaceId, 2>> images;
    for (std::uint32_t g = 0; g < G.order(); ++g) {
      const FaceId x = G.face_perm[g][tasks[i].a];
      const FaceId y = G.face_perm[g][tasks[i].b];
      const std::array<FaceId, 2> key{std::min(x, y), std::max(x, y)};
      if (!images.insert(key).second) continue;
      if (r.kind == PairKind::Touch) ++touches;
      found.emplace(key, transformed(r, G.matrices[g], x > y));
    }
  }

  IntersectionSet out;
  out.per_face.resize(X.complex().face_count());
  out.pair_tests = tasks.size();
  for (const auto& [key, r] : found) record_pair(out, key[0], key[1], r);
  out.touch_count = touches;
  return out;
}

std::vector<std::vector<Triangle>> transfer_retriangulations(
    const SymmetryGroup& G, const OrbitDecomposition& orbits,
    const std::vector<std::vector<Triangle>>& rep_triangles) {
  const std::size_t nf = orbits.rep_of.size();
  std::vector<std::vector<Triangle>> out(nf);
  for (FaceId f = 0; f < nf; ++f) {
    const FaceId r = orbits.rep_of[f];
    if (r >= rep_triangles.size() || rep_triangles[r].empty()) {
      throw Error(ErrorCode::MissingRep, "no triangulation for representative " + std::to_string(r),
                  {{r, f}});
    }
    const Mat3& M = G.matrices[orbits.witness[f]];
    out[f].reserve(rep_triangles[r].size());
    for (const Triangle& t : rep_triangles[r]) out[f].push_back({M * t[0], M * t[1], M * t[2]});
  }
  return out;
}

std::vector<std::vector<Triangle>> symmetric_retriangulate_faces(const EmbeddedComplex& X,
                                                                 const SymmetryGroup& G,
                                                                 const OrbitDecomposition& orbits,
                                                                 const IntersectionSet& hits,
                                                                 const Tolerance& tol, unsigned jobs) {
  std::vector<std::vector<Triangle>> reps(X.complex().face_count());
  parallel_for(orbits.face_reps.size(), jobs, [&](std::size_t i) {
    const FaceId r = orbits.face_reps[i];
    std::span<const Constraint> cs;
    if (r < hits.per_face.size()) cs = hits.per_face[r];
    reps[r] = retriangulate_face(X.triangle(r), cs, tol);
  });
  return transfer_retriangulations(G, orbits, reps);
}

bool vertex_set_invariant(const EmbeddedComplex& Y, const std::vector<Mat3>& matrices,
                          const Tolerance& tol) {
  PointIndex index(tol.eps_point);
  for (const Point3& p : Y.coords()) index.insert(p);
  for (const Mat3& M : matrices) {
    std::vector<bool> hit(Y.coords().size(), false);
    for (const Point3& p : Y.coords()) {
      auto img = index.find(M * p);
      if (!img || hit[*img]) return false;
      hit[*img] = true;
    }
  }
  return true;
}

}  // namespace selfix
