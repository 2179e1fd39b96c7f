#include "selfix/chambers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "selfix/error.hpp"

namespace selfix {

namespace {

struct Hit {
  FaceId face;
  double t;
};

enum class RayResult { Miss, Hit, Ambiguous };

// Closest crossing with t > t_min, skipping faces flagged in `skip`.
RayResult cast_ray(const EmbeddedComplex& X, const Point3& o, const Vec3& d, double t_min,
                   const std::vector<bool>* skip, Hit& best) {
  const SimplicialComplex& K = X.complex();
  constexpr double margin = 1e-9;
  bool found = false;
  bool ambiguous = false;
  double ambiguous_t = 0.0;
  for (FaceId f = 0; f < K.face_count(); ++f) {
    if (skip && (*skip)[f]) continue;
    const auto [a, b, c] = X.triangle(f);
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 p = cross(d, e2);
    const double det = dot(e1, p);
    const double scale = norm(e1) * norm(e2);
    if (std::abs(det) <= 1e-12 * scale) continue;
    const Vec3 s = o - a;
    const double u = dot(s, p) / det;
    const Vec3 q = cross(s, e1);
    const double v = dot(d, q) / det;
    const double t = dot(e2, q) / det;
    const double w = 1.0 - u - v;
    if (t <= t_min) continue;
    if (u < -margin || v < -margin || w < -margin) continue;
    if (u <= margin || v <= margin || w <= margin) {
      if (!ambiguous || t < ambiguous_t) ambiguous_t = t;
      ambiguous = true;
      continue;
    }
    if (!found || t < best.t) best = {f, t};
    found = true;
  }
  if (ambiguous && (!found || ambiguous_t <= best.t)) return RayResult::Ambiguous;
  return found ? RayResult::Hit : RayResult::Miss;
}

Vec3 tilted_x(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> tilt(-0.05, 0.05);
  return normalized(Vec3{1.0, tilt(rng), tilt(rng)});
}

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    Vec3 v{g(rng), g(rng), g(rng)};
    if (norm(v) > 1e-3) return normalized(v);
  }
}

Side side_facing(const EmbeddedComplex& X, FaceId f, const Vec3& d) {
  return dot(d, X.face_normal(f)) < 0.0 ? Side::Positive : Side::Negative;
}

// Oriented so the right-hand normal points away from the chamber on `s`.
Triple away_from(const Triple& t, Side s) { return s == Side::Positive ? Triple{t[0], t[2], t[1]} : t; }

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ChamberSet all_chambers(const EmbeddedComplex& X, std::uint64_t seed) {
  const SimplicialComplex& K = X.complex();
  const std::size_t nf = K.face_count();
  if (nf == 0) throw Error(ErrorCode::InvalidArgument, "empty complex");
  const std::vector<EdgeFan> fans = all_edge_fans(X);
  const BoundingBox box = X.bounds();
  const Point3 center = (box.lo + box.hi) * 0.5;
  const double diag = box.diagonal();

  ChamberSet C;
  constexpr std::uint32_t unset = ~std::uint32_t{0};
  C.shell.assign(2 * nf, unset);
  std::vector<std::vector<FaceSide>> shells;
  for (std::uint32_t i = 0; i < 2 * nf; ++i) {
    if (C.shell[i] != unset) continue;
    const auto sides = extract_chamber(X, fans, FaceSide::from_index(i));
    const auto id = static_cast<std::uint32_t>(shells.size());
    double vol = 0.0;
    for (const FaceSide& fs : sides) {
      C.shell[fs.index()] = id;
      const Triple t = away_from(K.face(fs.face), fs.side);
      vol += det3(X.point(t[0]) - center, X.point(t[1]) - center, X.point(t[2]) - center);
    }
    C.shell_volume.push_back(vol / 6.0);
    shells.push_back(sides);
  }

  const std::size_t ns = shells.size();
  const auto infinity = static_cast<std::uint32_t>(ns);
  UnionFind uf(ns + 1);
  C.start = initial_face(X, seed);
  const std::uint32_t start_shell = C.shell[FaceSide{C.start.face, C.start.side}.index()];
  uf.unite(start_shell, infinity);

  std::mt19937_64 rng(seed);
  for (std::uint32_t s = 0; s < ns; ++s) {
    if (C.shell_volume[s] > 0.0 || s == start_shell) continue;
    std::vector<FaceId> faces;
    std::vector<bool> skip(nf, false);
    for (const FaceSide& fs : shells[s]) {
      if (!skip[fs.face]) faces.push_back(fs.face);
      skip[fs.face] = true;
    }
    const StartPair sp = initial_face(X, seed, faces);
    Side own = sp.side;
    if (C.shell[FaceSide{sp.face, own}.index()] != s) own = opposite(own);
    const Vec3 n = own == Side::Positive ? X.face_normal(sp.face) : -X.face_normal(sp.face);
    const auto tri = X.triangle(sp.face);
    const Point3 centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
    const Point3 v0 = X.point(sp.vertex);
    const Point3 o = v0 + (centroid - v0) * 1e-3 + n * (1e-7 * diag);

    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      const Vec3 d = tilted_x(rng);
      Hit hit{};
      const RayResult r = cast_ray(X, o, d, 1e-9 * diag, &skip, hit);
      if (r == RayResult::Ambiguous) continue;
      if (r == RayResult::Miss) {
        uf.unite(s, infinity);
      } else {
        uf.unite(s, C.shell[FaceSide{hit.face, side_facing(X, hit.face, d)}.index()]);
      }
      placed = true;
    }
    if (!placed) throw Error(ErrorCode::Exhausted, "could not place boundary component " + std::to_string(s));
  }

  // One chamber per union class: the unbounded one, or exactly one outer shell.
  std::vector<std::uint32_t> chamber_of_root(ns + 1, unset);
  C.chambers.push_back({});
  C.chambers[0].id = 0;
  C.chambers[0].bounded = false;
  chamber_of_root[uf.find(infinity)] = 0;
  for (std::uint32_t s = 0; s < ns; ++s) {
    if (C.shell_volume[s] <= 0.0 || s == start_shell) continue;
    const std::uint32_t root = uf.find(s);
    if (chamber_of_root[root] != unset) {
      throw Error(ErrorCode::PreconditionViolated,
                  "boundary component " + std::to_string(s) + " placed in a chamber that already has an outer boundary");
    }
    Chamber ch;
    ch.id = static_cast<std::uint32_t>(C.chambers.size());
    chamber_of_root[root] = ch.id;
    C.chambers.push_back(ch);
  }
  C.label.assign(2 * nf, unset);
  for (std::uint32_t s = 0; s < ns; ++s) {
    const std::uint32_t id = chamber_of_root[uf.find(s)];
    if (id == unset) {
      throw Error(ErrorCode::PreconditionViolated,
                  "boundary component " + std::to_string(s) + " has no enclosing chamber");
    }
    Chamber& ch = C.chambers[id];
    ch.shells.push_back(s);
    ch.volume += C.shell_volume[s];
    for (const FaceSide& fs : shells[s]) {
      C.label[fs.index()] = id;
      ch.sides.push_back(fs);
    }
  }

  for (Chamber& ch : C.chambers) {
    ch.volume = std::abs(ch.volume);
    std::sort(ch.sides.begin(), ch.sides.end(),
              [](const FaceSide& a, const FaceSide& b) { return a.index() < b.index(); });
    std::set<VertexId> verts;
    std::set<EdgeId> edges;
    std::set<FaceId> faces;
    for (const FaceSide& fs : ch.sides) {
      faces.insert(fs.face);
      for (VertexId v : K.face(fs.face)) verts.insert(v);
      for (EdgeId e : K.face_edges(fs.face)) edges.insert(e);
    }
    ch.euler = static_cast<long>(verts.size()) - static_cast<long>(edges.size()) + static_cast<long>(faces.size());
    Vec3 sum;
    for (VertexId v : verts) sum += X.point(v);
    ch.centroid = sum / static_cast<double>(verts.size());
  }
  return C;
}

std::uint32_t locate_point(const EmbeddedComplex& X, const ChamberSet& C, const Point3& p,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double t_min = 1e-12 * X.bounds().diagonal();
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Vec3 d = random_direction(rng);
    Hit hit{};
    const RayResult r = cast_ray(X, p, d, t_min, nullptr, hit);
    if (r == RayResult::Ambiguous) continue;
    if (r == RayResult::Miss) return 0;
    return C.chamber_of({hit.face, side_facing(X, hit.face, d)});
  }
  throw Error(ErrorCode::Exhausted, "point lies on the complex or every ray was degenerate");
}

SurfaceMesh chamber_surface(const EmbeddedComplex& X, const ChamberSet& C, std::uint32_t id) {
  if (id >= C.chambers.size()) throw Error(ErrorCode::InvalidArgument, "no chamber " + std::to_string(id));
  const SimplicialComplex& K = X.complex();
  std::vector<Triple> faces;
  std::vector<FaceId> seen;
  for (const FaceSide& fs : C.chambers[id].sides) {
    // A face with both sides on the chamber is emitted once.
    if (!seen.empty() && seen.back() == fs.face) continue;
    seen.push_back(fs.face);
    faces.push_back(away_from(K.face(fs.face), fs.side));
  }
  constexpr VertexId unused = ~VertexId{0};
  std::vector<VertexId> remap(K.vertex_count(), unused);
  SurfaceMesh m;
  for (const Triple& t : faces) {
    for (VertexId v : t) remap[v] = 0;
  }
  for (VertexId v = 0; v < K.vertex_count(); ++v) {
    if (remap[v] == unused) continue;
    remap[v] = static_cast<VertexId>(m.coords.size());
    m.coords.push_back(X.point(v));
  }
  for (const Triple& t : faces) m.faces.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  return m;
}

OuterHull outer_hull(const EmbeddedComplex& X, const ChamberSet& C, const Tolerance& tol) {
  const SimplicialComplex& K = X.complex();
  std::vector<Triple> sorted;
  std::vector<Triple> oriented;
  OuterHull H;
  for (FaceId f = 0; f < K.face_count(); ++f) {
    const bool pos = C.label[FaceSide{f, Side::Positive}.index()] == 0;
    const bool neg = C.label[FaceSide{f, Side::Negative}.index()] == 0;
    if (!pos && !neg) continue;
    // Normal toward the unbounded side.
    const Triple& t = K.face(f);
    oriented.push_back(pos ? t : Triple{t[0], t[2], t[1]});
    sorted.push_back(t);
    H.source.push_back(f);
  }
  H.complex = EmbeddedComplex::from_faces(X.coords(), sorted, tol);
  // from_faces keeps the relative vertex order, so ranks give the new ids.
  std::vector<VertexId> remap(K.vertex_count(), 0);
  std::vector<bool> used(K.vertex_count(), false);
  for (const Triple& t : sorted) {
    for (VertexId v : t) used[v] = true;
  }
  VertexId next = 0;
  for (VertexId v = 0; v < K.vertex_count(); ++v) {
    if (used[v]) remap[v] = next++;
  }
  for (const Triple& t : oriented) H.oriented.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  return H;
}

OuterHull outer_hull(const EmbeddedComplex& X, const Tolerance& tol, std::uint64_t seed) {
  return outer_hull(X, all_chambers(X, seed), tol);
}

std::vector<ExplodedPiece> exploded_view(const EmbeddedComplex& X, const ChamberSet& C, double magnitude) {
  if (!std::isfinite(magnitude) || magnitude < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "magnitude must be finite and non-negative");
  }
  Vec3 p;
  for (const Point3& q : X.coords()) p += q;
  p = p / static_cast<double>(X.coords().size());
  std::vector<ExplodedPiece> out;
  for (const Chamber& ch : C.chambers) {
    if (!ch.bounded) continue;
    ExplodedPiece piece;
    piece.chamber = ch.id;
    piece.translation = (ch.centroid - p) * magnitude;
    piece.mesh = chamber_surface(X, C, ch.id);
    for (Point3& q : piece.mesh.coords) q += piece.translation;
    out.push_back(std::move(piece));
  }
  return out;
}

std::string manifest_line(const ExplodedPiece& piece, const Chamber& chamber, const std::string& file) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "chamber %u %.17g %ld %.17g %.17g %.17g ", chamber.id, chamber.volume,
                chamber.euler, piece.translation.x, piece.translation.y, piece.translation.z);
  return buf + file;
}

}  // namespace selfix
