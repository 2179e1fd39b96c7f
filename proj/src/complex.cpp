#include "selfix/complex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "selfix/error.hpp"

namespace selfix {

namespace {

std::uint64_t pack(const EdgeKey& e) { return (std::uint64_t{e[0]} << 32) | e[1]; }

}  // namespace

SimplicialComplex SimplicialComplex::build(std::vector<Triple> faces) {
  SimplicialComplex X;
  VertexId max_id = 0;
  for (Triple& t : faces) {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      std::ostringstream msg;
      msg << "face (" << t[0] << "," << t[1] << "," << t[2] << ") repeats a vertex";
      throw Error(ErrorCode::DegenerateFace, msg.str());
    }
    t = sorted_triple(t);
    max_id = std::max(max_id, t[2]);
  }
  {
    std::vector<Triple> check = faces;
    std::sort(check.begin(), check.end());
    auto dup = std::adjacent_find(check.begin(), check.end());
    if (dup != check.end()) {
      std::ostringstream msg;
      msg << "face (" << (*dup)[0] << "," << (*dup)[1] << "," << (*dup)[2] << ") listed twice";
      throw Error(ErrorCode::DegenerateFace, msg.str());
    }
  }
  const std::size_t nv = faces.empty() ? 0 : std::size_t{max_id} + 1;
  X.faces_ = std::move(faces);
  X.vertex_faces_.resize(nv);
  X.vertex_edges_.resize(nv);
  X.face_edges_.resize(X.faces_.size());

  std::unordered_map<std::uint64_t, EdgeId> edge_ids;
  edge_ids.reserve(X.faces_.size() * 2);
  for (FaceId f = 0; f < X.faces_.size(); ++f) {
    const Triple& t = X.faces_[f];
    for (int i = 0; i < 3; ++i) {
      const auto u = static_cast<std::size_t>(i);
      X.vertex_faces_[t[u]].push_back(f);
      const EdgeKey key = edge_key(t[(u + 1) % 3], t[(u + 2) % 3]);
      auto [it, inserted] = edge_ids.try_emplace(pack(key), static_cast<EdgeId>(X.edges_.size()));
      if (inserted) {
        X.edges_.push_back(key);
        X.edge_faces_.emplace_back();
        X.vertex_edges_[key[0]].push_back(it->second);
        X.vertex_edges_[key[1]].push_back(it->second);
      }
      X.face_edges_[f][u] = it->second;
      X.edge_faces_[it->second].push_back(f);
    }
  }

  for (VertexId v = 0; v < nv; ++v) {
    if (X.vertex_faces_[v].empty()) {
      throw Error(ErrorCode::PreconditionViolated,
                  "vertex id " + std::to_string(v) + " is not used by any face");
    }
  }
  std::vector<std::array<std::uint32_t, 2>> open;
  for (EdgeId e = 0; e < X.edges_.size(); ++e) {
    if (X.edge_faces_[e].size() < 2) open.push_back(X.edges_[e]);
  }
  if (!open.empty()) {
    std::ostringstream msg;
    msg << open.size() << " edge(s) with fewer than two faces, first (" << open[0][0] << ","
        << open[0][1] << ")";
    throw Error(ErrorCode::NotClosed, msg.str(), std::move(open));
  }
  return X;
}

std::optional<EdgeId> SimplicialComplex::find_edge(VertexId a, VertexId b) const {
  if (a >= vertex_edges_.size()) return std::nullopt;
  const EdgeKey key = edge_key(a, b);
  for (EdgeId e : vertex_edges_[a]) {
    if (edges_[e] == key) return e;
  }
  return std::nullopt;
}

std::optional<FaceId> SimplicialComplex::find_face(Triple t) const {
  t = sorted_triple(t);
  if (t[0] >= vertex_faces_.size()) return std::nullopt;
  for (FaceId f : vertex_faces_[t[0]]) {
    if (faces_[f] == t) return f;
  }
  return std::nullopt;
}

VertexId SimplicialComplex::apex(FaceId f, EdgeId e) const {
  const auto& fe = face_edges_[f];
  for (std::size_t i = 0; i < 3; ++i) {
    if (fe[i] == e) return faces_[f][i];
  }
  throw Error(ErrorCode::InvalidArgument, "edge is not incident to face");
}

EmbeddedComplex::EmbeddedComplex(SimplicialComplex complex, std::vector<Point3> coords,
                                 const Tolerance& tol)
    : complex_(std::move(complex)), coords_(std::move(coords)) {
  if (coords_.size() != complex_.vertex_count()) {
    throw Error(ErrorCode::InvalidArgument, "coordinate count " + std::to_string(coords_.size()) +
                                                " does not match vertex count " +
                                                std::to_string(complex_.vertex_count()));
  }
  PointIndex index(tol.eps_point);
  for (VertexId v = 0; v < coords_.size(); ++v) {
    if (!is_finite(coords_[v]))
      throw Error(ErrorCode::InvalidArgument, "non-finite coordinate at vertex " + std::to_string(v));
    if (auto other = index.find(coords_[v])) {
      throw Error(ErrorCode::NotInjective,
                  "vertices " + std::to_string(*other) + " and " + std::to_string(v) +
                      " coincide within eps_point",
                  {{*other, v}});
    }
    index.insert(coords_[v]);
  }
}

EmbeddedComplex EmbeddedComplex::from_faces(std::span<const Point3> coords,
                                            std::span<const Triple> faces, const Tolerance& tol) {
  constexpr VertexId unused = ~VertexId{0};
  std::vector<VertexId> remap(coords.size(), unused);
  for (const Triple& t : faces) {
    for (VertexId v : t) {
      if (v >= coords.size()) throw Error(ErrorCode::InvalidArgument, "face references missing vertex");
      remap[v] = 0;
    }
  }
  std::vector<Point3> used;
  for (VertexId v = 0; v < coords.size(); ++v) {
    if (remap[v] == unused) continue;
    remap[v] = static_cast<VertexId>(used.size());
    used.push_back(coords[v]);
  }
  std::vector<Triple> out;
  out.reserve(faces.size());
  for (const Triple& t : faces) out.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  return EmbeddedComplex(SimplicialComplex::build(std::move(out)), std::move(used), tol);
}

std::array<Point3, 3> EmbeddedComplex::triangle(FaceId f) const {
  const Triple& t = complex_.face(f);
  return {coords_[t[0]], coords_[t[1]], coords_[t[2]]};
}

Vec3 EmbeddedComplex::face_normal(FaceId f) const {
  const auto [a, b, c] = triangle(f);
  return normalized(cross(b - a, c - a));
}

double EmbeddedComplex::shortest_edge() const {
  double best = INFINITY;
  for (const EdgeKey& e : complex_.edges()) best = std::min(best, distance(coords_[e[0]], coords_[e[1]]));
  return best;
}

std::vector<EdgeId> nonmanifold_edges(const SimplicialComplex& X) {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < X.edge_count(); ++e) {
    if (X.edge_faces(e).size() > 2) out.push_back(e);
  }
  return out;
}

std::vector<std::vector<FaceId>> local_umbrellas(const SimplicialComplex& X, VertexId v) {
  const auto& star = X.vertex_faces(v);
  std::vector<int> comp(star.size(), -1);
  std::vector<std::vector<FaceId>> out;
  auto local = [&](FaceId f) {
    return static_cast<std::size_t>(std::find(star.begin(), star.end(), f) - star.begin());
  };
  for (std::size_t s = 0; s < star.size(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const FaceId f = star[cur];
      out.back().push_back(f);
      for (EdgeId e : X.face_edges(f)) {
        const EdgeKey& ek = X.edge(e);
        if (ek[0] != v && ek[1] != v) continue;
        const auto& ef = X.edge_faces(e);
        if (ef.size() != 2) continue;
        const FaceId g = ef[0] == f ? ef[1] : ef[0];
        const std::size_t gl = local(g);
        if (comp[gl] < 0) {
          comp[gl] = id;
          stack.push_back(gl);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

std::vector<VertexId> nonmanifold_vertices(const SimplicialComplex& X) {
  if (!nonmanifold_edges(X).empty())
    throw Error(ErrorCode::PreconditionViolated, "non-manifold edges remain; repair edges first");
  std::vector<VertexId> out;
  for (VertexId v = 0; v < X.vertex_count(); ++v) {
    // With every edge in exactly two faces, each umbrella component is a
    // closed cycle, so the umbrella condition is a single component.
    if (local_umbrellas(X, v).size() != 1) out.push_back(v);
  }
  return out;
}

bool is_surface(const SimplicialComplex& X) {
  return nonmanifold_edges(X).empty() && nonmanifold_vertices(X).empty();
}

std::vector<std::uint32_t> face_components(const SimplicialComplex& X, std::size_t* count) {
  constexpr std::uint32_t unset = ~std::uint32_t{0};
  std::vector<std::uint32_t> label(X.face_count(), unset);
  std::uint32_t next = 0;
  for (FaceId seed = 0; seed < X.face_count(); ++seed) {
    if (label[seed] != unset) continue;
    std::vector<FaceId> stack{seed};
    label[seed] = next;
    while (!stack.empty()) {
      const FaceId f = stack.back();
      stack.pop_back();
      for (EdgeId e : X.face_edges(f)) {
        for (FaceId g : X.edge_faces(e)) {
          if (label[g] == unset) {
            label[g] = next;
            stack.push_back(g);
          }
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

namespace {

// True if the cyclic order t traverses a -> b.
bool traverses(const Triple& t, VertexId a, VertexId b) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (t[i] == a && t[(i + 1) % 3] == b) return true;
  }
  return false;
}

Triple reversed(const Triple& t) { return {t[0], t[2], t[1]}; }

}  // namespace

std::vector<Triple> orient(const SimplicialComplex& X) {
  if (!nonmanifold_edges(X).empty())
    throw Error(ErrorCode::NotASurface, "complex has non-manifold edges");
  if (!nonmanifold_vertices(X).empty())
    throw Error(ErrorCode::NotASurface, "complex has non-manifold vertices");

  std::vector<Triple> order(X.face_count());
  std::vector<bool> done(X.face_count(), false);
  for (FaceId seed = 0; seed < X.face_count(); ++seed) {
    if (done[seed]) continue;
    order[seed] = X.face(seed);
    done[seed] = true;
    std::queue<FaceId> queue;
    queue.push(seed);
    while (!queue.empty()) {
      const FaceId f = queue.front();
      queue.pop();
      for (EdgeId e : X.face_edges(f)) {
        const auto& ef = X.edge_faces(e);
        const FaceId g = ef[0] == f ? ef[1] : ef[0];
        const auto [a, b] = X.edge(e);
        const bool f_ab = traverses(order[f], a, b);
        if (!done[g]) {
          const Triple& tg = X.face(g);
          order[g] = traverses(tg, a, b) == f_ab ? reversed(tg) : tg;
          done[g] = true;
          queue.push(g);
        } else if (traverses(order[g], a, b) == f_ab) {
          throw Error(ErrorCode::NonOrientable, "orientation conflict at edge (" +
                                                    std::to_string(a) + "," + std::to_string(b) + ")",
                      {{a, b}});
        }
      }
    }
  }
  return order;
}

double signed_volume(std::span<const Point3> coords, std::span<const Triple> oriented_faces) {
  double acc = 0.0;
  for (const Triple& t : oriented_faces) acc += det3(coords[t[0]], coords[t[1]], coords[t[2]]);
  return acc / 6.0;
}

std::vector<Triple> orient_outward(const EmbeddedComplex& X) {
  std::vector<Triple> order = orient(X.complex());
  std::size_t ncomp = 0;
  const auto comp = face_components(X.complex(), &ncomp);
  std::vector<double> volume(ncomp, 0.0);
  for (FaceId f = 0; f < order.size(); ++f) {
    const Triple& t = order[f];
    volume[comp[f]] += det3(X.point(t[0]), X.point(t[1]), X.point(t[2]));
  }
  for (FaceId f = 0; f < order.size(); ++f) {
    if (volume[comp[f]] < 0.0) order[f] = reversed(order[f]);
  }
  return order;
}

}  // namespace selfix
