#include "selfix/outerhull.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <optional>
#include <random>

#include "selfix/error.hpp"

namespace selfix {

std::size_t EdgeFan::position(FaceId f) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].face == f) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "face " + std::to_string(f) + " is not on edge " + std::to_string(edge));
}

EdgeFan edge_fan(const EmbeddedComplex& X, EdgeId e) {
  const SimplicialComplex& K = X.complex();
  const EdgeKey& ek = K.edge(e);
  const Point3& u = X.point(ek[0]);
  const Vec3 d = normalized(X.point(ek[1]) - u);
  EdgeFan fan;
  fan.edge = e;
  std::vector<FaceId> faces = K.edge_faces(e);
  std::sort(faces.begin(), faces.end());
  if (faces.empty()) return fan;

  auto perp = [&](FaceId f) {
    const Vec3 r = X.point(K.apex(f, e)) - u;
    return r - d * dot(r, d);
  };
  const Vec3 e1 = normalized(perp(faces.front()));
  const Vec3 e2 = cross(d, e1);
  for (FaceId f : faces) {
    const Vec3 r = perp(f);
    double a = std::atan2(dot(r, e2), dot(r, e1));
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    if (f == faces.front()) a = 0.0;
    const Vec3 tangent = cross(d, r);
    fan.entries.push_back({f, a, dot(X.face_normal(f), tangent) > 0.0});
  }
  std::stable_sort(fan.entries.begin(), fan.entries.end(),
                   [](const FanEntry& a, const FanEntry& b) { return a.angle < b.angle; });
  return fan;
}

std::vector<EdgeFan> all_edge_fans(const EmbeddedComplex& X) {
  std::vector<EdgeFan> fans;
  fans.reserve(X.complex().edge_count());
  for (EdgeId e = 0; e < X.complex().edge_count(); ++e) fans.push_back(edge_fan(X, e));
  return fans;
}

FaceSide upward_continuation(const EdgeFan& fan, FaceSide from) {
  const std::size_t n = fan.entries.size();
  if (n < 2) {
    throw Error(ErrorCode::OpenBoundary, "edge " + std::to_string(fan.edge) + " has fewer than two faces",
                {{fan.edge, 0}});
  }
  const std::size_t i = fan.position(from.face);
  const bool ccw = fan.entries[i].positive_ccw == (from.side == Side::Positive);
  const FanEntry& next = fan.entries[ccw ? (i + 1) % n : (i + n - 1) % n];
  // The side of `next` facing back into the wedge just crossed.
  const bool positive_faces_back = ccw ? !next.positive_ccw : next.positive_ccw;
  return {next.face, positive_faces_back ? Side::Positive : Side::Negative};
}

namespace {

struct Selection {
  FaceId face;
  VertexId vertex;
  EdgeId edge;
  Vec3 normal;  // in the frame of `pts`
};

std::optional<Selection> select_start(const EmbeddedComplex& X, const std::vector<Point3>& pts,
                                      const std::vector<bool>& active, double tie) {
  const SimplicialComplex& K = X.complex();
  std::vector<bool> used(K.vertex_count(), false);
  for (FaceId f = 0; f < K.face_count(); ++f) {
    if (!active[f]) continue;
    for (VertexId v : K.face(f)) used[v] = true;
  }
  std::optional<VertexId> best;
  for (VertexId v = 0; v < used.size(); ++v) {
    if (used[v] && (!best || pts[v].x > pts[*best].x)) best = v;
  }
  if (!best) throw Error(ErrorCode::InvalidArgument, "no faces to search");
  for (VertexId v = 0; v < used.size(); ++v) {
    if (used[v] && v != *best && pts[*best].x - pts[v].x <= tie) return std::nullopt;
  }
  const VertexId v = *best;

  auto edge_active = [&](EdgeId e) {
    return std::any_of(K.edge_faces(e).begin(), K.edge_faces(e).end(), [&](FaceId f) { return active[f]; });
  };
  std::optional<EdgeId> edge;
  double edge_score = 0.0;
  for (EdgeId e : K.vertex_edges(v)) {
    if (!edge_active(e)) continue;
    const EdgeKey& ek = K.edge(e);
    const Vec3 d = pts[ek[0] == v ? ek[1] : ek[0]] - pts[v];
    const double score = std::abs(d.x) / norm(d);
    if (!edge || score < edge_score - 1e-12 || (std::abs(score - edge_score) <= 1e-12 && e < *edge)) {
      edge = e;
      edge_score = score;
    }
  }

  auto normal_of = [&](FaceId f) {
    const Triple& t = K.face(f);
    return normalized(cross(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]));
  };
  std::optional<FaceId> face;
  double face_score = 0.0;
  for (FaceId f : K.edge_faces(*edge)) {
    if (!active[f]) continue;
    const double score = std::abs(normal_of(f).x);
    if (!face || score > face_score + 1e-12 || (std::abs(score - face_score) <= 1e-12 && f < *face)) {
      face = f;
      face_score = score;
    }
  }
  Vec3 n = normal_of(*face);
  if (n.x < 0.0) n = -n;
  return Selection{*face, v, *edge, n};
}

}  // namespace

StartPair initial_face(const EmbeddedComplex& X, std::uint64_t seed, const std::vector<FaceId>& faces) {
  const SimplicialComplex& K = X.complex();
  if (K.face_count() == 0) throw Error(ErrorCode::InvalidArgument, "empty complex");
  std::vector<bool> active(K.face_count(), faces.empty());
  for (FaceId f : faces) {
    if (f >= K.face_count()) throw Error(ErrorCode::InvalidArgument, "face id out of range");
    active[f] = true;
  }
  const double tie = 1e-9 * std::max(X.bounds().diagonal(), 1e-300);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> angle(0.1, 3.0);
  Mat3 R = Mat3::rotation({0, 0, 1}, 0.0);
  bool rotated = false;
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<Point3> pts = X.coords();
    if (rotated) {
      for (Point3& p : pts) p = R * p;
    }
    if (auto s = select_start(X, pts, active, tie)) {
      StartPair out;
      out.face = s->face;
      out.vertex = s->vertex;
      out.edge = s->edge;
      out.rotated = rotated;
      out.normal = rotated ? R.transposed() * s->normal : s->normal;
      out.side = dot(out.normal, X.face_normal(s->face)) > 0.0 ? Side::Positive : Side::Negative;
      return out;
    }
    Vec3 axis{gauss(rng), gauss(rng), gauss(rng)};
    if (norm(axis) < 1e-6) axis = {0, 0, 1};
    R = Mat3::rotation(normalized(axis), angle(rng));
    rotated = true;
  }
  throw Error(ErrorCode::Exhausted, "could not break the tie on the extreme vertex");
}

std::vector<FaceSide> extract_chamber(const EmbeddedComplex& X, const std::vector<EdgeFan>& fans,
                                      FaceSide start) {
  const SimplicialComplex& K = X.complex();
  if (start.face >= K.face_count()) throw Error(ErrorCode::InvalidArgument, "face id out of range");
  std::vector<bool> seen(2 * K.face_count(), false);
  std::vector<FaceSide> out;
  std::deque<FaceSide> queue{start};
  seen[start.index()] = true;
  while (!queue.empty()) {
    const FaceSide cur = queue.front();
    queue.pop_front();
    out.push_back(cur);
    for (EdgeId e : K.face_edges(cur.face)) {
      const FaceSide next = upward_continuation(fans[e], cur);
      if (!seen[next.index()]) {
        seen[next.index()] = true;
        queue.push_back(next);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const FaceSide& a, const FaceSide& b) { return a.index() < b.index(); });
  return out;
}

std::vector<FaceSide> extract_chamber(const EmbeddedComplex& X, FaceSide start) {
  return extract_chamber(X, all_edge_fans(X), start);
}

}  // namespace selfix
