#include "selfix/retriangulate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "selfix/error.hpp"
#include "selfix/parallel.hpp"

namespace selfix {

namespace {

// Signed distance of p from the line through a and b.
double side(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 d = b - a;
  return cross(d, p - a) / norm(d);
}

bool strictly_opposite(double s, double t, double eps) {
  return (s > eps && t < -eps) || (s < -eps && t > eps);
}

bool proper_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double eps) {
  return strictly_opposite(side(a, b, c), side(a, b, d), eps) &&
         strictly_opposite(side(c, d, a), side(c, d, b), eps);
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + d * t));
}

struct Box2 {
  double x0, y0, x1, y1;
  bool overlaps(const Box2& o, double pad) const {
    return x0 <= o.x1 + pad && o.x0 <= x1 + pad && y0 <= o.y1 + pad && o.y0 <= y1 + pad;
  }
  bool contains(const Vec2& p, double pad) const {
    return p.x >= x0 - pad && p.x <= x1 + pad && p.y >= y0 - pad && p.y <= y1 + pad;
  }
};

Box2 box_of(const Vec2& a, const Vec2& b) {
  return {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
}

// Midpoint test for candidate edges: strictly inside the polygon formed by
// the boundary edges (crossing number), and not within eps of it.
bool inside_boundary(const PlanarSubdivision& l, const std::vector<Vec2>& uv, const Vec2& p, double eps) {
  bool inside = false;
  for (std::size_t e = 0; e < l.edges.size(); ++e) {
    if (!l.boundary[e]) continue;
    const Vec2& a = uv[l.edges[e][0]];
    const Vec2& b = uv[l.edges[e][1]];
    if (segment_distance(p, a, b) <= eps) return false;
    if ((a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)) inside = !inside;
  }
  return inside;
}

std::vector<Vec2> projected(const PlanarSubdivision& l) {
  std::vector<Vec2> out;
  out.reserve(l.vertices.size());
  for (const Point3& p : l.vertices) out.push_back(l.project(p));
  return out;
}

// Replaces every edge listed in `splits` by the chain through its split
// vertices, ordered along the edge.
void apply_splits(PlanarSubdivision& l, const std::map<std::size_t, std::vector<std::uint32_t>>& splits) {
  const auto uv = projected(l);
  std::vector<PlanarEdge> edges;
  std::vector<bool> boundary;
  for (std::size_t e = 0; e < l.edges.size(); ++e) {
    auto it = splits.find(e);
    const auto [a, b] = l.edges[e];
    if (it == splits.end()) {
      edges.push_back(l.edges[e]);
      boundary.push_back(l.boundary[e]);
      continue;
    }
    std::vector<std::uint32_t> mids;
    for (std::uint32_t v : it->second) {
      if (v != a && v != b) mids.push_back(v);
    }
    const Vec2 d = uv[b] - uv[a];
    std::sort(mids.begin(), mids.end(), [&](std::uint32_t p, std::uint32_t q) {
      const double tp = dot(uv[p] - uv[a], d);
      const double tq = dot(uv[q] - uv[a], d);
      return tp != tq ? tp < tq : p < q;
    });
    mids.erase(std::unique(mids.begin(), mids.end()), mids.end());
    std::uint32_t prev = a;
    for (std::uint32_t v : mids) {
      edges.push_back({prev, v});
      boundary.push_back(l.boundary[e]);
      prev = v;
    }
    edges.push_back({prev, b});
    boundary.push_back(l.boundary[e]);
  }
  l.edges = std::move(edges);
  l.boundary = std::move(boundary);
}

void dedupe_edges(PlanarSubdivision& l) {
  std::map<PlanarEdge, std::size_t> seen;
  std::vector<PlanarEdge> edges;
  std::vector<bool> boundary;
  for (std::size_t e = 0; e < l.edges.size(); ++e) {
    auto [a, b] = l.edges[e];
    if (a == b) continue;
    const PlanarEdge key{std::min(a, b), std::max(a, b)};
    auto [it, inserted] = seen.try_emplace(key, edges.size());
    if (inserted) {
      edges.push_back(key);
      boundary.push_back(l.boundary[e]);
    } else if (l.boundary[e]) {
      boundary[it->second] = true;
    }
  }
  l.edges = std::move(edges);
  l.boundary = std::move(boundary);
}

}  // namespace

std::size_t PlanarSubdivision::boundary_edge_count() const {
  return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), true));
}

PlanarSubdivision make_subdivision(const Triangle& face, std::span<const Constraint> constraints,
                                   const Tolerance& tol) {
  PlanarSubdivision l;
  const Plane P = plane_of_triangle(face[0], face[1], face[2], tol);
  l.origin = face[0];
  l.normal = P.normal;
  l.ex = normalized(face[1] - face[0]);
  l.ey = cross(l.normal, l.ex);
  l.vertices = {face[0], face[1], face[2]};
  l.edges = {{0, 1}, {1, 2}, {2, 0}};
  l.boundary = {true, true, true};
  for (const Constraint& c : constraints) {
    const auto i = static_cast<std::uint32_t>(l.vertices.size());
    l.vertices.push_back(c.p0);
    l.vertices.push_back(c.p1);
    l.edges.push_back({i, i + 1});
    l.boundary.push_back(false);
  }
  return l;
}

PlanarSubdivision clean_data(PlanarSubdivision l, const Tolerance& tol) {
  PointIndex index(tol.eps_point);
  std::vector<std::uint32_t> remap(l.vertices.size());
  for (std::size_t v = 0; v < l.vertices.size(); ++v) remap[v] = index.find_or_insert(l.vertices[v]).first;
  l.vertices = index.points();
  for (auto& e : l.edges) e = {remap[e[0]], remap[e[1]]};
  dedupe_edges(l);
  return l;
}

PlanarSubdivision fix_planar_intersections(PlanarSubdivision l, const Tolerance& tol) {
  l = clean_data(std::move(l), tol);
  const double eps = tol.eps_point;
  for (int round = 0; round < 512; ++round) {
    const auto uv = projected(l);
    std::vector<Box2> boxes;
    boxes.reserve(l.edges.size());
    for (const auto& [a, b] : l.edges) boxes.push_back(box_of(uv[a], uv[b]));

    std::map<std::size_t, std::vector<std::uint32_t>> splits;
    for (std::size_t e = 0; e < l.edges.size(); ++e) {
      const auto [a, b] = l.edges[e];
      for (std::uint32_t v = 0; v < uv.size(); ++v) {
        if (v == a || v == b || !boxes[e].contains(uv[v], eps)) continue;
        if (norm(uv[v] - uv[a]) <= eps || norm(uv[v] - uv[b]) <= eps) continue;
        if (segment_distance(uv[v], uv[a], uv[b]) <= eps) splits[e].push_back(v);
      }
    }
    if (!splits.empty()) {
      apply_splits(l, splits);
      dedupe_edges(l);
      continue;
    }

    PointIndex index(eps);
    for (const Point3& p : l.vertices) index.insert(p);
    for (std::size_t e = 0; e < l.edges.size(); ++e) {
      const auto [a, b] = l.edges[e];
      for (std::size_t f = e + 1; f < l.edges.size(); ++f) {
        const auto [c, d] = l.edges[f];
        if (a == c || a == d || b == c || b == d) continue;
        if (!boxes[e].overlaps(boxes[f], eps)) continue;
        if (!proper_cross(uv[a], uv[b], uv[c], uv[d], eps)) continue;
        const double sc = side(uv[a], uv[b], uv[c]);
        const double sd = side(uv[a], uv[b], uv[d]);
        const Point3 p = lerp(l.vertices[c], l.vertices[d], sc / (sc - sd));
        const std::uint32_t v = index.find_or_insert(p).first;
        if (v == l.vertices.size()) l.vertices.push_back(p);
        splits[e].push_back(v);
        splits[f].push_back(v);
      }
    }
    if (splits.empty()) return l;
    apply_splits(l, splits);
    dedupe_edges(l);
  }
  throw Error(ErrorCode::Exhausted, "planar intersection fixing did not reach a fixed point");
}

std::size_t required_inner_edges(std::size_t V, std::size_t E_boundary, std::size_t E_total) {
  const long target = 3 * static_cast<long>(V) - 2 * static_cast<long>(E_boundary) - 3;
  const long present = static_cast<long>(E_total) - static_cast<long>(E_boundary);
  const long need = target - present;
  if (need < 0) {
    throw Error(ErrorCode::NegativeDeficit,
                "subdivision already has " + std::to_string(present) + " inner edges, at most " +
                    std::to_string(target) + " fit in a disc");
  }
  return static_cast<std::size_t>(need);
}

PlanarSubdivision triangulate_disc(PlanarSubdivision l, const Tolerance& tol) {
  std::size_t need = required_inner_edges(l.vertices.size(), l.boundary_edge_count(), l.edges.size());
  if (need == 0) return l;
  const double eps = tol.eps_point;
  const auto uv = projected(l);
  const std::size_t nv = uv.size();

  std::set<PlanarEdge> present(l.edges.begin(), l.edges.end());
  struct Candidate {
    double length;
    std::uint32_t a, b;
  };
  std::vector<Candidate> candidates;
  for (std::uint32_t a = 0; a < nv; ++a) {
    for (std::uint32_t b = a + 1; b < nv; ++b) {
      if (!present.count({a, b})) candidates.push_back({distance(l.vertices[a], l.vertices[b]), a, b});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.length != y.length) return x.length < y.length;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  std::vector<Box2> boxes;
  for (const auto& [a, b] : l.edges) boxes.push_back(box_of(uv[a], uv[b]));

  for (const Candidate& c : candidates) {
    if (need == 0) break;
    const Vec2& pa = uv[c.a];
    const Vec2& pb = uv[c.b];
    const Vec2 mid = (pa + pb) * 0.5;
    bool ok = inside_boundary(l, uv, mid, eps);
    const Box2 cb = box_of(pa, pb);
    for (std::uint32_t v = 0; ok && v < nv; ++v) {
      if (v == c.a || v == c.b || !cb.contains(uv[v], eps)) continue;
      if (segment_distance(uv[v], pa, pb) <= eps) ok = false;
    }
    for (std::size_t e = 0; ok && e < l.edges.size(); ++e) {
      const auto [x, y] = l.edges[e];
      if (x == c.a || x == c.b || y == c.a || y == c.b) continue;
      if (!cb.overlaps(boxes[e], eps)) continue;
      if (proper_cross(pa, pb, uv[x], uv[y], eps)) ok = false;
    }
    if (!ok) continue;
    l.edges.push_back({c.a, c.b});
    l.boundary.push_back(false);
    boxes.push_back(cb);
    --need;
  }
  if (need > 0) {
    throw Error(ErrorCode::Exhausted,
                "candidate edges ran out with " + std::to_string(need) + " inner edge(s) missing");
  }
  return l;
}

std::vector<Triple> extract_triangles(const PlanarSubdivision& l) {
  const auto uv = projected(l);
  const std::size_t nv = uv.size();
  std::vector<std::vector<std::uint32_t>> around(nv);
  for (const auto& [a, b] : l.edges) {
    around[a].push_back(b);
    around[b].push_back(a);
  }
  for (std::uint32_t v = 0; v < nv; ++v) {
    auto angle = [&](std::uint32_t w) {
      const Vec2 d = uv[w] - uv[v];
      return std::atan2(d.y, d.x);
    };
    std::sort(around[v].begin(), around[v].end(),
              [&](std::uint32_t p, std::uint32_t q) { return angle(p) < angle(q); });
  }
  auto next_of = [&](std::uint32_t u, std::uint32_t v) {
    // Face to the left of u->v continues along the neighbour of v that
    // precedes u counter-clockwise.
    const auto& ring = around[v];
    const auto pos = static_cast<std::size_t>(std::find(ring.begin(), ring.end(), u) - ring.begin());
    return ring[(pos + ring.size() - 1) % ring.size()];
  };

  std::set<std::pair<std::uint32_t, std::uint32_t>> visited;
  std::vector<Triple> out;
  for (std::uint32_t u = 0; u < nv; ++u) {
    for (std::uint32_t v : around[u]) {
      if (visited.count({u, v})) continue;
      std::vector<std::uint32_t> cycle;
      std::uint32_t a = u;
      std::uint32_t b = v;
      while (!visited.count({a, b})) {
        visited.insert({a, b});
        cycle.push_back(a);
        const std::uint32_t c = next_of(a, b);
        a = b;
        b = c;
        if (cycle.size() > 2 * l.edges.size() + 2) break;
      }
      double area = 0.0;
      for (std::size_t i = 0; i < cycle.size(); ++i) area += cross(uv[cycle[i]], uv[cycle[(i + 1) % cycle.size()]]);
      if (area <= 0.0) continue;
      if (cycle.size() != 3) {
        throw Error(ErrorCode::NonTriangularCell,
                    "cell with " + std::to_string(cycle.size()) + " sides after triangulation");
      }
      out.push_back({cycle[0], cycle[1], cycle[2]});
    }
  }
  std::sort(out.begin(), out.end(), [](const Triple& x, const Triple& y) { return sorted_triple(x) < sorted_triple(y); });
  return out;
}

std::vector<Triangle> retriangulate_face(const Triangle& face, std::span<const Constraint> constraints,
                                         const Tolerance& tol) {
  if (constraints.empty()) return {face};
  PlanarSubdivision l = make_subdivision(face, constraints, tol);
  l = fix_planar_intersections(std::move(l), tol);
  l = triangulate_disc(std::move(l), tol);
  std::vector<Triangle> out;
  for (const Triple& t : extract_triangles(l)) out.push_back({l.vertices[t[0]], l.vertices[t[1]], l.vertices[t[2]]});
  return out;
}

std::vector<std::vector<Triangle>> retriangulate_faces(const EmbeddedComplex& X,
                                                       const IntersectionSet& hits,
                                                       const Tolerance& tol, unsigned jobs) {
  const std::size_t nf = X.complex().face_count();
  std::vector<std::vector<Triangle>> out(nf);
  parallel_for(nf, jobs, [&](std::size_t f) {
    const auto fid = static_cast<FaceId>(f);
    std::span<const Constraint> cs;
    if (f < hits.per_face.size()) cs = hits.per_face[f];
    out[f] = retriangulate_face(X.triangle(fid), cs, tol);
  });
  return out;
}

EmbeddedComplex rebuild_complex(const EmbeddedComplex& X,
                                const std::vector<std::vector<Triangle>>& per_face,
                                const Tolerance& tol, const RebuildOptions& opts) {
  PointIndex index(tol.eps_point);
  for (const Point3& p : X.coords()) index.insert(p);
  std::vector<Triple> faces;
  std::set<Triple> seen;
  for (const auto& tris : per_face) {
    for (const Triangle& t : tris) {
      Triple ids{};
      for (std::size_t i = 0; i < 3; ++i) ids[i] = index.find_or_insert(t[i]).first;
      if (ids[0] == ids[1] || ids[1] == ids[2] || ids[0] == ids[2]) continue;
      if (seen.insert(sorted_triple(ids)).second) faces.push_back(ids);
    }
  }
  EmbeddedComplex out = EmbeddedComplex::from_faces(index.points(), faces, tol);
  if (opts.strict_recheck) {
    const IntersectionSet again = all_intersections(out, tol, {opts.jobs});
    if (!again.empty()) {
      auto pairs = again.offending_pairs();
      std::vector<std::array<std::uint32_t, 2>> items(pairs.begin(), pairs.end());
      const std::string msg = std::to_string(items.size()) +
                              " face pair(s) still intersect after retriangulation; try a larger eps_point";
      throw Error(ErrorCode::StillIntersecting, msg, std::move(items));
    }
  }
  return out;
}

}  // namespace selfix
