#include "selfix/ramify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "selfix/chambers.hpp"
#include "selfix/error.hpp"
#include "selfix/intersect.hpp"
#include "selfix/outerhull.hpp"

namespace selfix {

namespace {

std::vector<std::uint32_t> nonmanifold_degree(const SimplicialComplex& K, const std::vector<EdgeId>& nm) {
  std::vector<std::uint32_t> deg(K.vertex_count(), 0);
  for (EdgeId e : nm) {
    ++deg[K.edge(e)[0]];
    ++deg[K.edge(e)[1]];
  }
  return deg;
}

VertexId other_end(const SimplicialComplex& K, EdgeId e, VertexId v) {
  const EdgeKey& k = K.edge(e);
  return k[0] == v ? k[1] : k[0];
}

Vec3 apex_average(const EmbeddedComplex& X, FaceId f1, FaceId f2, EdgeId e, VertexId v) {
  const SimplicialComplex& K = X.complex();
  const Point3& o = X.point(v);
  return (X.point(K.apex(f1, e)) - o) * 0.5 + (X.point(K.apex(f2, e)) - o) * 0.5;
}

// Mean over faces of the half-sums of the offsets to the two other vertices.
Vec3 umbrella_direction(const EmbeddedComplex& X, VertexId v, const std::vector<FaceId>& faces) {
  const SimplicialComplex& K = X.complex();
  Vec3 sum;
  for (FaceId f : faces) {
    for (VertexId w : K.face(f)) {
      if (w != v) sum += (X.point(w) - X.point(v)) * 0.5;
    }
  }
  return sum / static_cast<double>(faces.size());
}

struct LocalUnion {
  std::vector<std::uint32_t> parent;
  explicit LocalUnion(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

using FacePair = std::array<FaceId, 2>;

// Components of X_2(v) when faces are joined across manifold edges through v
// and across the given pairs at non-manifold edges. Sorted by lowest face.
std::vector<std::vector<FaceId>> cut_components(const SimplicialComplex& K, VertexId v,
                                                const std::map<EdgeId, std::vector<FacePair>>& pairs) {
  const std::vector<FaceId>& local = K.vertex_faces(v);
  auto pos = [&](FaceId f) {
    return static_cast<std::uint32_t>(std::find(local.begin(), local.end(), f) - local.begin());
  };
  LocalUnion uf(local.size());
  for (EdgeId e : K.vertex_edges(v)) {
    const auto& ef = K.edge_faces(e);
    auto it = pairs.find(e);
    if (it != pairs.end()) {
      for (const FacePair& p : it->second) uf.unite(pos(p[0]), pos(p[1]));
    } else if (ef.size() == 2) {
      uf.unite(pos(ef[0]), pos(ef[1]));
    }
  }
  std::map<std::uint32_t, std::vector<FaceId>> groups;
  for (std::uint32_t i = 0; i < local.size(); ++i) groups[uf.find(i)].push_back(local[i]);
  std::vector<std::vector<FaceId>> out;
  for (auto& [root, fs] : groups) {
    std::sort(fs.begin(), fs.end());
    out.push_back(std::move(fs));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

SplitResult apply_plan(const EmbeddedComplex& X, SplitPlan plan, const Tolerance& tol) {
  const SimplicialComplex& K = X.complex();
  std::vector<Point3> coords = X.coords();
  std::vector<Triple> faces = K.faces();
  for (const VertexSplit& s : plan.vertices) {
    for (std::size_t a = 0; a < s.ids.size(); ++a) {
      const Point3 p = X.point(s.original) + s.shifts[a];
      if (s.ids[a] == s.original) {
        coords[s.original] = p;
      } else {
        if (coords.size() != s.ids[a]) throw Error(ErrorCode::InvalidArgument, "split ids are not dense");
        coords.push_back(p);
      }
      for (FaceId f : s.faces[a]) {
        for (VertexId& w : faces[f]) {
          if (w == s.original) w = s.ids[a];
        }
      }
    }
  }
  plan.added_vertices = coords.size() - K.vertex_count();
  EmbeddedComplex Y(SimplicialComplex::build(std::move(faces)), std::move(coords), tol);
  plan.duplicated_edges = Y.complex().edge_count() - K.edge_count();
  return {std::move(Y), std::move(plan)};
}

}  // namespace

EdgeClassification classify_edges(const SimplicialComplex& X) {
  const std::vector<EdgeId> nm = nonmanifold_edges(X);
  const auto deg = nonmanifold_degree(X, nm);
  EdgeClassification c;
  for (EdgeId e : nm) {
    const int touching = (deg[X.edge(e)[0]] > 1) + (deg[X.edge(e)[1]] > 1);
    (touching == 2 ? c.inner : touching == 1 ? c.outer : c.isolated).push_back(e);
  }
  return c;
}

EdgeClassification classify_nonmanifold_edges(const SimplicialComplex& X) {
  EdgeClassification c = classify_edges(X);
  if (!c.isolated.empty()) {
    std::vector<std::array<std::uint32_t, 2>> items;
    for (EdgeId e : c.isolated) items.push_back(X.edge(e));
    throw Error(ErrorCode::IsolatedNonManifoldEdge,
                std::to_string(c.isolated.size()) + " non-manifold edge(s) touch no other non-manifold edge",
                std::move(items));
  }
  return c;
}

std::vector<NonManifoldPath> nonmanifold_paths(const EmbeddedComplex& X) {
  const SimplicialComplex& K = X.complex();
  const std::vector<EdgeId> nm = nonmanifold_edges(K);
  const auto deg = nonmanifold_degree(K, nm);
  std::set<EdgeId> nm_set(nm.begin(), nm.end());

  // partner[(v, e)]: the edge continuing e through v.
  std::map<std::pair<VertexId, EdgeId>, EdgeId> partner;
  for (VertexId v = 0; v < K.vertex_count(); ++v) {
    if (deg[v] < 2) continue;
    std::vector<EdgeId> inc;
    for (EdgeId e : K.vertex_edges(v)) {
      if (nm_set.count(e)) inc.push_back(e);
    }
    std::sort(inc.begin(), inc.end());
    double best = -2.0;
    std::pair<EdgeId, EdgeId> choice{inc[0], inc[1]};
    for (std::size_t i = 0; i < inc.size(); ++i) {
      for (std::size_t j = i + 1; j < inc.size(); ++j) {
        const Vec3 in = normalized(X.point(v) - X.point(other_end(K, inc[i], v)));
        const Vec3 out = normalized(X.point(other_end(K, inc[j], v)) - X.point(v));
        const double c = dot(in, out);
        if (c > best + 1e-12) {
          best = c;
          choice = {inc[i], inc[j]};
        }
      }
    }
    partner[{v, choice.first}] = choice.second;
    partner[{v, choice.second}] = choice.first;
  }

  std::set<EdgeId> used;
  std::vector<NonManifoldPath> paths;
  auto walk = [&](EdgeId e, VertexId start) {
    NonManifoldPath p;
    p.vertices.push_back(start);
    VertexId v = start;
    for (;;) {
      used.insert(e);
      p.edges.push_back(e);
      v = other_end(K, e, v);
      p.vertices.push_back(v);
      auto it = partner.find({v, e});
      if (it == partner.end()) break;
      if (used.count(it->second)) {
        p.circle = v == start;
        break;
      }
      e = it->second;
    }
    for (VertexId w : p.vertices) p.junction.push_back(deg[w] > 2);
    paths.push_back(std::move(p));
  };
  for (EdgeId e : nm) {
    if (used.count(e)) continue;
    const EdgeKey& k = K.edge(e);
    if (!partner.count({k[0], e})) {
      walk(e, k[0]);
    } else if (!partner.count({k[1], e})) {
      walk(e, k[1]);
    }
  }
  for (EdgeId e : nm) {
    if (!used.count(e)) walk(e, K.edge(e)[0]);
  }
  return paths;
}

Vec3 split_direction(const EmbeddedComplex& X, EdgeId e, std::optional<VertexId> endpoint,
                     const ChamberSet* chambers) {
  const SimplicialComplex& K = X.complex();
  if (e >= K.edge_count()) throw Error(ErrorCode::InvalidArgument, "edge id out of range");
  const EdgeKey& k = K.edge(e);
  const VertexId v1 = endpoint.value_or(k[0]);
  if (v1 != k[0] && v1 != k[1]) throw Error(ErrorCode::InvalidArgument, "endpoint is not on the edge");
  std::optional<ChamberSet> own;
  if (!chambers) chambers = &own.emplace(all_chambers(X));
  const EdgeFan fan = edge_fan(X, e);
  const Point3& u = X.point(k[0]);
  const Vec3 d = X.point(k[1]) - u;
  for (const FanEntry& entry : fan.entries) {
    // n_f is the outward normal: the side of f on the unbounded chamber.
    Side out = Side::Positive;
    if (chambers->chamber_of({entry.face, Side::Positive}) != 0) {
      if (chambers->chamber_of({entry.face, Side::Negative}) != 0) continue;
      out = Side::Negative;
    }
    const Vec3 n = out == Side::Positive ? X.face_normal(entry.face) : -X.face_normal(entry.face);
    Vec3 v = X.point(K.apex(entry.face, e)) - u;
    v = v - d * (dot(v, d) / dot(d, d));
    if (det3(v, d, n) <= 0.0) continue;
    const FaceSide next = upward_continuation(fan, {entry.face, out});
    return apex_average(X, entry.face, next.face, e, v1);
  }
  throw Error(ErrorCode::PreconditionViolated,
              "no face on edge " + std::to_string(e) + " faces the unbounded chamber with det[v, e, n] > 0",
              {k});
}

SplitResult split_nonmanifold_paths(const EmbeddedComplex& X, double eps, const Tolerance& tol,
                                    std::uint64_t seed) {
  const SimplicialComplex& K = X.complex();
  const std::vector<EdgeId> nm = nonmanifold_edges(K);
  if (nm.empty()) return {X, {}};
  classify_nonmanifold_edges(K);
  const auto deg = nonmanifold_degree(K, nm);
  const ChamberSet C = all_chambers(X, seed);

  std::map<EdgeId, std::vector<FacePair>> pairs;
  for (EdgeId e : nm) {
    const EdgeFan fan = edge_fan(X, e);
    const std::size_t n = fan.entries.size();
    std::vector<FacePair>& ps = pairs[e];
    std::vector<int> uses(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const FanEntry& a = fan.entries[i];
      const FanEntry& b = fan.entries[(i + 1) % n];
      const Side toward_b = a.positive_ccw ? Side::Positive : Side::Negative;
      if (C.chamber_of({a.face, toward_b}) == 0) continue;
      ps.push_back({a.face, b.face});
      ++uses[i];
      ++uses[(i + 1) % n];
    }
    if (std::any_of(uses.begin(), uses.end(), [](int u) { return u != 1; })) {
      throw Error(ErrorCode::PreconditionViolated,
                  "faces around non-manifold edge " + std::to_string(e) +
                      " do not alternate between the unbounded chamber and the rest; expected an outer hull",
                  {K.edge(e)});
    }
  }

  std::map<VertexId, std::vector<std::vector<FaceId>>> parts;
  std::set<VertexId> split;
  for (EdgeId e : nm) {
    for (VertexId v : K.edge(e)) {
      if (!parts.count(v)) parts[v] = cut_components(K, v, pairs);
      if (deg[v] >= 2 && parts[v].size() >= 2) split.insert(v);
    }
  }
  auto part_of = [&](VertexId v, FaceId f) -> std::size_t {
    if (!split.count(v)) return 0;
    const auto& ps = parts[v];
    for (std::size_t a = 0; a < ps.size(); ++a) {
      if (std::binary_search(ps[a].begin(), ps[a].end(), f)) return a;
    }
    return 0;
  };
  auto separated = [&](EdgeId e) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const FacePair& p : pairs[e]) {
      const auto key = std::make_pair(part_of(K.edge(e)[0], p[0]), part_of(K.edge(e)[1], p[0]));
      if (!seen.insert(key).second) return false;
    }
    return true;
  };
  // An end vertex is split too when the far end alone cannot separate the copies.
  for (int round = 0; round < 2; ++round) {
    for (EdgeId e : nm) {
      if (separated(e)) continue;
      for (VertexId v : K.edge(e)) {
        if (parts[v].size() >= 2) split.insert(v);
      }
    }
  }
  for (EdgeId e : nm) {
    if (!separated(e)) {
      throw Error(ErrorCode::PreconditionViolated,
                  "cannot separate the faces around non-manifold edge " + std::to_string(e), {K.edge(e)});
    }
  }

  SplitPlan plan;
  auto next_id = static_cast<VertexId>(K.vertex_count());
  for (VertexId v : split) {
    VertexSplit s;
    s.original = v;
    s.faces = parts[v];
    for (std::size_t a = 0; a < s.faces.size(); ++a) {
      const std::vector<FaceId>& fs = s.faces[a];
      if (a == 0) {
        s.ids.push_back(v);
        s.shifts.push_back({});
        continue;
      }
      Vec3 sum;
      int count = 0;
      for (EdgeId e : K.vertex_edges(v)) {
        auto it = pairs.find(e);
        if (it == pairs.end()) continue;
        for (const FacePair& p : it->second) {
          if (!std::binary_search(fs.begin(), fs.end(), p[0])) continue;
          sum += apex_average(X, p[0], p[1], e, v);
          ++count;
        }
      }
      const Vec3 dir = count > 0 ? sum / static_cast<double>(count) : umbrella_direction(X, v, fs);
      s.ids.push_back(next_id++);
      s.shifts.push_back(dir * eps);
    }
    plan.vertices.push_back(std::move(s));
  }
  return apply_plan(X, std::move(plan), tol);
}

SplitResult split_nonmanifold_vertices(const EmbeddedComplex& X, double eps, const Tolerance& tol) {
  const SimplicialComplex& K = X.complex();
  const std::vector<VertexId> bad = nonmanifold_vertices(K);
  if (bad.empty()) return {X, {}};
  SplitPlan plan;
  auto next_id = static_cast<VertexId>(K.vertex_count());
  for (VertexId v : bad) {
    auto umbrellas = local_umbrellas(K, v);
    for (auto& u : umbrellas) std::sort(u.begin(), u.end());
    std::sort(umbrellas.begin(), umbrellas.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    VertexSplit s;
    s.original = v;
    for (std::size_t a = 0; a < umbrellas.size(); ++a) {
      s.ids.push_back(a == 0 ? v : next_id++);
      s.shifts.push_back(umbrella_direction(X, v, umbrellas[a]) * eps);
    }
    s.faces = std::move(umbrellas);
    plan.vertices.push_back(std::move(s));
  }
  return apply_plan(X, std::move(plan), tol);
}

namespace {

RamifyResult ramify_once(const EmbeddedComplex& X, const Tolerance& tol, const RamifyOptions& opts, double eps) {
  RamifyResult out;
  RamifyReport& r = out.report;
  r.epsilon = eps;
  const EdgeClassification c = classify_nonmanifold_edges(X.complex());
  r.inner_edges = c.inner.size();
  r.outer_edges = c.outer.size();
  r.paths = nonmanifold_paths(X);

  EmbeddedComplex Y = X;
  std::vector<VertexId> origin(X.complex().vertex_count());
  std::iota(origin.begin(), origin.end(), 0u);
  bool counted_vertices = false;
  for (int it = 0;; ++it) {
    const bool edges = !nonmanifold_edges(Y.complex()).empty();
    std::vector<VertexId> verts;
    if (!edges) {
      verts = nonmanifold_vertices(Y.complex());
      if (!counted_vertices) r.nonmanifold_vertices = verts.size();
      counted_vertices = true;
      if (verts.empty()) break;
    }
    if (it >= opts.max_iterations) {
      throw Error(ErrorCode::Exhausted, "non-manifold parts remain after " + std::to_string(it) + " passes");
    }
    SplitResult s = edges ? split_nonmanifold_paths(Y, eps, tol, opts.seed) : split_nonmanifold_vertices(Y, eps, tol);
    double largest = 0.0;
    for (const VertexSplit& v : s.plan.vertices) {
      for (std::size_t a = 0; a < v.ids.size(); ++a) {
        largest = std::max(largest, norm(v.shifts[a]));
        if (v.ids[a] != v.original) origin.push_back(origin[v.original]);
      }
    }
    r.displacement_bound += largest;
    if (opts.strict_recheck) {
      const IntersectionSet hits = all_intersections(s.complex, tol, {opts.jobs});
      if (!hits.empty()) {
        throw Error(ErrorCode::NewIntersectionIntroduced,
                    "shifting by epsilon " + std::to_string(eps) + " created " +
                        std::to_string(hits.segments.size()) + " intersection(s)",
                    hits.offending_pairs());
      }
    }
    r.passes.push_back(edges ? "edges" : "vertices");
    r.plans.push_back(std::move(s.plan));
    Y = std::move(s.complex);
  }
  for (VertexId v = 0; v < Y.complex().vertex_count(); ++v) {
    r.max_displacement = std::max(r.max_displacement, distance(Y.point(v), X.point(origin[v])));
  }
  out.surface = std::move(Y);
  return out;
}

}  // namespace

RamifyResult ramify(const EmbeddedComplex& X, const Tolerance& tol, const RamifyOptions& opts) {
  double eps = opts.epsilon.value_or(1e-4 * X.bounds().diagonal());
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  for (int attempt = 0;; ++attempt) {
    try {
      RamifyResult r = ramify_once(X, tol, opts, eps);
      r.report.backoffs = attempt;
      return r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NewIntersectionIntroduced || attempt >= opts.max_backoff) throw;
      eps *= 0.5;
    }
  }
}

std::string format_report(const RamifyReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "epsilon " << r.epsilon << " backoffs " << r.backoffs << "\n";
  os << "edges inner " << r.inner_edges << " outer " << r.outer_edges << "\n";
  for (std::size_t i = 0; i < r.paths.size(); ++i) {
    const NonManifoldPath& p = r.paths[i];
    os << "path " << i << (p.circle ? " circle" : " chain") << " vertices";
    for (std::size_t k = 0; k < p.vertices.size(); ++k) os << ' ' << p.vertices[k] << (p.junction[k] ? "*" : "");
    os << "\n";
  }
  os << "nonmanifold_vertices " << r.nonmanifold_vertices << "\n";
  for (std::size_t i = 0; i < r.plans.size(); ++i) {
    const SplitPlan& plan = r.plans[i];
    os << "pass " << i << ' ' << r.passes[i] << " added_vertices " << plan.added_vertices << " duplicated_edges "
       << plan.duplicated_edges << "\n";
    for (const VertexSplit& s : plan.vertices) {
      os << "  split " << s.original;
      for (std::size_t a = 0; a < s.ids.size(); ++a) {
        os << " -> " << s.ids[a] << " (" << s.shifts[a].x << ' ' << s.shifts[a].y << ' ' << s.shifts[a].z << ")";
      }
      os << "\n";
    }
  }
  os << "max_displacement " << r.max_displacement << " bound " << r.displacement_bound << "\n";
  return os.str();
}

}  // namespace selfix
