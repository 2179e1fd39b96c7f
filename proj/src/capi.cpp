#include "selfix/selfix.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <set>
#include <string>

#include "selfix/chambers.hpp"
#include "selfix/error.hpp"
#include "selfix/fixtures.hpp"
#include "selfix/meshio.hpp"
#include "selfix/outerhull.hpp"
#include "selfix/pipeline.hpp"
#include "selfix/ramify.hpp"
#include "selfix/symmetry.hpp"

struct selfix_mesh {
  selfix::EmbeddedComplex X;
  selfix::Tolerance tol;
  std::vector<selfix::Triple> oriented;  // empty: orient on save when possible
};

struct selfix_group {
  std::vector<selfix::Mat3> matrices;
};

struct selfix_intersections {
  selfix::IntersectionSet set;
};

struct selfix_chambers {
  selfix::EmbeddedComplex X;
  selfix::ChamberSet C;
};

namespace {

thread_local std::string last_error;

template <class F>
int guard(F&& body) {
  try {
    body();
    last_error.clear();
    return SELFIX_OK;
  } catch (const selfix::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code()) + 1;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SELFIX_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SELFIX_INTERNAL_ERROR;
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

selfix::PipelineConfig parse_config(const char* text) {
  if (!text || !*text) return {};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw selfix::Error(selfix::ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  return selfix::config_from_json(j);
}

selfix_mesh* wrap(selfix::EmbeddedComplex X, const selfix::Tolerance& tol, std::vector<selfix::Triple> oriented = {}) {
  return new selfix_mesh{std::move(X), tol, std::move(oriented)};
}

std::uint32_t parse_order(const std::string& s) {
  char* end = nullptr;
  const unsigned long n = std::strtoul(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || n < 1 || n > 100000) {
    throw selfix::Error(selfix::ErrorCode::InvalidArgument, "bad group order '" + s + "'");
  }
  return static_cast<std::uint32_t>(n);
}

}  // namespace

extern "C" {

const char* selfix_version(void) { return "1.0.0"; }

const char* selfix_last_error(void) { return last_error.c_str(); }

const char* selfix_status_name(int status) {
  if (status == SELFIX_OK) return "Ok";
  if (status == SELFIX_NULL_ARGUMENT) return "NullArgument";
  if (status == SELFIX_INTERNAL_ERROR) return "InternalError";
  if (status > 0 && status <= SELFIX_IO_ERROR) return selfix::to_string(static_cast<selfix::ErrorCode>(status - 1));
  return "Unknown";
}

void selfix_string_free(char* s) { std::free(s); }

int selfix_mesh_load(const char* path, double eps_point, selfix_mesh** out) {
  if (!path || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    selfix::LoadOptions opts;
    if (eps_point > 0.0) opts.eps_point = eps_point;
    selfix::Tolerance tol;
    selfix::EmbeddedComplex X = selfix::load_mesh(path, opts, &tol);
    *out = wrap(std::move(X), tol);
  });
}

int selfix_mesh_from_arrays(const double* xyz, size_t vertex_count, const uint32_t* triangles,
                            size_t triangle_count, double eps_point, selfix_mesh** out) {
  if (!xyz || !triangles || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    selfix::RawMesh raw;
    for (size_t i = 0; i < vertex_count; ++i) raw.points.push_back({xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]});
    for (size_t i = 0; i < triangle_count; ++i) {
      raw.faces.push_back({triangles[3 * i], triangles[3 * i + 1], triangles[3 * i + 2]});
      for (int k = 0; k < 3; ++k) {
        if (triangles[3 * i + k] >= vertex_count) {
          throw selfix::Error(selfix::ErrorCode::InvalidArgument, "triangle references missing vertex");
        }
      }
    }
    selfix::LoadOptions opts;
    if (eps_point > 0.0) opts.eps_point = eps_point;
    const selfix::Tolerance tol = selfix::tolerance_for(raw, opts);
    *out = wrap(selfix::weld(raw, tol), tol);
  });
}

int selfix_mesh_fixture(const char* name, selfix_mesh** out) {
  if (!name || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    const selfix::fixtures::Mesh m = selfix::fixtures::by_name(name);
    *out = wrap(m.embed(), m.tolerance());
  });
}

int selfix_fixture_names(char** out) {
  if (!out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    std::string s;
    for (const std::string& n : selfix::fixtures::names()) s += n + "\n";
    *out = copy_string(s);
  });
}

void selfix_mesh_free(selfix_mesh* m) { delete m; }

int selfix_mesh_counts(const selfix_mesh* m, size_t* vertices, size_t* edges, size_t* faces, long* euler) {
  if (!m) return SELFIX_NULL_ARGUMENT;
  const selfix::SimplicialComplex& K = m->X.complex();
  if (vertices) *vertices = K.vertex_count();
  if (edges) *edges = K.edge_count();
  if (faces) *faces = K.face_count();
  if (euler) *euler = K.euler_characteristic();
  return SELFIX_OK;
}

int selfix_mesh_vertices(const selfix_mesh* m, double* xyz) {
  if (!m || !xyz) return SELFIX_NULL_ARGUMENT;
  for (const selfix::Point3& p : m->X.coords()) {
    *xyz++ = p.x;
    *xyz++ = p.y;
    *xyz++ = p.z;
  }
  return SELFIX_OK;
}

int selfix_mesh_faces(const selfix_mesh* m, uint32_t* triangles) {
  if (!m || !triangles) return SELFIX_NULL_ARGUMENT;
  for (const selfix::Triple& t : m->X.complex().faces()) {
    for (selfix::VertexId v : t) *triangles++ = v;
  }
  return SELFIX_OK;
}

int selfix_mesh_eps_point(const selfix_mesh* m, double* eps_point) {
  if (!m || !eps_point) return SELFIX_NULL_ARGUMENT;
  *eps_point = m->tol.eps_point;
  return SELFIX_OK;
}

int selfix_mesh_inventory(const selfix_mesh* m, size_t* nonmanifold_edges, size_t* nonmanifold_vertices,
                          int* is_surface) {
  if (!m) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    const selfix::SimplicialComplex& K = m->X.complex();
    const size_t ne = selfix::nonmanifold_edges(K).size();
    if (nonmanifold_edges) *nonmanifold_edges = ne;
    if (nonmanifold_vertices) *nonmanifold_vertices = ne ? 0 : selfix::nonmanifold_vertices(K).size();
    if (is_surface) *is_surface = selfix::is_surface(K) ? 1 : 0;
  });
}

int selfix_mesh_save(const selfix_mesh* m, const char* path, const char* format) {
  if (!m || !path || !format) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    const selfix::MeshFormat f = selfix::parse_format(format);
    if (!m->oriented.empty()) {
      selfix::save_mesh(m->X.coords(), m->oriented, f, path);
    } else {
      selfix::save_mesh(m->X, f, path);
    }
  });
}

int selfix_group_load(const char* path, selfix_group** out) {
  if (!path || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] { *out = new selfix_group{selfix::read_group_file(path)}; });
}

int selfix_group_named(const char* name, selfix_group** out) {
  if (!name || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    namespace fx = selfix::fixtures;
    const std::string s = name;
    std::vector<selfix::Mat3> g;
    if (s == "identity") {
      g = fx::cyclic_group(1);
    } else if (s == "icosahedral") {
      g = fx::icosahedral_group();
    } else if (s.rfind("cyclic:", 0) == 0) {
      g = fx::cyclic_group(parse_order(s.substr(7)));
    } else if (s.rfind("dihedral:", 0) == 0) {
      g = fx::dihedral_group(parse_order(s.substr(9)));
    } else {
      throw selfix::Error(selfix::ErrorCode::InvalidArgument, "unknown group '" + s + "'");
    }
    *out = new selfix_group{std::move(g)};
  });
}

void selfix_group_free(selfix_group* g) { delete g; }

int selfix_group_order(const selfix_group* g, size_t* order) {
  if (!g || !order) return SELFIX_NULL_ARGUMENT;
  *order = g->matrices.size();
  return SELFIX_OK;
}

int selfix_group_save(const selfix_group* g, const char* path) {
  if (!g || !path) return SELFIX_NULL_ARGUMENT;
  return guard([&] { selfix::write_group_file(g->matrices, path); });
}

int selfix_group_verify(const selfix_mesh* m, const selfix_group* g, size_t* face_orbits, size_t* pair_representatives) {
  if (!m || !g) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    const selfix::SymmetryGroup G = selfix::verify_group(m->X, g->matrices, m->tol);
    const selfix::OrbitDecomposition O = selfix::face_orbits(m->X, G);
    if (face_orbits) *face_orbits = O.orbit_count();
    if (pair_representatives) *pair_representatives = O.pair_rep_count();
  });
}

int selfix_intersect(const selfix_mesh* m, const selfix_group* g, unsigned jobs, selfix_intersections** out) {
  if (!m || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    auto* s = new selfix_intersections;
    try {
      if (g) {
        const selfix::SymmetryGroup G = selfix::verify_group(m->X, g->matrices, m->tol);
        const selfix::OrbitDecomposition O = selfix::face_orbits(m->X, G);
        s->set = selfix::symmetric_all_intersections(m->X, G, O, m->tol, jobs);
      } else {
        s->set = selfix::all_intersections(m->X, m->tol, {jobs});
      }
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
  });
}

void selfix_intersections_free(selfix_intersections* s) { delete s; }

int selfix_intersections_counts(const selfix_intersections* s, size_t* segments, size_t* touches,
                                size_t* coplanar_pairs, size_t* pair_tests) {
  if (!s) return SELFIX_NULL_ARGUMENT;
  if (segments) *segments = s->set.segments.size();
  if (touches) *touches = s->set.touch_count;
  if (coplanar_pairs) *coplanar_pairs = s->set.coplanar_pairs;
  if (pair_tests) *pair_tests = s->set.pair_tests;
  return SELFIX_OK;
}

int selfix_intersections_segment(const selfix_intersections* s, size_t i, uint32_t faces[2], double points[6]) {
  if (!s || !faces || !points) return SELFIX_NULL_ARGUMENT;
  if (i >= s->set.segments.size()) {
    last_error = "segment index out of range";
    return SELFIX_INVALID_ARGUMENT;
  }
  const selfix::IntersectionSegment& seg = s->set.segments[i];
  faces[0] = seg.face_a;
  faces[1] = seg.face_b;
  const double v[6] = {seg.p0.x, seg.p0.y, seg.p0.z, seg.p1.x, seg.p1.y, seg.p1.z};
  std::memcpy(points, v, sizeof v);
  return SELFIX_OK;
}

int selfix_resolve(const selfix_mesh* m, const selfix_group* g, const char* config_json, selfix_mesh** out) {
  if (!m || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    const selfix::PipelineConfig config = parse_config(config_json);
    *out = wrap(selfix::resolve_intersections(m->X, m->tol, config, g ? &g->matrices : nullptr), m->tol);
  });
}

int selfix_repair(const selfix_mesh* m, const selfix_group* g, const char* config_json, selfix_mesh** out,
                  char** report_json) {
  if (!m || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    const selfix::PipelineConfig config = parse_config(config_json);
    selfix::RepairResult r = selfix::repair(m->X, m->tol, config, g ? &g->matrices : nullptr);
    if (report_json) {
      nlohmann::json j = selfix::to_json(r.report);
      j["text"] = selfix::format_report(r.report);
      j["config"] = selfix::to_json(config);
      *report_json = copy_string(j.dump(2));
    }
    *out = wrap(std::move(r.surface), m->tol, std::move(r.oriented));
  });
}

int selfix_outer_hull(const selfix_mesh* m, uint64_t seed, selfix_mesh** out) {
  if (!m || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    selfix::OuterHull H = selfix::outer_hull(m->X, m->tol, seed);
    *out = wrap(std::move(H.complex), m->tol, std::move(H.oriented));
  });
}

int selfix_fix_nonmanifold(const selfix_mesh* m, double eps, uint64_t seed, unsigned jobs, selfix_mesh** out,
                           char** report_text) {
  if (!m || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    selfix::RamifyOptions o;
    if (eps > 0.0) o.epsilon = eps;
    o.seed = seed;
    o.jobs = jobs;
    selfix::RamifyResult r = selfix::ramify(m->X, m->tol, o);
    if (report_text) *report_text = copy_string(selfix::format_report(r.report));
    *out = wrap(std::move(r.surface), m->tol);
  });
}

int selfix_initial_face(const selfix_mesh* m, uint64_t seed, uint32_t* face, double normal[3]) {
  if (!m || !face || !normal) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    const selfix::StartPair s = selfix::initial_face(m->X, seed);
    *face = s.face;
    normal[0] = s.normal.x;
    normal[1] = s.normal.y;
    normal[2] = s.normal.z;
  });
}

int selfix_chambers_compute(const selfix_mesh* m, uint64_t seed, selfix_chambers** out) {
  if (!m || !out) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    selfix::ChamberSet C = selfix::all_chambers(m->X, seed);
    *out = new selfix_chambers{m->X, std::move(C)};
  });
}

void selfix_chambers_free(selfix_chambers* c) { delete c; }

int selfix_chambers_bounded(const selfix_chambers* c, size_t* count) {
  if (!c || !count) return SELFIX_NULL_ARGUMENT;
  *count = c->C.bounded_count();
  return SELFIX_OK;
}

int selfix_chamber_info(const selfix_chambers* c, uint32_t id, double* volume, long* euler, double centroid[3],
                        size_t* vertices, size_t* faces) {
  if (!c) return SELFIX_NULL_ARGUMENT;
  if (id >= c->C.chambers.size()) {
    last_error = "no chamber " + std::to_string(id);
    return SELFIX_INVALID_ARGUMENT;
  }
  const selfix::Chamber& ch = c->C.chambers[id];
  if (volume) *volume = ch.volume;
  if (euler) *euler = ch.euler;
  if (centroid) {
    centroid[0] = ch.centroid.x;
    centroid[1] = ch.centroid.y;
    centroid[2] = ch.centroid.z;
  }
  std::set<selfix::VertexId> vs;
  std::set<selfix::FaceId> fs;
  for (const selfix::FaceSide& s : ch.sides) {
    fs.insert(s.face);
    for (selfix::VertexId v : c->X.complex().face(s.face)) vs.insert(v);
  }
  if (vertices) *vertices = vs.size();
  if (faces) *faces = fs.size();
  return SELFIX_OK;
}

int selfix_chambers_locate(const selfix_chambers* c, const double point[3], uint32_t* id) {
  if (!c || !point || !id) return SELFIX_NULL_ARGUMENT;
  return guard([&] { *id = selfix::locate_point(c->X, c->C, {point[0], point[1], point[2]}); });
}

int selfix_explode(const selfix_chambers* c, double magnitude, const char* dir, const char* format, char** manifest) {
  if (!c || !dir || !format || !manifest) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    const selfix::MeshFormat f = selfix::parse_format(format);
    const char* ext = f == selfix::MeshFormat::Off ? ".off" : ".stl";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw selfix::Error(selfix::ErrorCode::IOError, std::string("cannot create ") + dir + ": " + ec.message());
    std::string text;
    for (const selfix::ExplodedPiece& p : selfix::exploded_view(c->X, c->C, magnitude)) {
      const std::string file = "chamber_" + std::to_string(p.chamber) + ext;
      selfix::save_mesh(p.mesh.coords, p.mesh.faces, f, (std::filesystem::path(dir) / file).string());
      text += selfix::manifest_line(p, c->C.chambers[p.chamber], file) + "\n";
    }
    *manifest = copy_string(text);
  });
}

int selfix_bench(const selfix_mesh* m, const selfix_group* g, const char* name, int repetitions, unsigned jobs,
                 char** json) {
  if (!m || !g || !json) return SELFIX_NULL_ARGUMENT;
  return guard([&] {
    const selfix::BenchRow row = selfix::bench(name ? name : "mesh", m->X, m->tol, g->matrices, repetitions, jobs);
    *json = copy_string(selfix::to_json(row).dump());
  });
}

}  // extern "C"
