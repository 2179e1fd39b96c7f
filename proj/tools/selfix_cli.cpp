// selfix command-line front end. Talks to the library only through selfix.h.

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "selfix/selfix.h"

namespace {

struct Failure {
  int status;
  std::string message;
};

void check(int status) {
  if (status != SELFIX_OK) throw Failure{status, selfix_last_error()};
}

int exit_code(int status) {
  switch (status) {
    case SELFIX_OK:
      return 0;
    case SELFIX_ISOLATED_NONMANIFOLD_EDGE:
      return 4;
    case SELFIX_INVALID_ARGUMENT:
    case SELFIX_DEGENERATE_FACE:
    case SELFIX_NOT_CLOSED:
    case SELFIX_NOT_INJECTIVE:
    case SELFIX_NOT_ORTHOGONAL:
    case SELFIX_NOT_INVARIANT:
    case SELFIX_NOT_A_GROUP:
    case SELFIX_PARSE_ERROR:
    case SELFIX_IO_ERROR:
    case SELFIX_NULL_ARGUMENT:
      return 2;
    default:
      return 3;
  }
}

struct MeshDeleter {
  void operator()(selfix_mesh* m) const { selfix_mesh_free(m); }
};
struct GroupDeleter {
  void operator()(selfix_group* g) const { selfix_group_free(g); }
};
struct ChambersDeleter {
  void operator()(selfix_chambers* c) const { selfix_chambers_free(c); }
};
struct HitsDeleter {
  void operator()(selfix_intersections* s) const { selfix_intersections_free(s); }
};
using Mesh = std::unique_ptr<selfix_mesh, MeshDeleter>;
using Group = std::unique_ptr<selfix_group, GroupDeleter>;
using Chambers = std::unique_ptr<selfix_chambers, ChambersDeleter>;
using Hits = std::unique_ptr<selfix_intersections, HitsDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  selfix_string_free(s);
  return out;
}

struct Options {
  std::string input;
  std::string output;
  std::string format = "stl-binary";
  std::string group_file;
  std::string group_name;
  std::string config_file;
  std::string report_file;
  std::string dir = "chambers";
  std::optional<double> eps_point;
  std::optional<double> eps_split;
  double magnitude = 1.0;
  unsigned jobs = 1;
  bool strict_recheck = true;
  std::uint64_t seed = 1;
  int reps = 10;
  bool print_segments = false;
  std::vector<std::string> bench_items;
};

Mesh load_input(const Options& o) {
  selfix_mesh* m = nullptr;
  const std::string prefix = "fixture:";
  if (o.input.rfind(prefix, 0) == 0) {
    check(selfix_mesh_fixture(o.input.c_str() + prefix.size(), &m));
  } else {
    check(selfix_mesh_load(o.input.c_str(), o.eps_point.value_or(0.0), &m));
  }
  return Mesh(m);
}

Group load_group(const Options& o) {
  selfix_group* g = nullptr;
  if (!o.group_file.empty()) {
    check(selfix_group_load(o.group_file.c_str(), &g));
  } else if (!o.group_name.empty()) {
    check(selfix_group_named(o.group_name.c_str(), &g));
  }
  return Group(g);
}

nlohmann::json resolved_config(const Options& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw Failure{SELFIX_IO_ERROR, "cannot open " + o.config_file};
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Failure{SELFIX_PARSE_ERROR, o.config_file + ": " + e.what()};
    }
  }
  if (o.eps_point) j["eps_point"] = *o.eps_point;
  if (!j.contains("eps_point")) j["eps_point"] = nullptr;
  if (o.eps_split) j["eps_split"] = *o.eps_split;
  if (!j.contains("eps_split")) j["eps_split"] = nullptr;
  if (!o.group_file.empty()) j["group_file"] = o.group_file;
  if (!o.group_name.empty()) j["group_name"] = o.group_name;
  j["format"] = o.format;
  j["jobs"] = o.jobs;
  j["strict_recheck"] = o.strict_recheck;
  j["seed"] = o.seed;
  j["magnitude"] = o.magnitude;
  j["input"] = o.input;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{SELFIX_IO_ERROR, "cannot write " + path};
}

void print_counts(const char* label, const selfix_mesh* m) {
  size_t v = 0, e = 0, f = 0;
  long chi = 0;
  check(selfix_mesh_counts(m, &v, &e, &f, &chi));
  std::printf("%s%zu %zu %zu \xcf\x87=%ld\n", label, v, e, f, chi);
}

Mesh resolved(const Options& o, const selfix_mesh* m, const selfix_group* g) {
  selfix_mesh* out = nullptr;
  const std::string config = resolved_config(o).dump();
  check(selfix_resolve(m, g, config.c_str(), &out));
  return Mesh(out);
}

void cmd_inspect(const Options& o) {
  Mesh m = load_input(o);
  Group g = load_group(o);
  print_counts("", m.get());
  size_t ne = 0, nv = 0;
  int surface = 0;
  check(selfix_mesh_inventory(m.get(), &ne, &nv, &surface));
  std::printf("nonmanifold_edges %zu\n", ne);
  if (ne == 0) std::printf("nonmanifold_vertices %zu\n", nv);
  std::printf("surface %s\n", surface ? "yes" : "no");
  selfix_intersections* s = nullptr;
  check(selfix_intersect(m.get(), g.get(), o.jobs, &s));
  Hits hits(s);
  size_t segs = 0, touches = 0, coplanar = 0, tests = 0;
  check(selfix_intersections_counts(hits.get(), &segs, &touches, &coplanar, &tests));
  std::printf("intersections %zu\n", segs + coplanar);
}

void cmd_intersect(const Options& o) {
  Mesh m = load_input(o);
  Group g = load_group(o);
  selfix_intersections* s = nullptr;
  check(selfix_intersect(m.get(), g.get(), o.jobs, &s));
  Hits hits(s);
  size_t segs = 0, touches = 0, coplanar = 0, tests = 0;
  check(selfix_intersections_counts(hits.get(), &segs, &touches, &coplanar, &tests));
  std::printf("segments %zu touches %zu coplanar %zu pair_tests %zu\n", segs, touches, coplanar, tests);
  if (o.output.empty() && !o.print_segments) return;
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < segs; ++i) {
    uint32_t faces[2];
    double p[6];
    check(selfix_intersections_segment(hits.get(), i, faces, p));
    os << "seg " << faces[0] << ' ' << faces[1];
    for (double x : p) os << ' ' << x;
    os << '\n';
  }
  if (!o.output.empty()) {
    write_text(o.output, os.str());
  } else {
    std::fputs(os.str().c_str(), stdout);
  }
}

void cmd_repair(const Options& o) {
  Mesh m = load_input(o);
  Group g = load_group(o);
  const nlohmann::json config = resolved_config(o);
  const std::string text = config.dump();
  selfix_mesh* out = nullptr;
  char* report = nullptr;
  check(selfix_repair(m.get(), g.get(), text.c_str(), &out, &report));
  Mesh result(out);
  const nlohmann::json r = nlohmann::json::parse(take(report));
  check(selfix_mesh_save(result.get(), o.output.c_str(), o.format.c_str()));
  write_text(o.output + ".config.json", config.dump(2) + "\n");
  write_text(o.report_file.empty() ? o.output + ".report.json" : o.report_file, r.dump(2) + "\n");
  std::fputs(r["text"].get<std::string>().c_str(), stdout);
}

void cmd_outer_hull(const Options& o) {
  Mesh m = load_input(o);
  Group g = load_group(o);
  Mesh y = resolved(o, m.get(), g.get());
  selfix_mesh* h = nullptr;
  check(selfix_outer_hull(y.get(), o.seed, &h));
  Mesh hull(h);
  print_counts("outer_hull ", hull.get());
  size_t ne = 0;
  check(selfix_mesh_inventory(hull.get(), &ne, nullptr, nullptr));
  std::printf("nonmanifold_edges %zu\n", ne);
  check(selfix_mesh_save(hull.get(), o.output.c_str(), o.format.c_str()));
  write_text(o.output + ".config.json", resolved_config(o).dump(2) + "\n");
}

Chambers chambers_of(const Options& o) {
  Mesh m = load_input(o);
  Group g = load_group(o);
  Mesh y = resolved(o, m.get(), g.get());
  selfix_chambers* c = nullptr;
  check(selfix_chambers_compute(y.get(), o.seed, &c));
  return Chambers(c);
}

void cmd_chambers(const Options& o) {
  Chambers c = chambers_of(o);
  size_t bounded = 0;
  check(selfix_chambers_bounded(c.get(), &bounded));
  std::printf("bounded_chambers %zu\n", bounded);
  std::ostringstream os;
  os.precision(17);
  for (uint32_t id = 0; id <= bounded; ++id) {
    double volume = 0.0, centroid[3];
    long chi = 0;
    size_t nv = 0, nf = 0;
    check(selfix_chamber_info(c.get(), id, &volume, &chi, centroid, &nv, &nf));
    os << (id == 0 ? "unbounded " : "chamber ") << id << ' ' << volume << ' ' << chi << ' ' << nv << ' ' << nf
       << '\n';
  }
  if (!o.output.empty()) {
    write_text(o.output, os.str());
  } else {
    std::fputs(os.str().c_str(), stdout);
  }
}

void cmd_explode(const Options& o) {
  Chambers c = chambers_of(o);
  char* manifest = nullptr;
  const std::string fmt = o.format;
  check(selfix_explode(c.get(), o.magnitude, o.dir.c_str(), fmt.c_str(), &manifest));
  const std::string text = take(manifest);
  write_text(o.dir + "/manifest.txt", text);
  write_text(o.dir + "/config.json", resolved_config(o).dump(2) + "\n");
  std::fputs(text.c_str(), stdout);
}

void cmd_fix_nonmanifold(const Options& o) {
  Mesh m = load_input(o);
  selfix_mesh* out = nullptr;
  char* report = nullptr;
  check(selfix_fix_nonmanifold(m.get(), o.eps_split.value_or(0.0), o.seed, o.jobs, &out, &report));
  Mesh result(out);
  std::fputs(take(report).c_str(), stdout);
  print_counts("output ", result.get());
  check(selfix_mesh_save(result.get(), o.output.c_str(), o.format.c_str()));
  write_text(o.output + ".config.json", resolved_config(o).dump(2) + "\n");
}

void cmd_bench(const Options& o) {
  std::vector<std::string> items = o.bench_items;
  if (items.empty()) items = {"c23=cyclic:23", "great-icosahedron=icosahedral", "great-icosahedron=identity"};
  nlohmann::json rows = nlohmann::json::array();
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Failure{SELFIX_INVALID_ARGUMENT, "bench item must be FIXTURE=GROUP: " + item};
    const std::string name = item.substr(0, eq);
    selfix_mesh* m = nullptr;
    check(selfix_mesh_fixture(name.c_str(), &m));
    Mesh mesh(m);
    selfix_group* g = nullptr;
    check(selfix_group_named(item.substr(eq + 1).c_str(), &g));
    Group group(g);
    char* json = nullptr;
    check(selfix_bench(mesh.get(), group.get(), name.c_str(), o.reps, o.jobs, &json));
    const nlohmann::json row = nlohmann::json::parse(take(json));
    std::printf("%-20s |G|=%-4zu orbits=%-4zu pairs %zu -> %zu (x%.2f)  median %.4fs -> %.4fs (x%.2f)\n",
                name.c_str(), row["group_order"].get<size_t>(), row["orbits"].get<size_t>(),
                row["pair_tests_plain"].get<size_t>(), row["pair_tests_symmetric"].get<size_t>(),
                row["pair_ratio"].get<double>(), row["plain_median_s"].get<double>(),
                row["symmetric_median_s"].get<double>(), row["speedup"].get<double>());
    rows.push_back(row);
  }
  if (!o.output.empty()) write_text(o.output, rows.dump(2) + "\n");
}

void cmd_fixture(const Options& o, const std::string& name) {
  selfix_mesh* m = nullptr;
  check(selfix_mesh_fixture(name.c_str(), &m));
  Mesh mesh(m);
  print_counts("", mesh.get());
  check(selfix_mesh_save(mesh.get(), o.output.c_str(), o.format.c_str()));
}

void cmd_fixtures() {
  char* names = nullptr;
  check(selfix_fixture_names(&names));
  std::fputs(take(names).c_str(), stdout);
}

void cmd_group(const Options& o, const std::string& name) {
  selfix_group* g = nullptr;
  check(selfix_group_named(name.c_str(), &g));
  Group group(g);
  size_t order = 0;
  check(selfix_group_order(group.get(), &order));
  check(selfix_group_save(group.get(), o.output.c_str()));
  std::printf("order %zu\n", order);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selfix: repair self-intersecting triangle meshes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", selfix_version());
  Options o;
  std::string name;

  auto add_input = [&](CLI::App* c) { c->add_option("input", o.input, "mesh file or fixture:NAME")->required(); };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--eps-point", o.eps_point, "coincidence distance (default 1e-9 x bbox diagonal)");
    c->add_option("--jobs", o.jobs, "worker threads (0 = all cores)");
    c->add_option("--seed", o.seed, "tie-break rotation seed");
    c->add_option("--config", o.config_file, "JSON config; flags override it");
  };
  auto add_group = [&](CLI::App* c) {
    auto* f = c->add_option("--group", o.group_file, "symmetry matrices, one per line");
    c->add_option("--group-name", o.group_name, "identity, cyclic:N, dihedral:N, icosahedral")->excludes(f);
  };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "stl-binary, stl-ascii or off")
        ->check(CLI::IsMember({"stl-binary", "stl-ascii", "stl", "off"}));
  };
  auto add_recheck = [&](CLI::App* c) {
    c->add_flag("--strict-recheck,!--no-strict-recheck", o.strict_recheck, "re-run the intersection test on output");
  };

  auto* inspect = app.add_subcommand("inspect", "counts, non-manifold inventory, intersections");
  add_input(inspect);
  add_common(inspect);
  add_group(inspect);

  auto* intersect = app.add_subcommand("intersect", "all triangle-triangle intersections");
  add_input(intersect);
  add_common(intersect);
  add_group(intersect);
  intersect->add_option("-o,--output", o.output, "segment list");
  intersect->add_flag("--print", o.print_segments, "print the segments");

  auto* repair = app.add_subcommand("repair", "full pipeline to a simplicial surface");
  add_input(repair);
  add_common(repair);
  add_group(repair);
  add_format(repair);
  add_recheck(repair);
  repair->add_option("--eps-split", o.eps_split, "non-manifold split shift (default 1e-4 x bbox diagonal)");
  repair->add_option("-o,--output", o.output)->required();
  repair->add_option("--report", o.report_file, "report path (default OUTPUT.report.json)");

  auto* hull = app.add_subcommand("outer-hull", "outer hull after retriangulation");
  add_input(hull);
  add_common(hull);
  add_group(hull);
  add_format(hull);
  add_recheck(hull);
  hull->add_option("-o,--output", o.output)->required();

  auto* chambers = app.add_subcommand("chambers", "chamber volumes and Euler characteristics");
  add_input(chambers);
  add_common(chambers);
  add_group(chambers);
  add_recheck(chambers);
  chambers->add_option("-o,--output", o.output, "chamber table");

  auto* explode = app.add_subcommand("explode", "exploded view, one file per chamber");
  add_input(explode);
  add_common(explode);
  add_group(explode);
  add_format(explode);
  add_recheck(explode);
  explode->add_option("--magnitude", o.magnitude)->check(CLI::NonNegativeNumber);
  explode->add_option("--dir", o.dir, "output directory");

  auto* fix = app.add_subcommand("fix-nonmanifold", "split non-manifold edges and vertices");
  add_input(fix);
  add_common(fix);
  add_format(fix);
  fix->add_option("--eps-split", o.eps_split);
  fix->add_option("-o,--output", o.output)->required();

  auto* bench = app.add_subcommand("bench", "plain versus symmetric intersection timing");
  bench->add_option("items", o.bench_items, "FIXTURE=GROUP entries");
  bench->add_option("--reps", o.reps)->check(CLI::PositiveNumber);
  bench->add_option("--jobs", o.jobs);
  bench->add_option("-o,--output", o.output, "JSON table");

  auto* fixture = app.add_subcommand("fixture", "write a generated mesh");
  fixture->add_option("name", name)->required();
  fixture->add_option("-o,--output", o.output)->required();
  add_format(fixture);

  auto* fixtures = app.add_subcommand("fixtures", "list generated meshes");

  auto* group = app.add_subcommand("group", "write a generated symmetry group");
  group->add_option("name", name, "identity, cyclic:N, dihedral:N, icosahedral")->required();
  group->add_option("-o,--output", o.output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (o.format == "stl") o.format = "stl-binary";

  try {
    if (*inspect) cmd_inspect(o);
    else if (*intersect) cmd_intersect(o);
    else if (*repair) cmd_repair(o);
    else if (*hull) cmd_outer_hull(o);
    else if (*chambers) cmd_chambers(o);
    else if (*explode) cmd_explode(o);
    else if (*fix) cmd_fix_nonmanifold(o);
    else if (*bench) cmd_bench(o);
    else if (*fixture) cmd_fixture(o, name);
    else if (*fixtures) cmd_fixtures();
    else if (*group) cmd_group(o, name);
  } catch (const Failure& f) {
    std::fprintf(stderr, "selfix: %s\n", f.message.c_str());
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "selfix: %s\n", e.what());
    return 3;
  }
  return 0;
}
