#include "selfix/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <numeric>
#include <sstream>

#include "selfix/chambers.hpp"
#include "selfix/error.hpp"
#include "selfix/intersect.hpp"
#include "selfix/ramify.hpp"
#include "selfix/retriangulate.hpp"
#include "selfix/symmetry.hpp"

namespace selfix {

using nlohmann::json;

json to_json(const PipelineConfig& c) {
  json j;
  j["eps_point"] = c.eps_point ? json(*c.eps_point) : json(nullptr);
  j["eps_split"] = c.eps_split ? json(*c.eps_split) : json(nullptr);
  j["group_file"] = c.group_file;
  j["format"] = to_string(c.format);
  j["jobs"] = c.jobs;
  j["strict_recheck"] = c.strict_recheck;
  j["seed"] = c.seed;
  j["magnitude"] = c.magnitude;
  return j;
}

PipelineConfig config_from_json(const json& j) {
  try {
    PipelineConfig c;
    if (j.contains("eps_point") && !j["eps_point"].is_null()) c.eps_point = j["eps_point"].get<double>();
    if (j.contains("eps_split") && !j["eps_split"].is_null()) c.eps_split = j["eps_split"].get<double>();
    c.group_file = j.value("group_file", std::string());
    if (j.contains("format")) c.format = parse_format(j["format"].get<std::string>());
    c.jobs = j.value("jobs", 1u);
    c.strict_recheck = j.value("strict_recheck", true);
    c.seed = j.value("seed", std::uint64_t{1});
    c.magnitude = j.value("magnitude", 1.0);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    const char* what = e.what();
    const std::size_t prefix = std::strlen(to_string(e.code())) + 2;
    throw Error(e.code(), std::string("stage ") + name + ": " + (std::strlen(what) >= prefix ? what + prefix : what),
                e.items());
  }
}

}  // namespace

EmbeddedComplex resolve_intersections(const EmbeddedComplex& X, const Tolerance& tol, const PipelineConfig& config,
                                      const std::vector<Mat3>* group, RepairReport* report) {
  RepairReport local;
  RepairReport& r = report ? *report : local;
  auto t0 = Clock::now();
  std::optional<SymmetryGroup> G;
  std::optional<OrbitDecomposition> orbits;
  const IntersectionSet hits = stage("intersect", [&] {
    if (group && !group->empty()) {
      G = verify_group(X, *group, tol);
      orbits = face_orbits(X, *G);
      r.symmetric = true;
      r.group_order = G->order();
      r.orbits = orbits->orbit_count();
      return symmetric_all_intersections(X, *G, *orbits, tol, config.jobs);
    }
    return all_intersections(X, tol, {config.jobs});
  });
  r.seconds.intersect = seconds_since(t0);
  r.pair_tests = hits.pair_tests;
  r.segments = hits.segments.size();
  r.touches = hits.touch_count;
  r.coplanar_pairs = hits.coplanar_pairs;
  r.faces_retriangulated = static_cast<std::size_t>(
      std::count_if(hits.per_face.begin(), hits.per_face.end(), [](const auto& c) { return !c.empty(); }));

  t0 = Clock::now();
  EmbeddedComplex Y = stage("retriangulate", [&] {
    if (hits.empty()) return X;
    auto pieces = G ? symmetric_retriangulate_faces(X, *G, *orbits, hits, tol, config.jobs)
                    : retriangulate_faces(X, hits, tol, config.jobs);
    return rebuild_complex(X, pieces, tol, {config.strict_recheck, config.jobs});
  });
  r.seconds.retriangulate = seconds_since(t0);
  r.vertices_arranged = Y.complex().vertex_count();
  r.edges_arranged = Y.complex().edge_count();
  r.faces_arranged = Y.complex().face_count();
  return Y;
}

RepairResult repair(const EmbeddedComplex& X, const Tolerance& tol, const PipelineConfig& config,
                    const std::vector<Mat3>* group) {
  RepairResult out;
  RepairReport& r = out.report;
  const SimplicialComplex& K = X.complex();
  r.vertices_in = K.vertex_count();
  r.edges_in = K.edge_count();
  r.faces_in = K.face_count();
  r.chi_in = K.euler_characteristic();

  const EmbeddedComplex Y = resolve_intersections(X, tol, config, group, &r);

  auto t0 = Clock::now();
  const OuterHull H = stage("outer-hull", [&] {
    const ChamberSet C = all_chambers(Y, config.seed);
    r.bounded_chambers = C.bounded_count();
    return outer_hull(Y, C, tol);
  });
  r.seconds.hull = seconds_since(t0);
  const SimplicialComplex& HK = H.complex.complex();
  r.vertices_hull = HK.vertex_count();
  r.edges_hull = HK.edge_count();
  r.faces_hull = HK.face_count();
  r.chi_hull = HK.euler_characteristic();
  r.nonmanifold_edges = nonmanifold_edges(HK).size();

  t0 = Clock::now();
  RamifyResult R = stage("ramify", [&] {
    RamifyOptions o;
    o.epsilon = config.eps_split;
    o.strict_recheck = config.strict_recheck;
    o.jobs = config.jobs;
    o.seed = config.seed;
    return ramify(H.complex, tol, o);
  });
  r.seconds.ramify = seconds_since(t0);
  r.nonmanifold_vertices = R.report.nonmanifold_vertices;
  r.epsilon = R.report.epsilon;
  r.backoffs = R.report.backoffs;
  r.max_displacement = R.report.max_displacement;
  r.ramify_text = format_report(R.report);

  out.surface = std::move(R.surface);
  out.oriented = stage("orient", [&] { return orient_outward(out.surface); });
  const SimplicialComplex& S = out.surface.complex();
  r.vertices_out = S.vertex_count();
  r.edges_out = S.edge_count();
  r.faces_out = S.face_count();
  r.chi_out = S.euler_characteristic();
  return out;
}

json to_json(const RepairReport& r) {
  json j;
  j["input"] = {{"vertices", r.vertices_in}, {"edges", r.edges_in}, {"faces", r.faces_in}, {"chi", r.chi_in}};
  j["intersect"] = {{"symmetric", r.symmetric}, {"group_order", r.group_order}, {"orbits", r.orbits},
                    {"pair_tests", r.pair_tests}, {"segments", r.segments}, {"touches", r.touches},
                    {"coplanar_pairs", r.coplanar_pairs}, {"seconds", r.seconds.intersect}};
  j["retriangulate"] = {{"faces_retriangulated", r.faces_retriangulated}, {"vertices", r.vertices_arranged},
                        {"edges", r.edges_arranged}, {"faces", r.faces_arranged},
                        {"seconds", r.seconds.retriangulate}};
  j["outer_hull"] = {{"bounded_chambers", r.bounded_chambers}, {"vertices", r.vertices_hull},
                     {"edges", r.edges_hull}, {"faces", r.faces_hull}, {"chi", r.chi_hull},
                     {"nonmanifold_edges", r.nonmanifold_edges}, {"seconds", r.seconds.hull}};
  j["ramify"] = {{"nonmanifold_vertices", r.nonmanifold_vertices}, {"epsilon", r.epsilon},
                 {"backoffs", r.backoffs}, {"max_displacement", r.max_displacement},
                 {"seconds", r.seconds.ramify}};
  j["output"] = {{"vertices", r.vertices_out}, {"edges", r.edges_out}, {"faces", r.faces_out}, {"chi", r.chi_out}};
  return j;
}

std::string format_report(const RepairReport& r) {
  std::ostringstream os;
  os << "input " << r.vertices_in << ' ' << r.edges_in << ' ' << r.faces_in << " chi=" << r.chi_in << "\n";
  os << "intersections " << r.segments << " touches " << r.touches << " coplanar " << r.coplanar_pairs
     << " pair_tests " << r.pair_tests;
  if (r.symmetric) os << " group " << r.group_order << " orbits " << r.orbits;
  os << "\n";
  os << "retriangulated_faces " << r.faces_retriangulated << " -> " << r.vertices_arranged << ' '
     << r.edges_arranged << ' ' << r.faces_arranged << "\n";
  os << "chambers " << r.bounded_chambers << "\n";
  os << "outer_hull " << r.vertices_hull << ' ' << r.edges_hull << ' ' << r.faces_hull << " chi=" << r.chi_hull
     << " nonmanifold_edges " << r.nonmanifold_edges << "\n";
  os << "nonmanifold_vertices " << r.nonmanifold_vertices << "\n";
  os << "output " << r.vertices_out << ' ' << r.edges_out << ' ' << r.faces_out << " chi=" << r.chi_out << "\n";
  os << r.ramify_text;
  return os.str();
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double BenchRow::plain_median() const { return median(plain_seconds); }
double BenchRow::plain_mean() const { return mean(plain_seconds); }
double BenchRow::symmetric_median() const { return median(symmetric_seconds); }
double BenchRow::symmetric_mean() const { return mean(symmetric_seconds); }

BenchRow bench(const std::string& name, const EmbeddedComplex& X, const Tolerance& tol,
               const std::vector<Mat3>& group, int repetitions, unsigned jobs) {
  if (repetitions < 1) throw Error(ErrorCode::InvalidArgument, "repetitions must be positive");
  BenchRow row;
  row.name = name;
  row.faces = X.complex().face_count();
  row.group_order = group.size();
  PipelineConfig config;
  config.jobs = jobs;
  config.strict_recheck = false;

  auto run = [&](const std::vector<Mat3>* g, std::size_t& tests, std::vector<double>& times) {
    for (int i = 0; i < repetitions; ++i) {
      RepairReport r;
      const auto t0 = Clock::now();
      const EmbeddedComplex Y = resolve_intersections(X, tol, config, g, &r);
      const OuterHull H = outer_hull(Y, tol);
      times.push_back(seconds_since(t0));
      if (i == 0) {
        tests = r.pair_tests;
        if (g) {
          row.orbits = r.orbits;
          if (r.segments != row.segments) {
            throw Error(ErrorCode::PreconditionViolated, name + ": symmetric and plain segment counts differ");
          }
        } else {
          row.segments = r.segments;
        }
      } else if (r.pair_tests != tests) {
        throw Error(ErrorCode::PreconditionViolated, name + ": pair-test count varies between repetitions");
      }
      (void)H;
    }
  };
  run(nullptr, row.pair_tests_plain, row.plain_seconds);
  run(&group, row.pair_tests_symmetric, row.symmetric_seconds);
  return row;
}

json to_json(const BenchRow& r) {
  return {{"name", r.name},
          {"faces", r.faces},
          {"group_order", r.group_order},
          {"orbits", r.orbits},
          {"segments", r.segments},
          {"pair_tests_plain", r.pair_tests_plain},
          {"pair_tests_symmetric", r.pair_tests_symmetric},
          {"pair_ratio", r.pair_ratio()},
          {"plain_median_s", r.plain_median()},
          {"plain_mean_s", r.plain_mean()},
          {"symmetric_median_s", r.symmetric_median()},
          {"symmetric_mean_s", r.symmetric_mean()},
          {"speedup", r.speedup()}};
}

}  // namespace selfix
