#pragma once

// The repair pipeline: intersections, retriangulation, outer hull, ramify.
// Also the symmetric-speedup benchmark.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "selfix/complex.hpp"
#include "selfix/meshio.hpp"

namespace selfix {

struct PipelineConfig {
  std::optional<double> eps_point;  // default 1e-9 x bbox diagonal
  std::optional<double> eps_split;  // ramify shift, default 1e-4 x bbox diagonal
  std::string group_file;           // empty: no symmetry
  MeshFormat format = MeshFormat::StlBinary;
  unsigned jobs = 1;
  bool strict_recheck = true;
  std::uint64_t seed = 1;
  double magnitude = 1.0;  // exploded view
};

nlohmann::json to_json(const PipelineConfig& c);
PipelineConfig config_from_json(const nlohmann::json& j);

struct StageTimes {
  double intersect = 0.0;
  double retriangulate = 0.0;
  double hull = 0.0;
  double ramify = 0.0;
};

struct RepairReport {
  std::size_t vertices_in = 0, edges_in = 0, faces_in = 0;
  long chi_in = 0;
  bool symmetric = false;
  std::size_t group_order = 1;
  std::size_t orbits = 0;
  std::size_t pair_tests = 0;
  std::size_t segments = 0;
  std::size_t touches = 0;
  std::size_t coplanar_pairs = 0;
  std::size_t faces_retriangulated = 0;
  std::size_t vertices_arranged = 0, edges_arranged = 0, faces_arranged = 0;
  std::size_t bounded_chambers = 0;
  std::size_t vertices_hull = 0, edges_hull = 0, faces_hull = 0;
  long chi_hull = 0;
  std::size_t nonmanifold_edges = 0;
  std::size_t nonmanifold_vertices = 0;
  std::size_t vertices_out = 0, edges_out = 0, faces_out = 0;
  long chi_out = 0;
  double epsilon = 0.0;
  int backoffs = 0;
  double max_displacement = 0.0;
  std::string ramify_text;
  StageTimes seconds;
};

nlohmann::json to_json(const RepairReport& r);
std::string format_report(const RepairReport& r);

struct RepairResult {
  EmbeddedComplex surface;
  std::vector<Triple> oriented;  // outward
  RepairReport report;
};

// Errors are rethrown with the failing stage named in the message.
RepairResult repair(const EmbeddedComplex& X, const Tolerance& tol, const PipelineConfig& config,
                    const std::vector<Mat3>* group = nullptr);

// Intersections and retriangulation only; the input itself when nothing
// intersects.
EmbeddedComplex resolve_intersections(const EmbeddedComplex& X, const Tolerance& tol, const PipelineConfig& config,
                                      const std::vector<Mat3>* group = nullptr, RepairReport* report = nullptr);

struct BenchRow {
  std::string name;
  std::size_t faces = 0;
  std::size_t group_order = 1;
  std::size_t orbits = 0;
  std::size_t pair_tests_plain = 0;
  std::size_t pair_tests_symmetric = 0;
  std::size_t segments = 0;
  std::vector<double> plain_seconds;
  std::vector<double> symmetric_seconds;

  double plain_median() const;
  double plain_mean() const;
  double symmetric_median() const;
  double symmetric_mean() const;
  double speedup() const { return plain_median() / symmetric_median(); }
  double pair_ratio() const {
    return static_cast<double>(pair_tests_plain) / static_cast<double>(pair_tests_symmetric);
  }
};

// Times intersections + retriangulation + outer hull (no strict recheck) with and without the
// group. Throws if the two paths disagree on the segment count or operation
// counts vary between repetitions.
BenchRow bench(const std::string& name, const EmbeddedComplex& X, const Tolerance& tol,
               const std::vector<Mat3>& group, int repetitions = 10, unsigned jobs = 1);

nlohmann::json to_json(const BenchRow& r);

}  // namespace selfix
