#pragma once

// Mesh and symmetry-group files: STL (ASCII and binary), OFF, and plain-text
// matrix lists.

#include <optional>
#include <string>
#include <vector>

#include "selfix/complex.hpp"

namespace selfix {

enum class MeshFormat { StlAscii, StlBinary, Off };

const char* to_string(MeshFormat f) noexcept;
// "stl-ascii", "stl-binary", "off"; throws InvalidArgument otherwise.
MeshFormat parse_format(const std::string& name);

// Unwelded triangle soup or indexed faces, as read from disk.
struct RawMesh {
  std::vector<Point3> points;
  std::vector<Triple> faces;
};

struct LoadOptions {
  // Welding / coincidence distance; default is 1e-9 x bounding-box diagonal.
  std::optional<double> eps_point;
};

RawMesh read_raw(const std::string& path);
RawMesh parse_stl(const std::string& bytes);
RawMesh parse_off(const std::string& text);

// Tolerances derived from the raw mesh extent, overridden by opts.
Tolerance tolerance_for(const RawMesh& raw, const LoadOptions& opts);

// Welds points within eps_point (exact duplicates first, then the grid) and
// builds the closed embedded complex. Rejects edges shorter than 10 eps_point.
EmbeddedComplex weld(const RawMesh& raw, const Tolerance& tol);

EmbeddedComplex load_mesh(const std::string& path, const LoadOptions& opts = {},
                          Tolerance* used = nullptr);

// Writes faces in the given cyclic orders (STL normals follow them).
void save_mesh(const std::vector<Point3>& coords, const std::vector<Triple>& oriented_faces,
               MeshFormat format, const std::string& path);
// Orients outward when X is a surface, otherwise keeps sorted triples.
void save_mesh(const EmbeddedComplex& X, MeshFormat format, const std::string& path);

std::string stl_binary_bytes(const std::vector<Point3>& coords, const std::vector<Triple>& faces);
std::string stl_ascii_text(const std::vector<Point3>& coords, const std::vector<Triple>& faces);
std::string off_text(const std::vector<Point3>& coords, const std::vector<Triple>& faces);

// One matrix per non-empty line, 9 reals row-major; '#' starts a comment.
std::vector<Mat3> read_group_file(const std::string& path);
void write_group_file(const std::vector<Mat3>& group, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace selfix
