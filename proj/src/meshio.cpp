#include "selfix/meshio.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "selfix/error.hpp"

namespace selfix {

const char* to_string(MeshFormat f) noexcept {
  switch (f) {
    case MeshFormat::StlAscii: return "stl-ascii";
    case MeshFormat::StlBinary: return "stl-binary";
    case MeshFormat::Off: return "off";
  }
  return "unknown";
}

MeshFormat parse_format(const std::string& name) {
  if (name == "stl-ascii") return MeshFormat::StlAscii;
  if (name == "stl-binary" || name == "stl") return MeshFormat::StlBinary;
  if (name == "off") return MeshFormat::Off;
  throw Error(ErrorCode::InvalidArgument, "unknown mesh format '" + name + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOError, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IOError, "short write to " + path);
}

namespace {

std::uint32_t read_u32le(const unsigned char* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
         (std::uint32_t{p[3]} << 24);
}

float read_f32le(const unsigned char* p) { return std::bit_cast<float>(read_u32le(p)); }

void put_u32le(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_f32le(std::string& s, double v) { put_u32le(s, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

bool has_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                    [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

RawMesh parse_stl_binary(const std::string& bytes) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t n = read_u32le(p + 80);
  RawMesh raw;
  raw.points.reserve(3 * std::size_t{n});
  for (std::uint32_t t = 0; t < n; ++t) {
    const unsigned char* rec = p + 84 + 50 * std::size_t{t};
    for (int v = 0; v < 3; ++v) {
      const unsigned char* c = rec + 12 + 12 * v;
      raw.points.push_back({read_f32le(c), read_f32le(c + 4), read_f32le(c + 8)});
    }
    const auto base = static_cast<VertexId>(3 * t);
    raw.faces.push_back({base, base + 1, base + 2});
  }
  return raw;
}

RawMesh parse_stl_ascii(const std::string& text) {
  RawMesh raw;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<Point3> loop;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "vertex") {
      Point3 p;
      if (!(ls >> p.x >> p.y >> p.z))
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad vertex record");
      loop.push_back(p);
    } else if (word == "endloop") {
      if (loop.size() != 3) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": facet has " +
                                               std::to_string(loop.size()) + " vertices");
      }
      const auto base = static_cast<VertexId>(raw.points.size());
      raw.points.insert(raw.points.end(), loop.begin(), loop.end());
      raw.faces.push_back({base, base + 1, base + 2});
      loop.clear();
    } else if (word == "solid" || word == "facet" || word == "outer" || word == "endfacet" ||
               word == "endsolid") {
      continue;
    } else {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(lineno) + ": unexpected token '" + word + "'");
    }
  }
  if (!loop.empty()) throw Error(ErrorCode::ParseError, "unterminated facet at end of file");
  return raw;
}

}  // namespace

RawMesh parse_stl(const std::string& bytes) {
  if (bytes.size() >= 84) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint64_t n = read_u32le(p + 80);
    if (bytes.size() == 84 + 50 * n) return parse_stl_binary(bytes);
  }
  const auto start = bytes.find_first_not_of(" \t\r\n");
  if (start != std::string::npos && bytes.compare(start, 5, "solid") == 0) return parse_stl_ascii(bytes);
  throw Error(ErrorCode::ParseError, "byte 0: neither binary STL (size mismatch) nor ASCII STL");
}

RawMesh parse_off(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto next_tokens = [&]() -> std::istringstream {
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": unexpected end of file");
  };
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + what);
  };

  std::istringstream header = next_tokens();
  std::string magic;
  header >> magic;
  if (magic != "OFF") fail("missing OFF header");
  std::size_t nv = 0, nf = 0, ne = 0;
  if (!(header >> nv)) {
    std::istringstream counts = next_tokens();
    if (!(counts >> nv >> nf)) fail("bad counts line");
  } else if (!(header >> nf)) {
    fail("bad counts line");
  }
  (void)ne;
  RawMesh raw;
  raw.points.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    std::istringstream ls = next_tokens();
    if (!(ls >> raw.points[v].x >> raw.points[v].y >> raw.points[v].z)) fail("bad vertex record");
  }
  for (std::size_t f = 0; f < nf; ++f) {
    std::istringstream ls = next_tokens();
    std::size_t k = 0;
    if (!(ls >> k)) fail("bad face record");
    std::vector<VertexId> ids(k);
    for (auto& id : ids) {
      long long raw_id = 0;
      if (!(ls >> raw_id)) fail("bad face record");
      if (raw_id < 0 || static_cast<std::size_t>(raw_id) >= nv) fail("vertex index out of range");
      id = static_cast<VertexId>(raw_id);
    }
    if (k < 3) fail("face with fewer than 3 vertices");
    // Polygons are fanned from their first vertex.
    for (std::size_t i = 1; i + 1 < k; ++i) raw.faces.push_back({ids[0], ids[i], ids[i + 1]});
  }
  return raw;
}

RawMesh read_raw(const std::string& path) {
  const std::string bytes = read_file(path);
  if (has_suffix(path, ".off")) return parse_off(bytes);
  if (has_suffix(path, ".stl")) return parse_stl(bytes);
  if (bytes.compare(0, 3, "OFF") == 0) return parse_off(bytes);
  return parse_stl(bytes);
}

Tolerance tolerance_for(const RawMesh& raw, const LoadOptions& opts) {
  Tolerance tol = Tolerance::for_extent(bounding_box(raw.points).diagonal());
  if (opts.eps_point) tol.eps_point = *opts.eps_point;
  tol.validate();
  return tol;
}

EmbeddedComplex weld(const RawMesh& raw, const Tolerance& tol) {
  std::vector<VertexId> remap(raw.points.size());
  std::map<std::array<double, 3>, VertexId> exact;
  PointIndex index(tol.eps_point);
  for (std::size_t i = 0; i < raw.points.size(); ++i) {
    const Point3& p = raw.points[i];
    if (!is_finite(p)) throw Error(ErrorCode::ParseError, "non-finite coordinate in point " + std::to_string(i));
    auto [it, inserted] = exact.try_emplace({p.x, p.y, p.z}, 0);
    if (inserted) it->second = index.find_or_insert(p).first;
    remap[i] = it->second;
  }
  std::vector<Triple> faces;
  faces.reserve(raw.faces.size());
  for (const Triple& t : raw.faces) {
    const Triple w{remap[t[0]], remap[t[1]], remap[t[2]]};
    if (w[0] == w[1] || w[1] == w[2] || w[0] == w[2]) {
      throw Error(ErrorCode::DegenerateFace, "triangle collapses under welding at eps_point");
    }
    faces.push_back(w);
  }
  EmbeddedComplex X = EmbeddedComplex::from_faces(index.points(), faces, tol);
  const double shortest = X.shortest_edge();
  if (!(shortest > 10.0 * tol.eps_point)) {
    throw Error(ErrorCode::InvalidArgument,
                "shortest edge is not much longer than eps_point; lower --eps-point");
  }
  return X;
}

EmbeddedComplex load_mesh(const std::string& path, const LoadOptions& opts, Tolerance* used) {
  const RawMesh raw = read_raw(path);
  const Tolerance tol = tolerance_for(raw, opts);
  if (used) *used = tol;
  return weld(raw, tol);
}

namespace {

Vec3 facet_normal(const std::vector<Point3>& c, const Triple& t) {
  const Vec3 n = cross(c[t[1]] - c[t[0]], c[t[2]] - c[t[0]]);
  const double len = norm(n);
  return len > 0.0 ? n / len : Vec3{};
}

}  // namespace

std::string stl_binary_bytes(const std::vector<Point3>& coords, const std::vector<Triple>& faces) {
  std::string out(80, '\0');
  const char header[] = "selfix binary stl";
  std::memcpy(out.data(), header, sizeof(header) - 1);
  put_u32le(out, static_cast<std::uint32_t>(faces.size()));
  auto rounded = [](const Point3& p) {
    return Point3{static_cast<float>(p.x), static_cast<float>(p.y), static_cast<float>(p.z)};
  };
  for (const Triple& t : faces) {
    // Normal of the stored single-precision corners, so a reloaded mesh
    // writes the same bytes.
    const std::vector<Point3> corners{rounded(coords[t[0]]), rounded(coords[t[1]]), rounded(coords[t[2]])};
    const Vec3 n = facet_normal(corners, {0, 1, 2});
    put_f32le(out, n.x);
    put_f32le(out, n.y);
    put_f32le(out, n.z);
    for (const Point3& c : corners) {
      put_f32le(out, c.x);
      put_f32le(out, c.y);
      put_f32le(out, c.z);
    }
    out.push_back('\0');
    out.push_back('\0');
  }
  return out;
}

std::string stl_ascii_text(const std::vector<Point3>& coords, const std::vector<Triple>& faces) {
  std::string out = "solid selfix\n";
  char buf[256];
  for (const Triple& t : faces) {
    const Vec3 n = facet_normal(coords, t);
    std::snprintf(buf, sizeof buf, "facet normal %.9g %.9g %.9g\n outer loop\n", n.x, n.y, n.z);
    out += buf;
    for (VertexId v : t) {
      std::snprintf(buf, sizeof buf, "  vertex %.17g %.17g %.17g\n", coords[v].x, coords[v].y, coords[v].z);
      out += buf;
    }
    out += " endloop\nendfacet\n";
  }
  out += "endsolid selfix\n";
  return out;
}

std::string off_text(const std::vector<Point3>& coords, const std::vector<Triple>& faces) {
  std::string out = "OFF\n" + std::to_string(coords.size()) + " " + std::to_string(faces.size()) + " 0\n";
  char buf[256];
  for (const Point3& p : coords) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    out += buf;
  }
  for (const Triple& t : faces) {
    std::snprintf(buf, sizeof buf, "3 %u %u %u\n", t[0], t[1], t[2]);
    out += buf;
  }
  return out;
}

void save_mesh(const std::vector<Point3>& coords, const std::vector<Triple>& oriented_faces,
               MeshFormat format, const std::string& path) {
  // Each face starts at its lexicographically smallest corner, so the output
  // does not depend on vertex numbering.
  std::vector<Triple> faces = oriented_faces;
  for (Triple& t : faces) {
    for (VertexId v : t) {
      if (v >= coords.size()) throw Error(ErrorCode::InvalidArgument, "face references missing vertex");
    }
    // Compared in single precision so binary STL round trips pick the same corner.
    const auto first = std::min_element(t.begin(), t.end(), [&](VertexId a, VertexId b) {
      auto key = [&](VertexId v) {
        return std::array<float, 3>{static_cast<float>(coords[v].x), static_cast<float>(coords[v].y),
                                    static_cast<float>(coords[v].z)};
      };
      return key(a) < key(b);
    });
    std::rotate(t.begin(), first, t.end());
  }
  switch (format) {
    case MeshFormat::StlAscii: write_file(path, stl_ascii_text(coords, faces)); break;
    case MeshFormat::StlBinary: write_file(path, stl_binary_bytes(coords, faces)); break;
    case MeshFormat::Off: write_file(path, off_text(coords, faces)); break;
  }
}

void save_mesh(const EmbeddedComplex& X, MeshFormat format, const std::string& path) {
  std::vector<Triple> faces;
  if (nonmanifold_edges(X.complex()).empty() && nonmanifold_vertices(X.complex()).empty()) {
    faces = orient_outward(X);
  } else {
    faces = X.complex().faces();
  }
  save_mesh(X.coords(), faces, format, path);
}

std::vector<Mat3> read_group_file(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  std::vector<Mat3> out;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Mat3 m;
    std::size_t k = 0;
    double v = 0.0;
    while (k < 9 && ls >> v) m.m[k++] = v;
    if (k == 0 && ls.eof()) continue;
    std::string rest;
    if (k != 9 || (ls.clear(), ls >> rest)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 9 reals");
    }
    out.push_back(m);
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, path + ": no matrices");
  return out;
}

void write_group_file(const std::vector<Mat3>& group, const std::string& path) {
  std::string out;
  char buf[64];
  for (const Mat3& m : group) {
    for (std::size_t i = 0; i < 9; ++i) {
      std::snprintf(buf, sizeof buf, i ? " %.17g" : "%.17g", m.m[i]);
      out += buf;
    }
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace selfix
