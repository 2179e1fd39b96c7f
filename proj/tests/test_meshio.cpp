#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <map>
#include <random>

#include "selfix/fixtures.hpp"
#include "selfix/meshio.hpp"
#include "support.hpp"

using namespace selfix;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("selfix_meshio_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

// Vertex ids of Y mapped to those of X by nearest coordinates; faces compared
// as sets of sorted triples.
bool isomorphic(const EmbeddedComplex& X, const EmbeddedComplex& Y, double eps) {
  if (X.coords().size() != Y.coords().size()) return false;
  if (X.complex().face_count() != Y.complex().face_count()) return false;
  std::vector<VertexId> map(Y.coords().size());
  for (VertexId v = 0; v < Y.coords().size(); ++v) {
    bool found = false;
    for (VertexId w = 0; w < X.coords().size() && !found; ++w) {
      if (distance(Y.point(v), X.point(w)) <= eps) {
        map[v] = w;
        found = true;
      }
    }
    if (!found) return false;
  }
  std::vector<Triple> mapped;
  for (const Triple& t : Y.complex().faces()) mapped.push_back(sorted_triple({map[t[0]], map[t[1]], map[t[2]]}));
  std::sort(mapped.begin(), mapped.end());
  std::vector<Triple> own = X.complex().faces();
  std::sort(own.begin(), own.end());
  return mapped == own;
}

std::string le32(std::uint32_t v) {
  std::string s;
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  return s;
}

std::string lef(float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  return le32(u);
}

}  // namespace

TEST_SUITE("meshio") {

TEST_CASE("load_mesh examples") {
  TempDir dir;
  const auto T = fixtures::tetrahedron().embed();
  save_mesh(T, MeshFormat::StlBinary, dir / "t.stl");
  const auto L = load_mesh(dir / "t.stl");
  CHECK(L.complex().vertex_count() == 4);
  CHECK(L.complex().euler_characteristic() == 2);

  save_mesh(fixtures::icosahedron().embed(), MeshFormat::Off, dir / "i.off");
  const auto I = load_mesh(dir / "i.off");
  CHECK(I.complex().vertex_count() == 12);
  CHECK(I.complex().edge_count() == 30);
  CHECK(I.complex().face_count() == 20);

  // drop one facet: a hole
  auto o = orient_outward(T);
  o.pop_back();
  save_mesh(T.coords(), o, MeshFormat::StlAscii, dir / "hole.stl");
  CHECK_THROWS_CODE(load_mesh(dir / "hole.stl"), ErrorCode::NotClosed);
}

TEST_CASE("round trips on every fixture and format") {
  TempDir dir;
  for (const auto& name : fixtures::names()) {
    const auto M = fixtures::by_name(name);
    const auto X = M.embed();
    for (MeshFormat f : {MeshFormat::StlAscii, MeshFormat::StlBinary, MeshFormat::Off}) {
      CAPTURE(name);
      CAPTURE(to_string(f));
      const std::string path = dir / ("m." + std::string(f == MeshFormat::Off ? "off" : "stl"));
      save_mesh(X, f, path);
      const auto Y = load_mesh(path);
      const double eps = f == MeshFormat::StlBinary ? 1e-6 * X.bounds().diagonal() : 1e-12;
      CHECK(isomorphic(X, Y, eps));
    }
  }
}

TEST_CASE("ASCII and binary STL agree within float precision") {
  TempDir dir;
  const auto X = fixtures::great_icosahedron().embed();
  save_mesh(X, MeshFormat::StlAscii, dir / "a.stl");
  save_mesh(X, MeshFormat::StlBinary, dir / "b.stl");
  const auto A = load_mesh(dir / "a.stl");
  const auto B = load_mesh(dir / "b.stl");
  CHECK(isomorphic(A, B, 1e-6));
}

TEST_CASE("binary STL layout is bit exact") {
  const std::vector<Point3> coords{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const std::vector<Triple> faces{{0, 2, 1}, {1, 2, 3}};
  const std::string bytes = stl_binary_bytes(coords, faces);
  std::string golden(80, '\0');
  const char header[] = "selfix binary stl";
  std::memcpy(golden.data(), header, sizeof header - 1);
  golden += le32(2);
  const float r = static_cast<float>(1 / std::sqrt(3.0));
  const float facets[2][12] = {{0, 0, -1, 0, 0, 0, 0, 1, 0, 1, 0, 0}, {r, r, r, 1, 0, 0, 0, 1, 0, 0, 0, 1}};
  for (const auto& facet : facets) {
    for (float v : facet) golden += lef(v);
    golden += std::string(2, '\0');
  }
  REQUIRE(bytes.size() == 84 + 50 * 2);
  CHECK(bytes == golden);
}

TEST_CASE("welding does not depend on triangle order") {
  const auto M = fixtures::great_icosahedron();
  const auto X = M.embed();
  RawMesh soup;
  for (const Triple& t : X.complex().faces()) {
    const auto base = static_cast<VertexId>(soup.points.size());
    for (VertexId v : t) soup.points.push_back(X.point(v));
    soup.faces.push_back({base, base + 1, base + 2});
  }
  const Tolerance tol = tolerance_for(soup, {});
  const auto A = weld(soup, tol);
  CHECK(isomorphic(X, A, 0.0));
  std::mt19937_64 rng(7);
  for (int round = 0; round < 5; ++round) {
    RawMesh shuffled = soup;
    std::shuffle(shuffled.faces.begin(), shuffled.faces.end(), rng);
    for (Triple& t : shuffled.faces) std::rotate(t.begin(), t.begin() + rng() % 3, t.end());
    const auto B = weld(shuffled, tol);
    CHECK(isomorphic(A, B, 0.0));
  }
}

TEST_CASE("parse errors") {
  CHECK_THROWS_CODE(parse_stl(std::string(90, 'x')), ErrorCode::ParseError);
  CHECK_THROWS_CODE(parse_stl("solid s\nfacet normal 0 0 1\n outer loop\n vertex 0 0\n"), ErrorCode::ParseError);
  CHECK_THROWS_CODE(parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n"), ErrorCode::ParseError);
  CHECK_THROWS_CODE(parse_off("NOPE\n"), ErrorCode::ParseError);
  CHECK_THROWS_CODE(read_raw("/nonexistent/mesh.stl"), ErrorCode::IOError);
  CHECK_THROWS_CODE(parse_format("obj"), ErrorCode::InvalidArgument);
}

TEST_CASE("group files round trip") {
  TempDir dir;
  const auto G = fixtures::icosahedral_group();
  write_group_file(G, dir / "g.txt");
  const auto H = read_group_file(dir / "g.txt");
  REQUIRE(H.size() == G.size());
  for (std::size_t i = 0; i < G.size(); ++i) CHECK(G[i].max_abs_diff(H[i]) == 0.0);

  write_file(dir / "bad.txt", "1 0 0 0 1 0 0 0 1 7\n");
  CHECK_THROWS_CODE(read_group_file(dir / "bad.txt"), ErrorCode::ParseError);
  write_file(dir / "short.txt", "# comment\n1 0 0 0 1 0\n");
  CHECK_THROWS_CODE(read_group_file(dir / "short.txt"), ErrorCode::ParseError);
  write_file(dir / "ok.txt", "# identity\n\n1 0 0 0 1 0 0 0 1\n");
  CHECK(read_group_file(dir / "ok.txt").size() == 1);
}

}  // TEST_SUITE
