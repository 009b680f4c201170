#include <doctest.h>

#include "sispec/mesh_io.hpp"
#include "support.hpp"

using namespace sispec;

TEST_CASE("minimal OFF parses") {
  const auto dir = testsupport::temp_dir("mesh");
  const auto path = dir / "tri.off";
  testsupport::write_text(path, "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  const TriMesh mesh = load_mesh(path);
  CHECK(mesh.num_vertices() == 3);
  CHECK(mesh.num_faces() == 1);
  CHECK(mesh.num_edges() == 3);
}

TEST_CASE("OFF face repeating a vertex is a parse error") {
  const auto dir = testsupport::temp_dir("mesh");
  const auto path = dir / "bad.off";
  testsupport::write_text(path, "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 1\n");
  CHECK_THROWS_AS(load_mesh(path), ParseError);
}

TEST_CASE("OFF out-of-range index is a parse error with line number") {
  const auto dir = testsupport::temp_dir("mesh");
  const auto path = dir / "oob.off";
  testsupport::write_text(path, "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 9\n");
  try {
    load_mesh(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 6);
  }
}

TEST_CASE("icosphere counts satisfy Euler's formula") {
  const TriMesh sphere = icosphere(4);
  CHECK(sphere.num_vertices() == 2562);
  CHECK(sphere.num_faces() == 5120);
  CHECK(sphere.num_edges() == 7680);
  CHECK(sphere.num_vertices() - sphere.num_edges() + sphere.num_faces() == 2);
}

TEST_CASE("validate: single triangle") {
  const ValidationReport r = validate(testsupport::single_triangle());
  CHECK(r.ok());
  CHECK(r.num_boundary_edges == 3);
}

TEST_CASE("validate: opposite winding is an orientation violation") {
  // Both faces traverse the shared edge 1->2 in the same direction.
  const TriMesh mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}},
                     {{{0, 1, 2}}, {{3, 1, 2}}});
  const ValidationReport r = validate(mesh);
  CHECK(r.inconsistent_edges.size() == 1);
  CHECK(!r.ok());
}

TEST_CASE("validate: closed icosphere is clean") {
  const ValidationReport r = validate(icosphere(2));
  CHECK(r.ok());
  CHECK(r.num_boundary_edges == 0);
}

TEST_CASE("validate: non-manifold edge flagged") {
  const TriMesh mesh(
      {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, -1, 0}},
      {{{0, 1, 2}}, {{0, 3, 1}}, {{0, 1, 4}}});
  const ValidationReport r = validate(mesh);
  CHECK(r.nonmanifold_edges.size() == 1);
}

TEST_CASE("triangle areas") {
  const TriMesh tri = testsupport::single_triangle();
  CHECK(triangle_areas(tri)[0] == doctest::Approx(0.5).epsilon(1e-15));

  const TriMesh scaled = testsupport::uniform_scale(tri, 2.0);
  CHECK(triangle_areas(scaled)[0] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("triangle areas scale by s^2 on a whole mesh") {
  const TriMesh sphere = icosphere(2);
  const TriMesh scaled = testsupport::uniform_scale(sphere, 3.0);
  const auto a = triangle_areas(sphere);
  const auto b = triangle_areas(scaled);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(b[i] == doctest::Approx(9.0 * a[i]).epsilon(1e-12));
}

TEST_CASE("unit icosphere total area approaches 4 pi") {
  const TriMesh sphere = icosphere(4);
  CHECK(sphere.total_area() ==
        doctest::Approx(4.0 * M_PI).epsilon(0.01));
}

TEST_CASE("degenerate face throws") {
  const TriMesh mesh({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{{0, 1, 2}}});
  CHECK_THROWS_AS(triangle_areas(mesh), DegenerateFace);
}

TEST_CASE("interior edges have two opposite angles in (0, pi)") {
  const TriMesh sphere = icosphere(2);
  for (int e = 0; e < sphere.num_edges(); ++e) {
    const auto angles = sphere.opposite_angles(e);
    REQUIRE(angles.size() == 2);
    for (double a : angles) {
      CHECK(a > 0.0);
      CHECK(a < M_PI);
    }
  }
}

TEST_CASE("OFF writer round-trips positions exactly") {
  const TriMesh mesh = bumpy_sphere(1);
  const auto dir = testsupport::temp_dir("mesh");
  const auto path = dir / "roundtrip.off";
  write_off(mesh, path);
  const TriMesh back = load_mesh(path);
  REQUIRE(back.num_vertices() == mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i)
    CHECK(back.vertices()[i] == mesh.vertices()[i]);
  CHECK(back.faces() == mesh.faces());
}

TEST_CASE("ascii PLY and OBJ parse the same triangle") {
  const auto dir = testsupport::temp_dir("mesh");
  const auto ply = dir / "tri.ply";
  testsupport::write_text(
      ply,
      "ply\nformat ascii 1.0\nelement vertex 3\n"
      "property float x\nproperty float y\nproperty float z\n"
      "element face 1\nproperty list uchar int vertex_indices\n"
      "end_header\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  const TriMesh from_ply = load_mesh(ply);
  CHECK(from_ply.num_vertices() == 3);
  CHECK(from_ply.num_faces() == 1);

  const auto obj = dir / "tri.obj";
  testsupport::write_text(obj,
                          "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1 2/2 3/3\n");
  const TriMesh from_obj = load_mesh(obj);
  CHECK(from_obj.vertices() == from_ply.vertices());
  CHECK(from_obj.faces() == from_ply.faces());
}

TEST_CASE("binary PLY is rejected") {
  const auto dir = testsupport::temp_dir("mesh");
  const auto path = dir / "bin.ply";
  testsupport::write_text(path,
                          "ply\nformat binary_little_endian 1.0\nend_header\n");
  CHECK_THROWS_AS(load_mesh(path), UnsupportedFormat);
}

TEST_CASE("missing file is an IoError") {
  CHECK_THROWS_AS(load_mesh("/nonexistent/mesh.off"), IoError);
}

TEST_CASE("unknown extension is unsupported") {
  CHECK_THROWS_AS(infer_format("mesh.stl"), UnsupportedFormat);
}
