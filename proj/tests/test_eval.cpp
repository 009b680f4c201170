#include <doctest.h>

#include "sispec/eval.hpp"
#include "support.hpp"

using namespace sispec;

namespace {

// Floyd-Warshall all-pairs oracle on the edge graph, unnormalized.
std::vector<std::vector<double>> all_pairs_oracle(const TriMesh& mesh) {
  const int n = mesh.num_vertices();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const Edge& e : mesh.edges()) {
    const double len =
        (mesh.vertices()[e.v0] - mesh.vertices()[e.v1]).norm();
    d[e.v0][e.v1] = std::min(d[e.v0][e.v1], len);
    d[e.v1][e.v0] = d[e.v0][e.v1];
  }
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
  return d;
}

Correspondence identity_correspondence(int n) {
  Correspondence corr;
  corr.mapping.resize(n);
  corr.winning_domain.assign(n, 0);
  corr.score.assign(n, 0.0);
  corr.num_source_vertices = n;
  for (int i = 0; i < n; ++i) corr.mapping[i] = i;
  return corr;
}

std::vector<int> identity_gt(int n) {
  std::vector<int> gt(n);
  for (int i = 0; i < n; ++i) gt[i] = i;
  return gt;
}

}  // namespace

TEST_CASE("distance from a vertex to itself is zero") {
  const TriMesh sphere = icosphere(2);
  const GeodesicOracle oracle(sphere);
  const auto d = oracle.distances_from(17);
  CHECK(d[17] == 0.0);
  for (double v : d) CHECK(v >= 0.0);
}

TEST_CASE("Dijkstra matches the Floyd-Warshall oracle") {
  const TriMesh sphere = icosphere(1);  // 42 vertices
  REQUIRE(sphere.num_vertices() <= 100);
  const auto oracle = all_pairs_oracle(sphere);
  for (int s = 0; s < sphere.num_vertices(); ++s) {
    const auto d = edge_graph_distances(sphere, s);
    for (int t = 0; t < sphere.num_vertices(); ++t)
      CHECK(d[t] == doctest::Approx(oracle[s][t]).epsilon(1e-12));
  }
}

TEST_CASE("antipodal distance on the unit sphere") {
  const TriMesh sphere = icosphere(4);
  const GeodesicOracle oracle(sphere);
  // Icosahedron seed vertices 0 and 1 lie on opposite poles.
  const auto d = oracle.distances_from(0);
  const auto& v0 = sphere.vertices()[0];
  int antipode = 0;
  double best = 0.0;
  for (int i = 0; i < sphere.num_vertices(); ++i) {
    const double dot = -v0.dot(sphere.vertices()[i]);
    if (dot > best) {
      best = dot;
      antipode = i;
    }
  }
  // Edge-graph paths overshoot the great circle arc pi; the area
  // normalization is sqrt(4 pi).
  const double expected = M_PI / std::sqrt(4.0 * M_PI);
  CHECK(d[antipode] == doctest::Approx(expected).epsilon(0.08));
  CHECK(d[antipode] >= expected * 0.999);
}

TEST_CASE("normalized errors are scale invariant") {
  const TriMesh shape = bumpy_sphere(1);
  const TriMesh scaled = testsupport::uniform_scale(shape, 3.0);
  const GeodesicOracle a(shape);
  const GeodesicOracle b(scaled);
  const auto da = a.distances_from(5);
  const auto db = b.distances_from(5);
  for (int i = 0; i < shape.num_vertices(); ++i)
    CHECK(db[i] == doctest::Approx(da[i]).scale(1.0).epsilon(1e-12));
}

TEST_CASE("perfect correspondence has zero error everywhere") {
  const TriMesh sphere = icosphere(2);
  const int n = sphere.num_vertices();
  const GeodesicOracle oracle(sphere);
  const ErrorCurve curve =
      geodesic_error(identity_correspondence(n), identity_gt(n), oracle);
  CHECK(curve.mean_error == 0.0);
  REQUIRE(curve.thresholds.size() == 100);
  CHECK(curve.thresholds.front() == 0.0);
  CHECK(curve.thresholds.back() == doctest::Approx(0.1));
  for (double f : curve.fraction) CHECK(f == 100.0);
}

TEST_CASE("one-ring mismatch yields the mean edge length") {
  const TriMesh sphere = icosphere(2);
  const int n = sphere.num_vertices();
  const GeodesicOracle oracle(sphere);
  // Predict a fixed one-ring neighbor of the true vertex everywhere.
  Correspondence corr = identity_correspondence(n);
  double edge_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int nbr = sphere.one_ring(i).front();
    corr.mapping[i] = nbr;
    edge_sum += (sphere.vertices()[i] - sphere.vertices()[nbr]).norm();
  }
  const auto errs = per_vertex_geodesic_error(corr, identity_gt(n), oracle);
  const double mean =
      std::accumulate(errs.begin(), errs.end(), 0.0) / errs.size();
  const double expected =
      edge_sum / n / std::sqrt(sphere.total_area());
  CHECK(mean == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("curve fractions are non-decreasing and end at the tail mass") {
  const TriMesh sphere = icosphere(2);
  const int n = sphere.num_vertices();
  const GeodesicOracle oracle(sphere);
  Correspondence corr = identity_correspondence(n);
  for (int i = 0; i < n; i += 3) corr.mapping[i] = (i + n / 2) % n;
  const ErrorCurve curve = geodesic_error(corr, identity_gt(n), oracle);
  for (std::size_t i = 1; i < curve.fraction.size(); ++i)
    CHECK(curve.fraction[i] >= curve.fraction[i - 1]);
  CHECK(curve.mean_error > 0.0);
}

TEST_CASE("ground truth size mismatches are rejected") {
  const TriMesh sphere = icosphere(1);
  const GeodesicOracle oracle(sphere);
  const int n = sphere.num_vertices();
  Correspondence corr = identity_correspondence(n);
  CHECK_THROWS_AS(
      per_vertex_geodesic_error(corr, identity_gt(n - 1), oracle),
      GroundTruthMismatch);
  std::vector<int> bad = identity_gt(n);
  bad[0] = n + 5;
  CHECK_THROWS_AS(per_vertex_geodesic_error(corr, bad, oracle),
                  GroundTruthMismatch);
}

TEST_CASE("curve CSV format") {
  const TriMesh sphere = icosphere(1);
  const int n = sphere.num_vertices();
  const GeodesicOracle oracle(sphere);
  const ErrorCurve curve =
      geodesic_error(identity_correspondence(n), identity_gt(n), oracle);
  const auto dir = testsupport::temp_dir("eval");
  const auto path = dir / "curve.csv";
  emit_curve(curve, path);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "threshold,fraction");
  std::getline(in, line);
  CHECK(line == "0.000,100.0");
  int rows = 1;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 100);
  CHECK(std::filesystem::exists(dir / "curve.svg"));

  const ErrorCurve back = read_curve_csv(path);
  REQUIRE(back.thresholds.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(back.thresholds[i] ==
          doctest::Approx(curve.thresholds[i]).scale(1.0).epsilon(1e-3));
    CHECK(back.fraction[i] ==
          doctest::Approx(curve.fraction[i]).scale(1.0).epsilon(0.05));
  }
}

TEST_CASE("overlay SVG mentions every label") {
  ErrorCurve a;
  a.thresholds = {0.0, 0.05, 0.1};
  a.fraction = {10.0, 50.0, 90.0};
  a.label = "alpha-mix";
  ErrorCurve b = a;
  b.fraction = {5.0, 40.0, 80.0};
  b.label = "euclidean-only";
  const auto dir = testsupport::temp_dir("eval");
  const auto path = dir / "overlay.svg";
  emit_curves_svg({a, b}, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("alpha-mix") != std::string::npos);
  CHECK(text.find("euclidean-only") != std::string::npos);
}

TEST_CASE("ground-truth file round-trips") {
  const std::vector<int> gt = {3, 1, 4, 1, 5};
  const auto dir = testsupport::temp_dir("eval");
  const auto path = dir / "gt.txt";
  write_ground_truth(gt, path);
  CHECK(read_ground_truth(path) == gt);
}

TEST_CASE("disconnected meshes are reported") {
  // Two separate triangles.
  const TriMesh two(
      {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}},
      {{{0, 1, 2}}, {{3, 4, 5}}});
  CHECK_THROWS_AS(edge_graph_distances(two, 0), DisconnectedMesh);
  const auto d = edge_graph_distances(two, 0, false);
  CHECK(std::isinf(d[3]));
}
