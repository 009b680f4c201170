#include <doctest.h>

#include "sispec/pipeline.hpp"
#include "support.hpp"

using namespace sispec;

namespace {

PipelineConfig small_config() {
  PipelineConfig config;
  config.alphas = {0.6, 0.8};
  config.k = 12;
  config.descriptor_count = 30;
  config.optimizer.max_iters = 60;
  return config;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cmd_spectra computes, caches and reuses bases") {
  const auto dir = testsupport::temp_dir("pipeline_spectra");
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto mesh_path = dir / "shape.off";
  write_off(bumpy_sphere(1), mesh_path);
  const PipelineConfig config = small_config();
  const auto cache = dir / "cache";

  const SpectraSummary first = cmd_spectra(mesh_path, config, cache);
  // One file per configured alpha; the implicit Euclidean descriptor
  // domain is computed and cached too but not listed.
  CHECK(first.files.size() == 2);
  CHECK(first.computed == 3);
  CHECK(first.cache_hits == 0);
  for (const auto& f : first.files) CHECK(std::filesystem::exists(f));
  CHECK(first.files[0] != first.files[1]);

  const SpectraSummary second = cmd_spectra(mesh_path, config, cache);
  CHECK(second.computed == 0);
  CHECK(second.cache_hits == 3);
  CHECK(second.files == first.files);

  // Cached bases reload to the exact computed spectra.
  const TriMesh mesh = load_mesh(mesh_path);
  const ShapeSpectra spectra = compute_spectra(mesh, config, cache);
  REQUIRE(spectra.bases.size() == 2);
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(spectra.bases[s].alpha == config.alphas[s]);
    const SpectralBasis cached = read_basis_cache(first.files[s]);
    CHECK(cached.eigenvalues == spectra.bases[s].eigenvalues);
    CHECK(cached.phi == spectra.bases[s].phi);
  }
  CHECK(spectra.euclidean.alpha == 0.0);
}

TEST_CASE("an explicit zero alpha doubles as the descriptor domain") {
  PipelineConfig config = small_config();
  config.alphas = {0.0, 0.6};
  SpectraSummary summary;
  const ShapeSpectra spectra =
      compute_spectra(bumpy_sphere(1), config, {}, &summary);
  CHECK(summary.computed == 2);
  REQUIRE(spectra.bases.size() == 2);
  CHECK(spectra.bases[0].eigenvalues == spectra.euclidean.eigenvalues);
}

TEST_CASE("matching a shape against itself is the identity") {
  const TriMesh shape = bumpy_sphere(1);
  const MatchResult result = match_meshes(shape, shape, small_config());
  REQUIRE(int(result.correspondence.mapping.size()) == shape.num_vertices());
  for (int i = 0; i < shape.num_vertices(); ++i)
    CHECK(result.correspondence.mapping[i] == i);

  const GeodesicOracle oracle(shape);
  std::vector<int> gt(shape.num_vertices());
  for (int i = 0; i < shape.num_vertices(); ++i) gt[i] = i;
  const ErrorCurve curve =
      geodesic_error(result.correspondence, gt, oracle);
  CHECK(curve.mean_error == 0.0);
}

TEST_CASE("cmd_match writes all artifacts deterministically") {
  const auto dir = testsupport::temp_dir("pipeline_match");
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const TriMesh source = bumpy_sphere(1);
  const TriMesh target =
      local_scale_deform(source, 0, 0.6, 1.3);
  const auto src_path = dir / "source.off";
  const auto dst_path = dir / "target.off";
  write_off(source, src_path);
  write_off(target, dst_path);

  const PipelineConfig config = small_config();
  const MatchResult a = cmd_match(src_path, dst_path, config, dir / "run_a");
  const MatchResult b = cmd_match(src_path, dst_path, config, dir / "run_b");

  const auto corr_a = dir / "run_a" / "correspondence.txt";
  const auto corr_b = dir / "run_b" / "correspondence.txt";
  REQUIRE(std::filesystem::exists(corr_a));
  CHECK(slurp(corr_a) == slurp(corr_b));
  CHECK(std::filesystem::exists(dir / "run_a" / "loss_trace.csv"));
  CHECK(std::filesystem::exists(dir / "run_a" / "fmap_a0p6_xy.bin"));
  CHECK(std::filesystem::exists(dir / "run_a" / "fmap_a0p6_yx.bin"));
  CHECK(std::filesystem::exists(dir / "run_a" / "fmap_a0p8_xy.bin"));
  CHECK(a.correspondence.mapping == b.correspondence.mapping);

  // Refinement never worsened the loss.
  REQUIRE(!a.trace.empty());
  CHECK(a.trace.back().loss.total <= a.trace.front().loss.total);
}

TEST_CASE("cmd_eval reads artifacts and emits the curve files") {
  const auto dir = testsupport::temp_dir("pipeline_eval");
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const TriMesh shape = icosphere(2);
  const int n = shape.num_vertices();
  write_off(shape, dir / "shape.off");

  Correspondence corr;
  corr.num_source_vertices = n;
  for (int i = 0; i < n; ++i) {
    corr.mapping.push_back(i);
    corr.winning_domain.push_back(0);
    corr.score.push_back(0.0);
  }
  write_correspondence(corr, dir / "corr.txt");
  std::vector<int> gt(n);
  for (int i = 0; i < n; ++i) gt[i] = i;
  write_ground_truth(gt, dir / "gt.txt");

  const ErrorCurve curve = cmd_eval(dir / "corr.txt", dir / "gt.txt",
                                    dir / "shape.off", dir / "curve.csv");
  CHECK(curve.mean_error == 0.0);
  CHECK(std::filesystem::exists(dir / "curve.csv"));
  CHECK(std::filesystem::exists(dir / "curve.svg"));
}

TEST_CASE("cmd_deform writes the mesh and identity ground truth") {
  const auto dir = testsupport::temp_dir("pipeline_deform");
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const TriMesh shape = icosphere(2);
  write_off(shape, dir / "shape.off");

  cmd_deform(dir / "shape.off", 0, 0.5, 1.5, dir / "deformed.off",
             dir / "gt.txt");
  const TriMesh deformed = load_mesh(dir / "deformed.off");
  CHECK(deformed.faces() == shape.faces());
  CHECK(validate(deformed).ok());
  const auto gt = read_ground_truth(dir / "gt.txt");
  REQUIRE(int(gt.size()) == shape.num_vertices());
  for (int i = 0; i < shape.num_vertices(); ++i) CHECK(gt[i] == i);

  // Round-tripping through the writer preserves coordinates exactly.
  const TriMesh direct = local_scale_deform(shape, 0, 0.5, 1.5);
  CHECK(deformed.vertices() == direct.vertices());
}

TEST_CASE("cache keys separate alphas and configs") {
  const TriMesh shape = icosphere(1);
  const PipelineConfig config = small_config();
  const auto k1 = spectra_cache_key(shape, config, 0.6);
  const auto k2 = spectra_cache_key(shape, config, 0.8);
  CHECK(k1 != k2);
  PipelineConfig other = config;
  other.k = 20;
  CHECK(spectra_cache_key(shape, other, 0.6) != k1);
  const TriMesh scaled = testsupport::uniform_scale(shape, 2.0);
  CHECK(spectra_cache_key(scaled, config, 0.6) != k1);
}

TEST_CASE("flat meshes fall back to the Euclidean domain only") {
  PipelineConfig config = small_config();
  config.alphas = {0.6};
  const TriMesh grid = planar_grid(6, 6);
  CHECK_THROWS_AS(compute_spectra(grid, config), AllZeroCurvature);
  config.alphas = {0.0};
  CHECK_NOTHROW(compute_spectra(grid, config));
}
