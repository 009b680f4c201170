#include "sispec/pipeline.hpp"

#include <cmath>
#include <cstring>
#include <optional>
#include <sstream>

namespace sispec {

namespace {

void require_valid(const TriMesh& mesh, const std::string& name) {
  const ValidationReport report = validate(mesh);
  if (!report.ok()) {
    std::string what = "mesh " + name + " failed validation:";
    for (const auto& m : report.messages) what += "\n  " + m;
    throw Error(what);
  }
}

// Curvature of the pre-smoothed mesh, clipped; nullopt on flat meshes.
std::optional<CurvatureField> shape_curvature(const TriMesh& mesh,
                                              const PipelineConfig& config) {
  const TriMesh smoothed =
      laplacian_smooth(mesh, config.smooth_iterations, config.smooth_step);
  const CurvatureEstimate estimate = gaussian_curvature(smoothed);
  try {
    return clip_curvature(mesh, estimate.vertex_k, config.clip_lo_pct,
                          config.clip_hi_pct);
  } catch (const AllZeroCurvature&) {
    return std::nullopt;
  }
}

SpectralBasis solve_domain(const TriMesh& mesh,
                           const std::optional<CurvatureField>& curv,
                           const StiffnessMatrix& stiffness, double alpha,
                           int k) {
  MassMatrix mass;
  if (alpha == 0.0) {
    mass = assemble_mass(mesh);
  } else {
    if (!curv)
      throw AllZeroCurvature(
          "flat mesh has no scale-invariant metric; use alpha = 0");
    mass = assemble_mass(mesh, *curv, alpha);
  }
  return eigensolve(stiffness, mass, k);
}

std::string alpha_tag(double alpha) {
  std::ostringstream ss;
  ss << alpha;
  std::string tag = ss.str();
  for (char& c : tag)
    if (c == '.') c = 'p';
  return tag;
}

std::filesystem::path cache_file(const std::filesystem::path& cache_dir,
                                 std::uint64_t key, double alpha) {
  std::ostringstream name;
  name << std::hex << key << "_a" << alpha_tag(alpha) << ".basis";
  return cache_dir / name.str();
}

// Zero-mean, unit-variance per channel; constant channels become zero.
Eigen::MatrixXd normalize_channels(const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = values;
  const auto n = static_cast<double>(values.rows());
  for (int c = 0; c < out.cols(); ++c) {
    const double mean = out.col(c).mean();
    out.col(c).array() -= mean;
    const double std = std::sqrt(out.col(c).squaredNorm() / n);
    if (std > 1e-300) out.col(c) /= std;
  }
  return out;
}

}  // namespace

std::uint64_t spectra_cache_key(const TriMesh& mesh,
                                const PipelineConfig& config, double alpha) {
  std::uint64_t h = mesh.content_hash();
  auto mix = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(alpha);
  mix(static_cast<double>(config.k));
  mix(config.clip_lo_pct);
  mix(config.clip_hi_pct);
  mix(static_cast<double>(config.smooth_iterations));
  mix(config.smooth_step);
  return h;
}

ShapeSpectra compute_spectra(const TriMesh& mesh, const PipelineConfig& config,
                             const std::filesystem::path& cache_dir,
                             SpectraSummary* summary) {
  config.validate();
  require_valid(mesh, "input");
  mesh.require_nondegenerate();

  std::vector<double> wanted = config.alphas;
  bool has_zero = false;
  for (double a : wanted) has_zero |= a == 0.0;
  if (!has_zero) wanted.push_back(0.0);  // descriptor domain

  const bool use_cache = !cache_dir.empty();
  if (use_cache) std::filesystem::create_directories(cache_dir);

  std::optional<CurvatureField> curv;
  std::optional<StiffnessMatrix> stiffness;
  bool prepared = false;

  ShapeSpectra out;
  for (std::size_t w = 0; w < wanted.size(); ++w) {
    const double alpha = wanted[w];
    const bool is_extra_zero = !has_zero && w + 1 == wanted.size();
    std::filesystem::path file;
    std::optional<SpectralBasis> basis;
    if (use_cache) {
      file = cache_file(cache_dir, spectra_cache_key(mesh, config, alpha),
                        alpha);
      if (std::filesystem::exists(file)) {
        basis = read_basis_cache(file);
        if (summary) ++summary->cache_hits;
      }
    }
    if (!basis) {
      if (!prepared) {
        bool needs_curvature = false;
        for (double a : wanted) needs_curvature |= a != 0.0;
        if (needs_curvature) curv = shape_curvature(mesh, config);
        stiffness = assemble_stiffness(mesh);
        prepared = true;
      }
      basis = solve_domain(mesh, curv, *stiffness, alpha, config.k);
      if (use_cache) write_basis_cache(*basis, file);
      if (summary) ++summary->computed;
    }
    if (summary && !is_extra_zero) summary->files.push_back(file);
    if (alpha == 0.0) out.euclidean = *basis;
    if (!is_extra_zero) out.bases.push_back(std::move(*basis));
  }
  return out;
}

SpectraSummary cmd_spectra(const std::filesystem::path& mesh_path,
                           const PipelineConfig& config,
                           const std::filesystem::path& cache_dir) {
  const TriMesh mesh = load_mesh(mesh_path);
  SpectraSummary summary;
  compute_spectra(mesh, config, cache_dir, &summary);
  return summary;
}

MatchResult match_meshes(const TriMesh& source, const TriMesh& target,
                         const PipelineConfig& config,
                         const std::filesystem::path& cache_dir) {
  const ShapeSpectra sx = compute_spectra(source, config, cache_dir);
  const ShapeSpectra sy = compute_spectra(target, config, cache_dir);

  // Intrinsic descriptors from the Euclidean domain of each shape,
  // channel-normalized before any least squares.
  DescriptorSet fx, fy;
  if (config.descriptor_kind == DescriptorKind::HKS) {
    fx = hks(sx.euclidean, default_hks_times(sx.euclidean,
                                             config.descriptor_count));
    fy = hks(sy.euclidean, default_hks_times(sy.euclidean,
                                             config.descriptor_count));
  } else {
    fx = wks(sx.euclidean, config.descriptor_count, config.wks_variance_scale);
    fy = wks(sy.euclidean, config.descriptor_count, config.wks_variance_scale);
  }
  fx.values = normalize_channels(fx.values);
  fy.values = normalize_channels(fy.values);

  std::vector<const SpectralBasis*> bx, by;
  for (const auto& b : sx.bases) bx.push_back(&b);
  for (const auto& b : sy.bases) by.push_back(&b);
  project_all(fx, bx);
  project_all(fy, by);

  const std::size_t num_domains = config.alphas.size();
  std::vector<FunctionalMapPair> pairs(num_domains);
  std::vector<DomainLossData> data(num_domains);
  for (std::size_t s = 0; s < num_domains; ++s) {
    const SpectralBasis& basis_x = sx.bases[s];
    const SpectralBasis& basis_y = sy.bases[s];
    const Eigen::MatrixXd& f_coeffs = fx.projections.at(basis_x.alpha);
    const Eigen::MatrixXd& g_coeffs = fy.projections.at(basis_y.alpha);
    pairs[s].alpha = basis_x.alpha;
    pairs[s].c_xy = solve_lsq(f_coeffs, g_coeffs);
    pairs[s].c_yx = solve_lsq(g_coeffs, f_coeffs);
    data[s].lambda_x = basis_x.eigenvalues;
    data[s].lambda_y = basis_y.eigenvalues;
    for (int c = 0; c < fx.values.cols(); c += config.descriptor_stride) {
      data[s].mult_x.push_back(mult_operator(basis_x, fx.values.col(c)));
      data[s].mult_y.push_back(mult_operator(basis_y, fy.values.col(c)));
    }
  }

  RefineResult refined = refine(pairs, config.weights, data, config.optimizer);

  std::vector<DomainMatch> matches;
  matches.reserve(num_domains);
  for (std::size_t s = 0; s < num_domains; ++s)
    matches.push_back(pointwise_from_map(refined.pairs[s].c_xy, sx.bases[s],
                                         sy.bases[s]));

  MatchResult result;
  result.correspondence = fuse(matches, source.num_vertices());
  result.pairs = std::move(refined.pairs);
  result.trace = std::move(refined.trace);
  return result;
}

MatchResult cmd_match(const std::filesystem::path& source_mesh,
                      const std::filesystem::path& target_mesh,
                      const PipelineConfig& config,
                      const std::filesystem::path& out_dir) {
  const TriMesh source = load_mesh(source_mesh);
  const TriMesh target = load_mesh(target_mesh);
  std::filesystem::create_directories(out_dir);

  MatchResult result =
      match_meshes(source, target, config, out_dir / config.cache_dir);

  const auto corr_file = out_dir / "correspondence.txt";
  write_correspondence(result.correspondence, corr_file);
  result.files.push_back(corr_file);
  for (const auto& pair : result.pairs) {
    const std::string tag = alpha_tag(pair.alpha);
    const auto fwd = out_dir / ("fmap_a" + tag + "_xy.bin");
    const auto bwd = out_dir / ("fmap_a" + tag + "_yx.bin");
    write_fmap(pair.c_xy, pair.alpha, 0, fwd);
    write_fmap(pair.c_yx, pair.alpha, 1, bwd);
    result.files.push_back(fwd);
    result.files.push_back(bwd);
  }
  const auto trace_file = out_dir / "loss_trace.csv";
  write_loss_trace(result.trace, trace_file);
  result.files.push_back(trace_file);
  return result;
}

ErrorCurve cmd_eval(const std::filesystem::path& correspondence_file,
                    const std::filesystem::path& ground_truth_file,
                    const std::filesystem::path& source_mesh,
                    const std::filesystem::path& out_csv) {
  const Correspondence corr = read_correspondence(correspondence_file);
  const std::vector<int> gt = read_ground_truth(ground_truth_file);
  const TriMesh mesh = load_mesh(source_mesh);
  const GeodesicOracle oracle(mesh);
  ErrorCurve curve = geodesic_error(corr, gt, oracle);
  emit_curve(curve, out_csv);
  return curve;
}

void cmd_deform(const std::filesystem::path& mesh_path, int seed_vertex,
                double radius, double factor,
                const std::filesystem::path& out_mesh,
                const std::filesystem::path& out_ground_truth) {
  const TriMesh mesh = load_mesh(mesh_path);
  const TriMesh deformed = local_scale_deform(mesh, seed_vertex, radius,
                                              factor);
  write_off(deformed, out_mesh);
  std::vector<int> identity(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) identity[i] = i;
  write_ground_truth(identity, out_ground_truth);
}

}  // namespace sispec
