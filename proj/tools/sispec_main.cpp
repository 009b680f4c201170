// sispec: scale-invariant multispectral shape correspondence pipeline.
//
// Subcommands: spectra, match, eval, deform, selftest.
// Exit codes: 0 success, 1 validation failure, 2 numerical failure, 3 I/O.

#include <CLI11.hpp>
#include <iostream>

#include "sispec/generators.hpp"
#include "sispec/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string config_path;
  std::string alphas;
  int k = -1;
  std::string out_dir = ".";
  std::string cache_dir;
  unsigned seed = 0;
  bool seed_set = false;
};

sispec::PipelineConfig resolve_config(const CommonOptions& opts) {
  sispec::PipelineConfig config;
  if (!opts.config_path.empty())
    config = sispec::load_config(opts.config_path);
  if (!opts.alphas.empty())
    config.alphas = sispec::parse_double_list(opts.alphas);
  if (opts.k > 0) config.k = opts.k;
  if (!opts.cache_dir.empty()) config.cache_dir = opts.cache_dir;
  if (opts.seed_set) config.seed = opts.seed;
  config.validate();
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Pipeline config file");
  cmd->add_option("--alphas", opts.alphas,
                  "Comma-separated interpolation exponents, each in [0,1]");
  cmd->add_option("--k", opts.k, "Basis size per spectral domain");
  cmd->add_option("--out-dir", opts.out_dir, "Output directory");
  cmd->add_option("--cache-dir", opts.cache_dir, "Spectra cache directory");
  cmd->add_option("--seed", opts.seed, "Run seed (recorded for determinism)")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
}

int run_selftest() {
  int failures = 0;
  auto check = [&failures](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failures;
  };

  const sispec::TriMesh sphere = sispec::icosphere(2);
  check("icosphere Euler characteristic",
        sphere.num_vertices() - sphere.num_edges() + sphere.num_faces() == 2);
  check("icosphere validates", sispec::validate(sphere).ok());

  const auto stiffness = sispec::assemble_stiffness(sphere);
  const Eigen::VectorXd ones =
      Eigen::VectorXd::Ones(sphere.num_vertices());
  check("stiffness rows sum to zero",
        (stiffness.W * ones).cwiseAbs().maxCoeff() < 1e-9);

  const auto mass = sispec::assemble_mass(sphere);
  check("Euclidean mass sums to surface area",
        std::abs(ones.dot(mass.B * ones) - sphere.total_area()) < 1e-9);

  const auto basis = sispec::eigensolve(stiffness, mass, 10);
  const Eigen::MatrixXd gram =
      basis.phi.transpose() * (mass.B * basis.phi);
  check("basis is B-orthonormal",
        (gram - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() <
            1e-8);
  check("first eigenvalue is the constant mode",
        basis.eigenvalues(0) < 1e-8 * basis.eigenvalues(9));

  const auto defects = sispec::angle_defects(sphere);
  double total_defect = 0.0;
  for (double d : defects) total_defect += d;
  check("Gauss-Bonnet on the sphere",
        std::abs(total_defect - 4.0 * M_PI) < 1e-9);

  const auto desc = sispec::hks(basis);
  check("HKS is finite and positive", desc.values.minCoeff() > 0.0);

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale-invariant multispectral non-rigid shape correspondence"};
  app.require_subcommand(1);

  CommonOptions opts;

  auto* spectra = app.add_subcommand(
      "spectra", "Precompute the spectral basis cache for a mesh");
  std::string mesh_path;
  spectra->add_option("mesh", mesh_path, "Input mesh (.off/.ply/.obj)")
      ->required();
  add_common(spectra, opts);

  auto* match = app.add_subcommand(
      "match", "Dense correspondence between a source and a target mesh");
  std::string source_path, target_path;
  match->add_option("source", source_path, "Source mesh")->required();
  match->add_option("target", target_path, "Target mesh")->required();
  add_common(match, opts);

  auto* eval = app.add_subcommand(
      "eval", "Geodesic-error curve for a correspondence file");
  std::string corr_path, gt_path, eval_source;
  std::vector<std::string> overlay_csvs;
  eval->add_option("correspondence", corr_path, "Correspondence file")
      ->required();
  eval->add_option("ground_truth", gt_path, "Ground-truth index file")
      ->required();
  eval->add_option("source_mesh", eval_source, "Source mesh")->required();
  eval->add_option("--overlay", overlay_csvs,
                   "Additional curve CSVs to overlay in the plot");
  add_common(eval, opts);

  auto* deform = app.add_subcommand(
      "deform", "Locally scale a mesh region; emits identity ground truth");
  std::string deform_mesh;
  int seed_vertex = 0;
  double radius = 0.0, factor = 1.0;
  deform->add_option("mesh", deform_mesh, "Input mesh")->required();
  deform->add_option("--seed-vertex", seed_vertex, "Region seed vertex")
      ->required();
  deform->add_option("--radius", radius, "Geodesic region radius")->required();
  deform->add_option("--factor", factor, "Scale factor")->required();
  add_common(deform, opts);

  auto* selftest =
      app.add_subcommand("selftest", "Run the built-in invariant checks");
  (void)selftest;

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) return run_selftest();

    const std::filesystem::path out_dir = opts.out_dir;
    if (spectra->parsed()) {
      const auto config = resolve_config(opts);
      const std::filesystem::path cache =
          opts.cache_dir.empty() ? out_dir / config.cache_dir
                                 : std::filesystem::path(opts.cache_dir);
      const auto summary = sispec::cmd_spectra(mesh_path, config, cache);
      std::cout << "spectra: " << summary.computed << " computed, "
                << summary.cache_hits << " cache hits\n";
      for (const auto& f : summary.files) std::cout << "  " << f.string() << "\n";
    } else if (match->parsed()) {
      const auto config = resolve_config(opts);
      std::cout << "descriptors: "
                << (config.descriptor_kind == sispec::DescriptorKind::HKS
                        ? "hks"
                        : "wks")
                << " (intrinsic; no learned refinement)\n";
      const auto result =
          sispec::cmd_match(source_path, target_path, config, out_dir);
      std::cout << "matched " << result.correspondence.mapping.size()
                << " target vertices across " << config.alphas.size()
                << " spectral domains\n";
      for (const auto& f : result.files) std::cout << "  " << f.string() << "\n";
    } else if (eval->parsed()) {
      std::filesystem::create_directories(out_dir);
      const auto csv = out_dir / "error_curve.csv";
      auto curve = sispec::cmd_eval(corr_path, gt_path, eval_source, csv);
      std::cout << "mean geodesic error: " << curve.mean_error << "\n"
                << "  " << csv.string() << "\n";
      if (!overlay_csvs.empty()) {
        std::vector<sispec::ErrorCurve> curves{curve};
        curves[0].label = "this run";
        for (const auto& extra : overlay_csvs) {
          auto c = sispec::read_curve_csv(extra);
          c.label = std::filesystem::path(extra).stem().string();
          curves.push_back(std::move(c));
        }
        sispec::emit_curves_svg(curves, out_dir / "error_curves.svg");
        std::cout << "  " << (out_dir / "error_curves.svg").string() << "\n";
      }
    } else if (deform->parsed()) {
      std::filesystem::create_directories(out_dir);
      const auto out_mesh = out_dir / "deformed.off";
      const auto out_gt = out_dir / "ground_truth.txt";
      sispec::cmd_deform(deform_mesh, seed_vertex, radius, factor, out_mesh,
                         out_gt);
      std::cout << "  " << out_mesh.string() << "\n"
                << "  " << out_gt.string() << "\n";
    }
  } catch (const sispec::ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const sispec::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const sispec::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const sispec::UnsupportedFormat& e) {
    std::cerr << "unsupported format: " << e.what() << "\n";
    return kExitIo;
  } catch (const sispec::ConvergenceFailure& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sispec::NotPositiveDefinite& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sispec::SingularSystem& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sispec::NonFiniteGradient& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sispec::DegenerateFace& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sispec::AllZeroCurvature& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sispec::DegenerateSpectrum& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sispec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
