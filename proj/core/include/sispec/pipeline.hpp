#pragma once

#include <filesystem>

#include "sispec/config.hpp"
#include "sispec/deform.hpp"
#include "sispec/eval.hpp"
#include "sispec/fusion.hpp"
#include "sispec/mesh_io.hpp"

namespace sispec {

/// All spectral domains of one shape: the alpha set from the config plus
/// the Euclidean basis the descriptors are computed from.
struct ShapeSpectra {
  std::vector<SpectralBasis> bases;   // one per config alpha, same order
  SpectralBasis euclidean;            // alpha = 0, descriptor domain
};

struct SpectraSummary {
  std::vector<std::filesystem::path> files;
  int computed = 0;
  int cache_hits = 0;
};

struct MatchResult {
  Correspondence correspondence;
  std::vector<FunctionalMapPair> pairs;
  std::vector<RefineTraceRow> trace;
  std::vector<std::filesystem::path> files;
};

/// Smooth, estimate curvature, assemble and solve one basis per alpha.
/// Transparently backed by the on-disk cache when `cache_dir` is set.
ShapeSpectra compute_spectra(const TriMesh& mesh, const PipelineConfig& config,
                             const std::filesystem::path& cache_dir = {},
                             SpectraSummary* summary = nullptr);

/// `spectra` subcommand: validate, compute, write one cache file per alpha.
SpectraSummary cmd_spectra(const std::filesystem::path& mesh_path,
                           const PipelineConfig& config,
                           const std::filesystem::path& cache_dir);

/// `match` subcommand: descriptors, per-domain least squares, joint
/// refinement, multispectral fusion. Writes the correspondence file, the
/// functional maps and the loss trace into `out_dir`.
MatchResult cmd_match(const std::filesystem::path& source_mesh,
                      const std::filesystem::path& target_mesh,
                      const PipelineConfig& config,
                      const std::filesystem::path& out_dir);

/// In-memory variant used by tests and by cmd_match.
MatchResult match_meshes(const TriMesh& source, const TriMesh& target,
                         const PipelineConfig& config,
                         const std::filesystem::path& cache_dir = {});

/// `eval` subcommand: error curve CSV + SVG from a correspondence file.
ErrorCurve cmd_eval(const std::filesystem::path& correspondence_file,
                    const std::filesystem::path& ground_truth_file,
                    const std::filesystem::path& source_mesh,
                    const std::filesystem::path& out_csv);

/// `deform` subcommand: locally scaled mesh plus identity ground truth.
void cmd_deform(const std::filesystem::path& mesh_path, int seed_vertex,
                double radius, double factor,
                const std::filesystem::path& out_mesh,
                const std::filesystem::path& out_ground_truth);

/// Cache key covering the mesh content and the config fields that affect
/// a basis.
std::uint64_t spectra_cache_key(const TriMesh& mesh,
                                const PipelineConfig& config, double alpha);

}  // namespace sispec
