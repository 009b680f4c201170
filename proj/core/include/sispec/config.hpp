#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sispec/descriptors.hpp"
#include "sispec/fmap.hpp"

namespace sispec {

/// Every knob of the pipeline with its default. Serialized as a flat
/// key = value text file so runs are reproducible from the artifact dir.
struct PipelineConfig {
  std::vector<double> alphas = {0.5, 0.6, 0.8};
  int k = 30;
  double clip_lo_pct = 0.4;
  double clip_hi_pct = 75.0;
  int smooth_iterations = 3;
  double smooth_step = 0.5;
  DescriptorKind descriptor_kind = DescriptorKind::WKS;
  int descriptor_count = 100;
  double wks_variance_scale = 7.0;
  int descriptor_stride = 10;  // every n-th channel feeds the E4 operators
  LossWeights weights;
  OptimizerConfig optimizer;
  std::string cache_dir = "cache";
  unsigned seed = 0;

  /// The near-isometric default alpha set {0, 0.6, 0.8}.
  static PipelineConfig near_isometric();

  void validate() const;  // throws ConfigError
};

PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const PipelineConfig& config,
                 const std::filesystem::path& path);

/// Parses "a,b,c" into doubles; used for --alphas.
std::vector<double> parse_double_list(const std::string& text);

}  // namespace sispec
