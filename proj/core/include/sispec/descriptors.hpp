#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "sispec/spectral.hpp"

namespace sispec {

enum class DescriptorKind { HKS, WKS };

/// Per-vertex descriptor channels plus their projections into each
/// spectral domain (keyed by alpha).
struct DescriptorSet {
  Eigen::MatrixXd values;  // n x d
  DescriptorKind kind = DescriptorKind::HKS;
  std::vector<double> parameters;  // time or energy samples
  std::map<double, Eigen::MatrixXd> projections;  // alpha -> k x d
};

/// Heat kernel signature sum_i exp(-lambda_i t) phi_i(x)^2 at each time.
/// Default times are log-spaced over [4 ln 10 / lambda_{k-1},
/// 4 ln 10 / lambda_1], 100 samples.
DescriptorSet hks(const SpectralBasis& basis,
                  const std::vector<double>& times = {});
std::vector<double> default_hks_times(const SpectralBasis& basis,
                                      int count = 100);

/// Wave kernel signature with band-pass Gaussian weights in the
/// log-eigenvalue domain; energies uniform in [log lambda_1,
/// log lambda_{k-1}], sigma = variance_scale * energy step.
DescriptorSet wks(const SpectralBasis& basis, int num_energies = 100,
                  double variance_scale = 7.0);

/// Fills in the projection block for each basis; idempotent.
void project_all(DescriptorSet& desc,
                 const std::vector<const SpectralBasis*>& bases);

/// Binary descriptor cache: header {n, d, kind, parameter count},
/// parameters, then values row-major.
void write_descriptor_cache(const DescriptorSet& desc,
                            const std::filesystem::path& path);
DescriptorSet read_descriptor_cache(const std::filesystem::path& path);

}  // namespace sispec
