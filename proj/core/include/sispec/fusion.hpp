#pragma once

#include <filesystem>
#include <vector>

#include "sispec/fmap.hpp"
#include "sispec/spectral.hpp"

namespace sispec {

/// Global statistics over every candidate pair distance in one domain.
struct DomainStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Nearest-neighbor result of one spectral domain.
struct DomainMatch {
  std::vector<int> mapping;        // per target vertex, best source vertex
  std::vector<double> distance;    // winning raw distance per target vertex
  DomainStats stats;
};

/// Dense target-to-source correspondence with provenance.
struct Correspondence {
  std::vector<int> mapping;          // target vertex -> source vertex
  std::vector<int> winning_domain;   // per vertex, fused domain index
  std::vector<double> score;         // normalized distance of the winner
  int num_source_vertices = 0;
};

/// Per-target-vertex argmin over aligned spectral embeddings: source
/// vertex j embeds as C * row_j(Phi), target vertex i as row_i(Psi).
/// Also accumulates min/max/mean over all candidate distances.
DomainMatch pointwise_from_map(const Eigen::MatrixXd& c,
                               const SpectralBasis& source,
                               const SpectralBasis& target);

/// (d - min)/(max - min) minus the mean of the normalized distances.
/// Degenerate domains (max == min) map everything to 0.
std::vector<double> normalize_distances(const std::vector<double>& distances,
                                        const DomainStats& stats);
double normalize_distance(double d, const DomainStats& stats);

/// Cross-domain argmin of normalized distances; ties break to the lowest
/// domain index, then the lowest source vertex.
Correspondence fuse(const std::vector<DomainMatch>& domains,
                    int num_source_vertices);

/// Plain text, one line per target vertex:
/// "target_index source_index domain_index normalized_distance".
void write_correspondence(const Correspondence& corr,
                          const std::filesystem::path& path);
Correspondence read_correspondence(const std::filesystem::path& path);

}  // namespace sispec
