#pragma once

#include <vector>

#include "sispec/mesh.hpp"

namespace sispec {

/// Single-source shortest paths on the edge graph with Euclidean edge
/// lengths. Unnormalized; throws DisconnectedMesh when `require_connected`
/// and some vertex is unreachable (unreachable entries are +inf otherwise).
std::vector<double> edge_graph_distances(const TriMesh& mesh, int source,
                                         bool require_connected = true);

/// Geodesic distances normalized by sqrt(total surface area), the unit
/// used for correspondence error.
class GeodesicOracle {
 public:
  explicit GeodesicOracle(const TriMesh& mesh);

  /// Normalized distances from `source` to every vertex.
  std::vector<double> distances_from(int source) const;

  double normalization() const { return norm_; }
  const TriMesh& mesh() const { return *mesh_; }

 private:
  const TriMesh* mesh_;
  double norm_;
};

}  // namespace sispec
