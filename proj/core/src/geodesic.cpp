#include "sispec/geodesic.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace sispec {

std::vector<double> edge_graph_distances(const TriMesh& mesh, int source,
                                         bool require_connected) {
  const int n = mesh.num_vertices();
  if (source < 0 || source >= n)
    throw SeedOutOfRange("source vertex " + std::to_string(source));

  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (int v : mesh.one_ring(u)) {
      const double w =
          (mesh.vertices()[u] - mesh.vertices()[v]).norm();
      if (dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        queue.push({dist[v], v});
      }
    }
  }

  if (require_connected) {
    int unreachable = 0;
    for (double d : dist)
      if (!std::isfinite(d)) ++unreachable;
    if (unreachable > 0)
      throw DisconnectedMesh(std::to_string(unreachable) +
                             " vertices unreachable from vertex " +
                             std::to_string(source));
  }
  return dist;
}

GeodesicOracle::GeodesicOracle(const TriMesh& mesh)
    : mesh_(&mesh), norm_(std::sqrt(mesh.total_area())) {}

std::vector<double> GeodesicOracle::distances_from(int source) const {
  auto dist = edge_graph_distances(*mesh_, source);
  for (double& d : dist) d /= norm_;
  return dist;
}

}  // namespace sispec
