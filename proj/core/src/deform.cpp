#include "sispec/deform.hpp"

#include <cmath>

#include "sispec/geodesic.hpp"

namespace sispec {

TriMesh local_scale_deform(const TriMesh& mesh, int seed, double radius,
                           double factor) {
  if (seed < 0 || seed >= mesh.num_vertices())
    throw SeedOutOfRange("seed vertex " + std::to_string(seed));
  if (radius <= 0.0) throw Error("radius must be positive");
  if (factor <= 0.0) throw Error("factor must be positive");

  if (factor == 1.0) return mesh;  // bit-identical positions

  const auto dist = edge_graph_distances(mesh, seed, false);

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  int inside = 0;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (dist[i] <= radius) {
      centroid += mesh.vertices()[i];
      ++inside;
    }
  centroid /= static_cast<double>(inside);

  std::vector<Eigen::Vector3d> out = mesh.vertices();
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    if (dist[i] > radius) continue;
    const double w = 0.5 * (1.0 + std::cos(M_PI * dist[i] / radius));
    out[i] += w * (factor - 1.0) * (out[i] - centroid);
  }
  return mesh.with_vertices(std::move(out));
}

}  // namespace sispec
