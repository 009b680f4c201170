#include "sispec/generators.hpp"

#include <cmath>
#include <map>

namespace sispec {

namespace {

int midpoint(std::map<std::pair<int, int>, int>& cache,
             std::vector<Eigen::Vector3d>& verts, int a, int b) {
  const auto key = std::minmax(a, b);
  const auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const int idx = static_cast<int>(verts.size());
  verts.push_back(((verts[a] + verts[b]) / 2.0).normalized());
  cache.emplace(key, idx);
  return idx;
}

}  // namespace

TriMesh icosphere(int subdivisions, double radius) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> cache;
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = midpoint(cache, verts, f[0], f[1]);
      const int bc = midpoint(cache, verts, f[1], f[2]);
      const int ca = midpoint(cache, verts, f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces.swap(next);
  }
  if (radius != 1.0)
    for (auto& v : verts) v *= radius;
  return TriMesh(std::move(verts), std::move(faces));
}

TriMesh bumpy_sphere(int subdivisions, double amplitude) {
  TriMesh sphere = icosphere(subdivisions);
  std::vector<Eigen::Vector3d> verts = sphere.vertices();
  for (auto& v : verts) {
    const double theta = std::acos(std::clamp(v.z(), -1.0, 1.0));
    const double phi = std::atan2(v.y(), v.x());
    // Low-order harmonics with mixed parity in theta (sin(3t), cos(2t),
    // sin(t) are all even about the equator, cos(t) and sin(2t) are odd)
    // and incommensurate phases in phi, so no icosahedral symmetry
    // survives - in particular no mirror about any plane.
    const double bump = std::sin(3.0 * theta) * std::sin(2.0 * phi) +
                        0.7 * std::cos(2.0 * theta) * std::sin(phi + 0.9) +
                        0.4 * std::sin(theta) * std::cos(3.0 * phi + 0.4) +
                        0.5 * std::cos(theta) * std::cos(phi + 0.2) +
                        0.3 * std::sin(2.0 * theta) * std::sin(2.0 * phi - 0.7);
    v *= 1.0 + amplitude * bump;
  }
  return sphere.with_vertices(std::move(verts));
}

TriMesh planar_grid(int nx, int ny, double spacing) {
  std::vector<Eigen::Vector3d> verts;
  verts.reserve(static_cast<std::size_t>(nx) * ny);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x)
      verts.emplace_back(x * spacing, y * spacing, 0.0);
  std::vector<std::array<int, 3>> faces;
  for (int y = 0; y + 1 < ny; ++y)
    for (int x = 0; x + 1 < nx; ++x) {
      const int a = y * nx + x;
      const int b = a + 1;
      const int c = a + nx;
      const int d = c + 1;
      faces.push_back({a, b, d});
      faces.push_back({a, d, c});
    }
  return TriMesh(std::move(verts), std::move(faces));
}

}  // namespace sispec
