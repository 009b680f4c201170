#pragma once

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "sispec/generators.hpp"
#include "sispec/mesh.hpp"

namespace testsupport {

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("sispec_" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path);
  out << text;
}

inline sispec::TriMesh uniform_scale(const sispec::TriMesh& mesh, double s) {
  std::vector<Eigen::Vector3d> verts = mesh.vertices();
  for (auto& v : verts) v *= s;
  return mesh.with_vertices(std::move(verts));
}

// Vertex relabeling: new vertex perm[i] is old vertex i.
inline sispec::TriMesh permute_vertices(const sispec::TriMesh& mesh,
                                        const std::vector<int>& perm) {
  std::vector<Eigen::Vector3d> verts(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i)
    verts[perm[i]] = mesh.vertices()[i];
  std::vector<std::array<int, 3>> faces = mesh.faces();
  for (auto& f : faces)
    for (int& v : f) v = perm[v];
  return sispec::TriMesh(std::move(verts), std::move(faces));
}

inline std::vector<int> random_permutation(int n, unsigned seed) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

inline sispec::TriMesh single_triangle() {
  return sispec::TriMesh(
      {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}, {{{0, 1, 2}}});
}

}  // namespace testsupport
