#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sispec/errors.hpp"

namespace sispec {

/// Undirected edge with its incident faces (1 on a boundary, 2 interior).
struct Edge {
  int v0 = -1;  // v0 < v1
  int v1 = -1;
  int f0 = -1;
  int f1 = -1;       // -1 on boundary edges
  int face_count = 0;  // may exceed 2 on non-manifold input
  int forward = 0;   // times traversed as v0->v1 across incident faces
  int backward = 0;

  bool boundary() const { return face_count == 1; }
};

/// Immutable triangle mesh with derived adjacency.
///
/// Construction builds edges, one-rings and per-face areas once; after
/// that the mesh is safe to share across threads.
class TriMesh {
 public:
  TriMesh(std::vector<Eigen::Vector3d> vertices,
          std::vector<std::array<int, 3>> faces);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Eigen::Vector3d>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Vertex indices adjacent to vertex i (unordered one-ring).
  const std::vector<int>& one_ring(int i) const { return rings_[i]; }
  /// Faces incident to vertex i.
  const std::vector<int>& incident_faces(int i) const { return vfaces_[i]; }

  /// Euclidean area of each face (cross product magnitude / 2).
  const std::vector<double>& face_areas() const { return areas_; }
  double total_area() const { return total_area_; }
  double bbox_diagonal() const { return bbox_diagonal_; }

  /// Degeneracy threshold: 1e-12 * diag^2, overridable at construction.
  double area_epsilon() const { return area_epsilon_; }

  /// Throws DegenerateFace if any face area <= area_epsilon.
  void require_nondegenerate() const;

  /// Index into edges() for the undirected pair (a, b), or -1.
  int edge_index(int a, int b) const;

  /// Interior angle at corner c of face f.
  double corner_angle(int f, int c) const;

  /// Angles opposite an edge, one per incident face.
  std::vector<double> opposite_angles(int edge) const;

  /// Same connectivity, new positions.
  TriMesh with_vertices(std::vector<Eigen::Vector3d> vertices) const;

  /// FNV-1a hash of positions and connectivity, for cache keys.
  std::uint64_t content_hash() const;

 private:
  void build_adjacency();

  std::vector<Eigen::Vector3d> vertices_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> rings_;
  std::vector<std::vector<int>> vfaces_;
  std::vector<std::pair<std::int64_t, int>> edge_lookup_;  // sorted (key, idx)
  std::vector<double> areas_;
  double total_area_ = 0.0;
  double bbox_diagonal_ = 0.0;
  double area_epsilon_ = 0.0;
};

struct ValidationReport {
  int num_vertices = 0;
  int num_faces = 0;
  int num_boundary_edges = 0;
  std::vector<int> nonmanifold_edges;     // shared by >= 3 faces
  std::vector<int> degenerate_faces;      // area <= area_epsilon
  std::vector<int> inconsistent_edges;    // same direction in both faces
  std::vector<int> invalid_faces;         // bad index or repeated vertex
  std::vector<std::string> messages;

  bool ok() const {
    return nonmanifold_edges.empty() && degenerate_faces.empty() &&
           inconsistent_edges.empty() && invalid_faces.empty();
  }
};

/// Checks every TriMesh invariant; reports, never throws.
ValidationReport validate(const TriMesh& mesh);

/// Per-face Euclidean areas; throws DegenerateFace below area_epsilon.
std::vector<double> triangle_areas(const TriMesh& mesh);

}  // namespace sispec
