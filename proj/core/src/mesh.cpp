#include "sispec/mesh.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace sispec {

namespace {

std::int64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

TriMesh::TriMesh(std::vector<Eigen::Vector3d> vertices,
                 std::vector<std::array<int, 3>> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  build_adjacency();
}

void TriMesh::build_adjacency() {
  const int n = num_vertices();
  const int m = num_faces();

  Eigen::Vector3d lo = Eigen::Vector3d::Constant(
      std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  bbox_diagonal_ = n > 0 ? (hi - lo).norm() : 0.0;
  area_epsilon_ = 1e-12 * bbox_diagonal_ * bbox_diagonal_;

  areas_.resize(m);
  total_area_ = 0.0;
  for (int f = 0; f < m; ++f) {
    const auto& t = faces_[f];
    bool valid = true;
    for (int c = 0; c < 3; ++c)
      if (t[c] < 0 || t[c] >= n) valid = false;
    if (valid && (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])) valid = false;
    if (!valid) {
      areas_[f] = 0.0;
      continue;
    }
    const Eigen::Vector3d e1 = vertices_[t[1]] - vertices_[t[0]];
    const Eigen::Vector3d e2 = vertices_[t[2]] - vertices_[t[0]];
    areas_[f] = 0.5 * e1.cross(e2).norm();
    total_area_ += areas_[f];
  }

  // Edge table keyed on the sorted vertex pair.
  std::vector<std::pair<std::int64_t, std::pair<int, int>>> half;  // key -> (face, corner)
  half.reserve(3 * m);
  for (int f = 0; f < m; ++f) {
    const auto& t = faces_[f];
    bool valid = true;
    for (int c = 0; c < 3; ++c)
      if (t[c] < 0 || t[c] >= n) valid = false;
    if (!valid || t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
    for (int c = 0; c < 3; ++c)
      half.push_back({edge_key(t[c], t[(c + 1) % 3]), {f, c}});
  }
  std::sort(half.begin(), half.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  edges_.clear();
  edge_lookup_.clear();
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    while (j < half.size() && half[j].first == half[i].first) ++j;
    Edge e;
    e.v0 = static_cast<int>(half[i].first >> 32);
    e.v1 = static_cast<int>(half[i].first & 0xffffffff);
    for (std::size_t k = i; k < j; ++k) {
      const auto [f, c] = half[k].second;
      const auto& t = faces_[f];
      if (e.face_count == 0)
        e.f0 = f;
      else if (e.face_count == 1)
        e.f1 = f;
      ++e.face_count;
      if (t[c] == e.v0)
        ++e.forward;
      else
        ++e.backward;
    }
    edge_lookup_.push_back({half[i].first, static_cast<int>(edges_.size())});
    edges_.push_back(e);
    i = j;
  }

  rings_.assign(n, {});
  for (const auto& e : edges_) {
    rings_[e.v0].push_back(e.v1);
    rings_[e.v1].push_back(e.v0);
  }
  vfaces_.assign(n, {});
  for (int f = 0; f < m; ++f)
    for (int c = 0; c < 3; ++c) {
      const int v = faces_[f][c];
      if (v >= 0 && v < n &&
          (vfaces_[v].empty() || vfaces_[v].back() != f))
        vfaces_[v].push_back(f);
    }
}

void TriMesh::require_nondegenerate() const {
  for (int f = 0; f < num_faces(); ++f)
    if (areas_[f] <= area_epsilon_)
      throw DegenerateFace("face " + std::to_string(f) + " has area " +
                           std::to_string(areas_[f]));
}

int TriMesh::edge_index(int a, int b) const {
  const std::int64_t key = edge_key(a, b);
  auto it = std::lower_bound(
      edge_lookup_.begin(), edge_lookup_.end(), key,
      [](const auto& p, std::int64_t k) { return p.first < k; });
  if (it == edge_lookup_.end() || it->first != key) return -1;
  return it->second;
}

double TriMesh::corner_angle(int f, int c) const {
  const auto& t = faces_[f];
  const Eigen::Vector3d& p = vertices_[t[c]];
  const Eigen::Vector3d u = vertices_[t[(c + 1) % 3]] - p;
  const Eigen::Vector3d v = vertices_[t[(c + 2) % 3]] - p;
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

std::vector<double> TriMesh::opposite_angles(int edge) const {
  const Edge& e = edges_[edge];
  std::vector<double> out;
  for (int f : {e.f0, e.f1}) {
    if (f < 0) continue;
    const auto& t = faces_[f];
    for (int c = 0; c < 3; ++c)
      if (t[c] != e.v0 && t[c] != e.v1) {
        out.push_back(corner_angle(f, c));
        break;
      }
  }
  return out;
}

TriMesh TriMesh::with_vertices(std::vector<Eigen::Vector3d> vertices) const {
  if (static_cast<int>(vertices.size()) != num_vertices())
    throw DimensionMismatch("vertex count changed");
  return TriMesh(std::move(vertices), faces_);
}

std::uint64_t TriMesh::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : vertices_) {
    double buf[3] = {v.x(), v.y(), v.z()};
    mix(buf, sizeof(buf));
  }
  for (const auto& f : faces_) mix(f.data(), sizeof(int) * 3);
  return h;
}

ValidationReport validate(const TriMesh& mesh) {
  ValidationReport r;
  r.num_vertices = mesh.num_vertices();
  r.num_faces = mesh.num_faces();

  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.faces()[f];
    bool bad = false;
    for (int c = 0; c < 3; ++c)
      if (t[c] < 0 || t[c] >= mesh.num_vertices()) bad = true;
    if (!bad && (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])) bad = true;
    if (bad) {
      r.invalid_faces.push_back(f);
      r.messages.push_back("face " + std::to_string(f) +
                           ": invalid or repeated vertex index");
      continue;
    }
    if (mesh.face_areas()[f] <= mesh.area_epsilon()) {
      r.degenerate_faces.push_back(f);
      r.messages.push_back("face " + std::to_string(f) + ": degenerate area");
    }
  }

  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (edge.face_count == 1) ++r.num_boundary_edges;
    if (edge.face_count >= 3) {
      r.nonmanifold_edges.push_back(e);
      r.messages.push_back("edge (" + std::to_string(edge.v0) + "," +
                           std::to_string(edge.v1) + "): shared by " +
                           std::to_string(edge.face_count) + " faces");
    } else if (edge.face_count == 2 &&
               (edge.forward != 1 || edge.backward != 1)) {
      r.inconsistent_edges.push_back(e);
      r.messages.push_back("edge (" + std::to_string(edge.v0) + "," +
                           std::to_string(edge.v1) +
                           "): inconsistent orientation");
    }
  }
  return r;
}

std::vector<double> triangle_areas(const TriMesh& mesh) {
  mesh.require_nondegenerate();
  return mesh.face_areas();
}

}  // namespace sispec
