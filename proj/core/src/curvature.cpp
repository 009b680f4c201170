#include "sispec/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace sispec {

namespace {

std::vector<bool> boundary_vertices(const TriMesh& mesh) {
  std::vector<bool> boundary(mesh.num_vertices(), false);
  for (const Edge& e : mesh.edges())
    if (e.boundary()) {
      boundary[e.v0] = true;
      boundary[e.v1] = true;
    }
  return boundary;
}

Eigen::Vector3d vertex_normal(const TriMesh& mesh, int i) {
  // Angle-weighted average of incident face normals.
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  for (int f : mesh.incident_faces(i)) {
    const auto& t = mesh.faces()[f];
    int c = 0;
    while (t[c] != i) ++c;
    const Eigen::Vector3d e1 = mesh.vertices()[t[1]] - mesh.vertices()[t[0]];
    const Eigen::Vector3d e2 = mesh.vertices()[t[2]] - mesh.vertices()[t[0]];
    Eigen::Vector3d fn = e1.cross(e2);
    const double len = fn.norm();
    if (len <= 0.0) continue;
    n += (mesh.corner_angle(f, c) / len) * fn;
  }
  const double len = n.norm();
  return len > 0.0 ? Eigen::Vector3d(n / len) : Eigen::Vector3d::UnitZ();
}

// Linear-interpolation percentile of a sorted sample.
double percentile(const std::vector<double>& sorted, double pct) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double rank = pct / 100.0 * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, n - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

TriMesh laplacian_smooth(const TriMesh& mesh, int iterations, double step) {
  if (iterations == 0) return mesh;
  const auto boundary = boundary_vertices(mesh);
  std::vector<Eigen::Vector3d> pos = mesh.vertices();
  std::vector<Eigen::Vector3d> next(pos.size());
  for (int it = 0; it < iterations; ++it) {
    for (int i = 0; i < mesh.num_vertices(); ++i) {
      const auto& ring = mesh.one_ring(i);
      if (boundary[i] || ring.empty()) {
        next[i] = pos[i];
        continue;
      }
      Eigen::Vector3d avg = Eigen::Vector3d::Zero();
      for (int j : ring) avg += pos[j];
      avg /= static_cast<double>(ring.size());
      next[i] = pos[i] + step * (avg - pos[i]);
    }
    pos.swap(next);
  }
  return mesh.with_vertices(std::move(pos));
}

std::vector<double> angle_defects(const TriMesh& mesh) {
  std::vector<double> defect(mesh.num_vertices(), 2.0 * M_PI);
  for (int f = 0; f < mesh.num_faces(); ++f)
    for (int c = 0; c < 3; ++c)
      defect[mesh.faces()[f][c]] -= mesh.corner_angle(f, c);
  return defect;
}

CurvatureEstimate gaussian_curvature(const TriMesh& mesh) {
  const int n = mesh.num_vertices();
  CurvatureEstimate est;
  est.vertex_k.resize(n);
  est.used_fallback.assign(n, false);

  const auto defects = angle_defects(mesh);

  for (int i = 0; i < n; ++i) {
    std::set<int> nbrs(mesh.one_ring(i).begin(), mesh.one_ring(i).end());
    if (nbrs.size() < 5) {
      for (int j : mesh.one_ring(i))
        for (int l : mesh.one_ring(j))
          if (l != i) nbrs.insert(l);
    }

    const Eigen::Vector3d normal = vertex_normal(mesh, i);
    Eigen::Vector3d t1 = normal.unitOrthogonal();
    Eigen::Vector3d t2 = normal.cross(t1);

    const auto m = static_cast<int>(nbrs.size());
    bool ok = m >= 3;
    if (ok) {
      Eigen::MatrixXd design(m, 3);
      Eigen::VectorXd height(m);
      int row = 0;
      for (int j : nbrs) {
        const Eigen::Vector3d d = mesh.vertices()[j] - mesh.vertices()[i];
        const double x = d.dot(t1);
        const double y = d.dot(t2);
        design(row, 0) = 0.5 * x * x;
        design(row, 1) = x * y;
        design(row, 2) = 0.5 * y * y;
        height(row) = d.dot(normal);
        ++row;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(
          design, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const double smax = svd.singularValues()(0);
      const double smin = svd.singularValues()(2);
      if (smax <= 0.0 || smin < 1e-10 * smax) {
        ok = false;
      } else {
        const Eigen::Vector3d abc = svd.solve(height);
        est.vertex_k[i] = abc(0) * abc(2) - abc(1) * abc(1);
        ok = std::isfinite(est.vertex_k[i]);
      }
    }
    if (!ok) {
      // Angle-defect fallback over the barycentric vertex area.
      double area = 0.0;
      for (int f : mesh.incident_faces(i)) area += mesh.face_areas()[f];
      area /= 3.0;
      est.vertex_k[i] = area > 0.0 ? defects[i] / area : 0.0;
      est.used_fallback[i] = true;
    }
  }
  return est;
}

CurvatureField clip_curvature(const TriMesh& mesh,
                              const std::vector<double>& vertex_k,
                              double lo_pct, double hi_pct) {
  if (static_cast<int>(vertex_k.size()) != mesh.num_vertices())
    throw DimensionMismatch("curvature length != vertex count");
  if (!(lo_pct >= 0.0 && lo_pct < hi_pct && hi_pct <= 100.0))
    throw Error("invalid percentile range");

  std::vector<double> mags(vertex_k.size());
  for (std::size_t i = 0; i < vertex_k.size(); ++i)
    mags[i] = std::abs(vertex_k[i]);
  std::vector<double> sorted = mags;
  std::sort(sorted.begin(), sorted.end());

  // A mostly-flat mesh can have a zero hi percentile while still carrying
  // curvature; only a fully flat field has no scale-invariant metric.
  double hi = percentile(sorted, hi_pct);
  if (hi <= 0.0) hi = sorted.back();
  if (hi <= 0.0)
    throw AllZeroCurvature("flat mesh: curvature vanishes everywhere");
  // The low clamp must stay positive so no mass weight vanishes; when the
  // lo percentile lands on an exactly flat region, floor it relative to hi.
  const double lo = std::max(percentile(sorted, lo_pct), 1e-8 * hi);

  CurvatureField field;
  field.vertex_k = vertex_k;
  field.clip_lo = lo;
  field.clip_hi = hi;
  field.lo_pct = lo_pct;
  field.hi_pct = hi_pct;
  field.triangle_k.resize(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    double sum = 0.0;
    for (int c = 0; c < 3; ++c)
      sum += std::clamp(mags[mesh.faces()[f][c]], lo, hi);
    field.triangle_k[f] = sum / 3.0;
  }
  return field;
}

void write_curvature_csv(const std::vector<double>& vertex_k,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  for (std::size_t i = 0; i < vertex_k.size(); ++i)
    out << i << ',' << vertex_k[i] << '\n';
}

}  // namespace sispec
