#pragma once

#include <filesystem>
#include <vector>

#include "sispec/mesh.hpp"

namespace sispec {

/// Per-vertex signed Gaussian curvature plus the clipped per-triangle
/// magnitudes that weight the scale-invariant mass matrix.
struct CurvatureField {
  std::vector<double> vertex_k;        // signed, 1/length^2
  std::vector<double> triangle_k;      // clipped |K|, mean of 3 vertices
  double clip_lo = 0.0;                // clamp bounds on |K|
  double clip_hi = 0.0;
  double lo_pct = 0.0;
  double hi_pct = 0.0;
};

/// Per-vertex estimate with the estimator used recorded per vertex.
struct CurvatureEstimate {
  std::vector<double> vertex_k;
  std::vector<bool> used_fallback;  // angle-defect fallback on bad fits
};

/// Uniform one-ring smoothing; boundary vertices stay fixed.
TriMesh laplacian_smooth(const TriMesh& mesh, int iterations, double step);

/// Gaussian curvature from a quadric fit in the tangent frame of the
/// vertex normal over the one-ring (two-ring when the one-ring has fewer
/// than 5 points), K = determinant of the fitted shape operator.
CurvatureEstimate gaussian_curvature(const TriMesh& mesh);

/// Raw angle defects 2*pi - sum of incident angles; sums to 2*pi*chi on a
/// closed mesh.
std::vector<double> angle_defects(const TriMesh& mesh);

/// Clamps |K| to the [lo_pct, hi_pct] percentiles of its own distribution
/// and averages onto triangles. Throws AllZeroCurvature on flat meshes
/// (use alpha = 0 there).
CurvatureField clip_curvature(const TriMesh& mesh,
                              const std::vector<double>& vertex_k,
                              double lo_pct = 0.4, double hi_pct = 75.0);

/// Debug dump, one "index,K" line per vertex.
void write_curvature_csv(const std::vector<double>& vertex_k,
                         const std::filesystem::path& path);

}  // namespace sispec
