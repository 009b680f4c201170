#pragma once

#include <filesystem>
#include <vector>

#include "sispec/fusion.hpp"
#include "sispec/geodesic.hpp"

namespace sispec {

/// Cumulative geodesic-error curve: fraction (in percent) of
/// correspondences with normalized error at or below each threshold.
struct ErrorCurve {
  std::vector<double> thresholds;  // ascending
  std::vector<double> fraction;    // percent, non-decreasing
  double mean_error = 0.0;
  std::string label;
};

/// Per-vertex error is the normalized geodesic distance on the source mesh
/// between the predicted and ground-truth vertex; curve sampled at 100
/// uniform thresholds in [0, 0.1].
ErrorCurve geodesic_error(const Correspondence& corr,
                          const std::vector<int>& ground_truth,
                          const GeodesicOracle& oracle,
                          int num_thresholds = 100, double max_threshold = 0.1);

/// Raw per-vertex errors, for tests and statistics.
std::vector<double> per_vertex_geodesic_error(
    const Correspondence& corr, const std::vector<int>& ground_truth,
    const GeodesicOracle& oracle);

/// CSV "threshold,fraction" with a header row, plus a standalone SVG plot
/// next to it ("<stem>.svg") when `with_plot`.
void emit_curve(const ErrorCurve& curve, const std::filesystem::path& csv_path,
                bool with_plot = true);

/// Several curves overlaid in one SVG.
void emit_curves_svg(const std::vector<ErrorCurve>& curves,
                     const std::filesystem::path& svg_path);

ErrorCurve read_curve_csv(const std::filesystem::path& path);

/// Ground-truth file: one source index per line, line i = target vertex i.
std::vector<int> read_ground_truth(const std::filesystem::path& path);
void write_ground_truth(const std::vector<int>& gt,
                        const std::filesystem::path& path);

}  // namespace sispec
