#include "sispec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace sispec {

std::vector<double> per_vertex_geodesic_error(
    const Correspondence& corr, const std::vector<int>& ground_truth,
    const GeodesicOracle& oracle) {
  const std::size_t nt = corr.mapping.size();
  if (ground_truth.size() != nt)
    throw GroundTruthMismatch("ground truth covers " +
                              std::to_string(ground_truth.size()) +
                              " vertices, correspondence has " +
                              std::to_string(nt));
  const int ns = oracle.mesh().num_vertices();
  for (int g : ground_truth)
    if (g < 0 || g >= ns)
      throw GroundTruthMismatch("ground-truth index out of range");

  // One Dijkstra per distinct ground-truth source vertex.
  std::map<int, std::vector<double>> dist_cache;
  std::vector<double> errors(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    const int gt = ground_truth[i];
    auto it = dist_cache.find(gt);
    if (it == dist_cache.end())
      it = dist_cache.emplace(gt, oracle.distances_from(gt)).first;
    errors[i] = it->second[corr.mapping[i]];
  }
  return errors;
}

ErrorCurve geodesic_error(const Correspondence& corr,
                          const std::vector<int>& ground_truth,
                          const GeodesicOracle& oracle, int num_thresholds,
                          double max_threshold) {
  const auto errors = per_vertex_geodesic_error(corr, ground_truth, oracle);
  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());

  ErrorCurve curve;
  curve.thresholds.resize(num_thresholds);
  curve.fraction.resize(num_thresholds);
  for (int t = 0; t < num_thresholds; ++t) {
    const double thr = num_thresholds > 1
                           ? max_threshold * t / (num_thresholds - 1)
                           : max_threshold;
    curve.thresholds[t] = thr;
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), thr) -
                       sorted.begin();
    curve.fraction[t] = 100.0 * static_cast<double>(count) /
                        static_cast<double>(sorted.size());
  }
  double sum = 0.0;
  for (double e : errors) sum += e;
  curve.mean_error = sum / static_cast<double>(errors.size());
  return curve;
}

namespace {

void write_svg(std::ofstream& out, const std::vector<ErrorCurve>& curves) {
  const int w = 640, h = 480;
  const int ml = 70, mr = 20, mt = 20, mb = 60;
  const int pw = w - ml - mr, ph = h - mt - mb;
  double xmax = 0.0;
  for (const auto& c : curves)
    if (!c.thresholds.empty()) xmax = std::max(xmax, c.thresholds.back());
  if (xmax <= 0.0) xmax = 0.1;

  auto px = [&](double x) { return ml + pw * x / xmax; };
  auto py = [&](double y) { return mt + ph * (1.0 - y / 100.0); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
      << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
  // Axes and grid.
  out << "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double gx = px(xmax * i / 5.0);
    const double gy = py(100.0 * i / 5.0);
    out << "<line x1=\"" << gx << "\" y1=\"" << mt << "\" x2=\"" << gx
        << "\" y2=\"" << mt + ph << "\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << gy << "\" x2=\"" << ml + pw
        << "\" y2=\"" << gy << "\"/>\n";
  }
  out << "</g>\n<g stroke=\"black\" stroke-width=\"2\" fill=\"none\">\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\"/>\n</g>\n";
  // Tick labels.
  out << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"black\">\n";
  for (int i = 0; i <= 5; ++i) {
    std::ostringstream xv;
    xv.precision(3);
    xv << xmax * i / 5.0;
    out << "<text x=\"" << px(xmax * i / 5.0) - 12 << "\" y=\"" << mt + ph + 20
        << "\">" << xv.str() << "</text>\n";
    out << "<text x=\"" << ml - 40 << "\" y=\"" << py(100.0 * i / 5.0) + 5
        << "\">" << 20 * i << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 - 50 << "\" y=\"" << h - 15
      << "\">Geodesic Error</text>\n"
      << "<text x=\"15\" y=\"" << mt + ph / 2
      << "\" transform=\"rotate(-90 15 " << mt + ph / 2
      << ")\">% Correspondence</text>\n</g>\n";

  static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    out << "<polyline fill=\"none\" stroke=\"" << colors[ci % 6]
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < c.thresholds.size(); ++i)
      out << px(c.thresholds[i]) << ',' << py(c.fraction[i]) << ' ';
    out << "\"/>\n";
    std::ostringstream label;
    label.precision(4);
    label << (c.label.empty() ? "curve " + std::to_string(ci) : c.label)
          << " (mean " << c.mean_error << ")";
    out << "<text font-family=\"sans-serif\" font-size=\"13\" fill=\""
        << colors[ci % 6] << "\" x=\"" << ml + 15 << "\" y=\""
        << mt + 22 + 18 * static_cast<int>(ci) << "\">" << label.str()
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void emit_curve(const ErrorCurve& curve, const std::filesystem::path& csv_path,
                bool with_plot) {
  std::ofstream out(csv_path);
  if (!out) throw IoError("cannot write " + csv_path.string());
  out << "threshold,fraction\n";
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f,%.1f\n", curve.thresholds[i],
                  curve.fraction[i]);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + csv_path.string());
  if (with_plot) {
    std::filesystem::path svg = csv_path;
    svg.replace_extension(".svg");
    emit_curves_svg({curve}, svg);
  }
}

void emit_curves_svg(const std::vector<ErrorCurve>& curves,
                     const std::filesystem::path& svg_path) {
  std::ofstream out(svg_path);
  if (!out) throw IoError("cannot write " + svg_path.string());
  write_svg(out, curves);
  if (!out) throw IoError("write failed: " + svg_path.string());
}

ErrorCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  ErrorCurve curve;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind("threshold", 0) == 0) continue;
    std::istringstream ss(line);
    double t, f;
    char comma;
    if (!(ss >> t >> comma >> f))
      throw ParseError(path.string(), line_no, "bad curve row");
    curve.thresholds.push_back(t);
    curve.fraction.push_back(f);
  }
  return curve;
}

std::vector<int> read_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ground-truth file: " + path.string());
  std::vector<int> gt;
  long v;
  while (in >> v) gt.push_back(static_cast<int>(v));
  return gt;
}

void write_ground_truth(const std::vector<int>& gt,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (int v : gt) out << v << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace sispec
