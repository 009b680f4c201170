#include "sispec/fusion.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sispec {

DomainMatch pointwise_from_map(const Eigen::MatrixXd& c,
                               const SpectralBasis& source,
                               const SpectralBasis& target) {
  if (c.rows() != c.cols() || c.rows() != source.k() || c.rows() != target.k())
    throw DimensionMismatch("map size does not match basis sizes");

  // Rows of source_emb are the aligned source embeddings C * row_j(Phi).
  const Eigen::MatrixXd source_emb = source.phi * c.transpose();
  const Eigen::MatrixXd& target_emb = target.phi;
  const int ns = source.n();
  const int nt = target.n();

  DomainMatch out;
  out.mapping.resize(nt);
  out.distance.resize(nt);
  out.stats.min = std::numeric_limits<double>::infinity();
  out.stats.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  const Eigen::VectorXd source_sq = source_emb.rowwise().squaredNorm();
  for (int i = 0; i < nt; ++i) {
    const Eigen::VectorXd ti = target_emb.row(i).transpose();
    // ||s_j - t_i||^2 = ||s_j||^2 - 2 s_j.t_i + ||t_i||^2
    Eigen::VectorXd d2 = source_sq - 2.0 * (source_emb * ti);
    d2.array() += ti.squaredNorm();
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < ns; ++j) {
      const double d = std::sqrt(std::max(d2(j), 0.0));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
      out.stats.min = std::min(out.stats.min, d);
      out.stats.max = std::max(out.stats.max, d);
      sum += d;
    }
    out.mapping[i] = best;
    out.distance[i] = best_d;
  }
  out.stats.mean = sum / (static_cast<double>(ns) * nt);
  return out;
}

double normalize_distance(double d, const DomainStats& stats) {
  const double range = stats.max - stats.min;
  if (range <= 0.0) return 0.0;
  const double mean_normalized = (stats.mean - stats.min) / range;
  return (d - stats.min) / range - mean_normalized;
}

std::vector<double> normalize_distances(const std::vector<double>& distances,
                                        const DomainStats& stats) {
  std::vector<double> out(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i)
    out[i] = normalize_distance(distances[i], stats);
  return out;
}

Correspondence fuse(const std::vector<DomainMatch>& domains,
                    int num_source_vertices) {
  if (domains.empty()) throw EmptyDomainList("no spectral domains to fuse");
  const std::size_t nt = domains[0].mapping.size();
  for (const auto& d : domains)
    if (d.mapping.size() != nt)
      throw DimensionMismatch("domains disagree on target vertex count");

  Correspondence corr;
  corr.num_source_vertices = num_source_vertices;
  corr.mapping.resize(nt);
  corr.winning_domain.resize(nt);
  corr.score.resize(nt);

  for (std::size_t i = 0; i < nt; ++i) {
    int best_domain = 0;
    double best_score =
        normalize_distance(domains[0].distance[i], domains[0].stats);
    for (std::size_t s = 1; s < domains.size(); ++s) {
      const double score =
          normalize_distance(domains[s].distance[i], domains[s].stats);
      if (score < best_score) {
        best_score = score;
        best_domain = static_cast<int>(s);
      }
    }
    corr.mapping[i] = domains[best_domain].mapping[i];
    corr.winning_domain[i] = best_domain;
    corr.score[i] = best_score;
  }
  return corr;
}

void write_correspondence(const Correspondence& corr,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  for (std::size_t i = 0; i < corr.mapping.size(); ++i)
    out << i << ' ' << corr.mapping[i] << ' ' << corr.winning_domain[i] << ' '
        << corr.score[i] << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

Correspondence read_correspondence(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Correspondence corr;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    long target, source;
    int domain;
    double score;
    if (!(ss >> target >> source >> domain >> score))
      throw ParseError(path.string(), line_no, "bad correspondence line");
    if (target != static_cast<long>(corr.mapping.size()))
      throw ParseError(path.string(), line_no,
                       "target indices must be consecutive from 0");
    corr.mapping.push_back(static_cast<int>(source));
    corr.winning_domain.push_back(domain);
    corr.score.push_back(score);
    corr.num_source_vertices =
        std::max(corr.num_source_vertices, static_cast<int>(source) + 1);
  }
  return corr;
}

}  // namespace sispec
