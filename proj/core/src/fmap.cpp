#include "sispec/fmap.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>

namespace sispec {

namespace {

double sq_norm(const Eigen::MatrixXd& m) { return m.squaredNorm(); }

}  // namespace

Eigen::MatrixXd solve_lsq(const Eigen::MatrixXd& f_coeffs,
                          const Eigen::MatrixXd& g_coeffs) {
  if (f_coeffs.cols() != g_coeffs.cols() ||
      f_coeffs.rows() != g_coeffs.rows())
    throw DimensionMismatch("coefficient blocks differ in shape");
  if (!f_coeffs.allFinite() || !g_coeffs.allFinite())
    throw Error("non-finite coefficients");

  // ||C F - G||_F decouples row-wise into shared normal equations
  // (F F^T) C^T = F G^T with Tikhonov damping.
  const Eigen::MatrixXd gram = f_coeffs * f_coeffs.transpose();
  const double mu = 1e-8 * gram.norm();
  Eigen::MatrixXd damped = gram;
  damped.diagonal().array() += mu;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
  if (ldlt.info() != Eigen::Success)
    throw SingularSystem("normal equations not factorizable");
  const Eigen::MatrixXd rhs = f_coeffs * g_coeffs.transpose();
  Eigen::MatrixXd ct = ldlt.solve(rhs);
  // Iterative refinement removes the damping bias on full-rank systems
  // (the solution converges to the undamped minimizer) while singular
  // directions stay regularized at zero.
  for (int step = 0; step < 3; ++step)
    ct += ldlt.solve(rhs - gram * ct);
  if (!ct.allFinite())
    throw SingularSystem("rank-deficient descriptor system");
  return ct.transpose();
}

double loss_bijectivity(const FunctionalMapPair& pair) {
  const int k = static_cast<int>(pair.c_xy.rows());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);
  return sq_norm(pair.c_xy * pair.c_yx - eye) +
         sq_norm(pair.c_yx * pair.c_xy - eye);
}

double loss_orthogonality(const FunctionalMapPair& pair) {
  const int k = static_cast<int>(pair.c_xy.rows());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);
  return sq_norm(pair.c_xy.transpose() * pair.c_xy - eye) +
         sq_norm(pair.c_yx.transpose() * pair.c_yx - eye);
}

double loss_lbo_commutativity(const FunctionalMapPair& pair,
                              const Eigen::VectorXd& lambda_x,
                              const Eigen::VectorXd& lambda_y) {
  // C Diag(l) scales columns, Diag(l) C scales rows.
  const Eigen::MatrixXd r_xy =
      pair.c_xy * lambda_x.asDiagonal() - lambda_y.asDiagonal() * pair.c_xy;
  const Eigen::MatrixXd r_yx =
      pair.c_yx * lambda_y.asDiagonal() - lambda_x.asDiagonal() * pair.c_yx;
  return sq_norm(r_xy) + sq_norm(r_yx);
}

double loss_descriptor_commutativity(
    const FunctionalMapPair& pair, const std::vector<Eigen::MatrixXd>& mult_x,
    const std::vector<Eigen::MatrixXd>& mult_y) {
  if (mult_x.size() != mult_y.size())
    throw DimensionMismatch("operator lists differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < mult_x.size(); ++i) {
    total += sq_norm(pair.c_xy * mult_x[i] - mult_y[i] * pair.c_xy);
    total += sq_norm(pair.c_yx * mult_y[i] - mult_x[i] * pair.c_yx);
  }
  return total;
}

Eigen::MatrixXd mult_operator(const SpectralBasis& basis,
                              const Eigen::VectorXd& f) {
  if (f.size() != basis.n())
    throw DimensionMismatch("function length != vertex count");
  const Eigen::MatrixXd scaled = f.asDiagonal() * basis.phi;
  return basis.phi.transpose() * (basis.mass.B * scaled);
}

LossBreakdown total_loss(const std::vector<FunctionalMapPair>& pairs,
                         const LossWeights& weights,
                         const std::vector<DomainLossData>& data) {
  if (pairs.size() != data.size())
    throw DimensionMismatch("one DomainLossData required per pair");
  LossBreakdown out;
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    out.bijectivity += loss_bijectivity(pairs[s]);
    out.orthogonality += loss_orthogonality(pairs[s]);
    out.lbo_commutativity +=
        loss_lbo_commutativity(pairs[s], data[s].lambda_x, data[s].lambda_y);
    out.descriptor_commutativity +=
        loss_descriptor_commutativity(pairs[s], data[s].mult_x, data[s].mult_y);
  }
  out.total = weights.bijectivity * out.bijectivity +
              weights.orthogonality * out.orthogonality +
              weights.lbo_commutativity * out.lbo_commutativity +
              weights.descriptor_commutativity * out.descriptor_commutativity;
  return out;
}

void loss_gradient(const FunctionalMapPair& pair, const LossWeights& weights,
                   const DomainLossData& data, Eigen::MatrixXd& grad_xy,
                   Eigen::MatrixXd& grad_yx) {
  const Eigen::MatrixXd& a = pair.c_xy;
  const Eigen::MatrixXd& b = pair.c_yx;
  const int k = static_cast<int>(a.rows());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);
  grad_xy = Eigen::MatrixXd::Zero(k, k);
  grad_yx = Eigen::MatrixXd::Zero(k, k);

  {  // bijectivity
    const Eigen::MatrixXd rab = a * b - eye;
    const Eigen::MatrixXd rba = b * a - eye;
    grad_xy += weights.bijectivity *
               2.0 * (rab * b.transpose() + b.transpose() * rba);
    grad_yx += weights.bijectivity *
               2.0 * (a.transpose() * rab + rba * a.transpose());
  }
  {  // orthogonality
    grad_xy += weights.orthogonality * 4.0 * a * (a.transpose() * a - eye);
    grad_yx += weights.orthogonality * 4.0 * b * (b.transpose() * b - eye);
  }
  {  // LBO commutativity
    const Eigen::MatrixXd r_xy = a * data.lambda_x.asDiagonal() -
                                 data.lambda_y.asDiagonal() * a;
    const Eigen::MatrixXd r_yx = b * data.lambda_y.asDiagonal() -
                                 data.lambda_x.asDiagonal() * b;
    grad_xy += weights.lbo_commutativity * 2.0 *
               (r_xy * data.lambda_x.asDiagonal() -
                data.lambda_y.asDiagonal() * r_xy);
    grad_yx += weights.lbo_commutativity * 2.0 *
               (r_yx * data.lambda_y.asDiagonal() -
                data.lambda_x.asDiagonal() * r_yx);
  }
  for (std::size_t i = 0; i < data.mult_x.size(); ++i) {
    const Eigen::MatrixXd r_xy = a * data.mult_x[i] - data.mult_y[i] * a;
    const Eigen::MatrixXd r_yx = b * data.mult_y[i] - data.mult_x[i] * b;
    grad_xy += weights.descriptor_commutativity * 2.0 *
               (r_xy * data.mult_x[i].transpose() -
                data.mult_y[i].transpose() * r_xy);
    grad_yx += weights.descriptor_commutativity * 2.0 *
               (r_yx * data.mult_y[i].transpose() -
                data.mult_x[i].transpose() * r_yx);
  }
}

RefineResult refine(std::vector<FunctionalMapPair> pairs,
                    const LossWeights& weights,
                    const std::vector<DomainLossData>& data,
                    const OptimizerConfig& config) {
  RefineResult result;
  LossBreakdown current = total_loss(pairs, weights, data);
  result.trace.push_back({0, current});

  double step = config.initial_step;
  const std::size_t num_domains = pairs.size();
  std::vector<Eigen::MatrixXd> grad_xy(num_domains), grad_yx(num_domains);

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    double grad_norm_sq = 0.0;
    for (std::size_t s = 0; s < num_domains; ++s) {
      loss_gradient(pairs[s], weights, data[s], grad_xy[s], grad_yx[s]);
      if (!grad_xy[s].allFinite() || !grad_yx[s].allFinite())
        throw NonFiniteGradient("at iteration " + std::to_string(iter));
      grad_norm_sq += grad_xy[s].squaredNorm() + grad_yx[s].squaredNorm();
    }
    if (grad_norm_sq == 0.0) break;

    // Backtracking: accept only strict decrease.
    bool accepted = false;
    std::vector<FunctionalMapPair> trial = pairs;
    for (int h = 0; h <= config.max_halvings; ++h) {
      for (std::size_t s = 0; s < num_domains; ++s) {
        trial[s].c_xy = pairs[s].c_xy - step * grad_xy[s];
        trial[s].c_yx = pairs[s].c_yx - step * grad_yx[s];
      }
      const LossBreakdown candidate = total_loss(trial, weights, data);
      if (candidate.total < current.total) {
        const double decrease =
            (current.total - candidate.total) /
            std::max(current.total, 1e-300);
        pairs.swap(trial);
        current = candidate;
        accepted = true;
        ++result.accepted_steps;
        result.trace.push_back({iter, current});
        step *= 2.0;  // cheap step-size adaptation
        if (decrease < config.relative_decrease_tol) iter = config.max_iters;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }

  result.pairs = std::move(pairs);
  return result;
}

namespace {

constexpr std::uint32_t kMapMagic = 0x5349534du;  // "SISM"

}  // namespace

void write_fmap(const Eigen::MatrixXd& c, double alpha, int direction,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto k = static_cast<std::uint64_t>(c.rows());
  out.write(reinterpret_cast<const char*>(&kMapMagic), sizeof(kMapMagic));
  out.write(reinterpret_cast<const char*>(&k), sizeof(k));
  out.write(reinterpret_cast<const char*>(&alpha), sizeof(alpha));
  const auto dir = static_cast<std::int32_t>(direction);
  out.write(reinterpret_cast<const char*>(&dir), sizeof(dir));
  for (int r = 0; r < c.rows(); ++r)
    for (int col = 0; col < c.cols(); ++col) {
      const double v = c(r, col);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  if (!out) throw IoError("write failed: " + path.string());
}

Eigen::MatrixXd read_fmap(const std::filesystem::path& path, double* alpha,
                          int* direction) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint32_t magic = 0;
  in.read(reinterpret_cast<char*>(&magic), sizeof(magic));
  if (!in || magic != kMapMagic)
    throw IoError("not a functional map file: " + path.string());
  std::uint64_t k = 0;
  double a = 0.0;
  std::int32_t dir = 0;
  in.read(reinterpret_cast<char*>(&k), sizeof(k));
  in.read(reinterpret_cast<char*>(&a), sizeof(a));
  in.read(reinterpret_cast<char*>(&dir), sizeof(dir));
  Eigen::MatrixXd c(k, k);
  for (std::uint64_t r = 0; r < k; ++r)
    for (std::uint64_t col = 0; col < k; ++col)
      in.read(reinterpret_cast<char*>(&c(r, col)), sizeof(double));
  if (!in) throw IoError("truncated functional map file: " + path.string());
  if (alpha) *alpha = a;
  if (direction) *direction = dir;
  return c;
}

void write_loss_trace(const std::vector<RefineTraceRow>& trace,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "iteration,total,bijectivity,orthogonality,lbo_commutativity,"
         "descriptor_commutativity\n";
  out.precision(17);
  for (const auto& row : trace)
    out << row.iteration << ',' << row.loss.total << ','
        << row.loss.bijectivity << ',' << row.loss.orthogonality << ','
        << row.loss.lbo_commutativity << ','
        << row.loss.descriptor_commutativity << '\n';
}

}  // namespace sispec
