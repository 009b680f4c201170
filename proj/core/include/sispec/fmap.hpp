#pragma once

#include <filesystem>
#include <vector>

#include "sispec/spectral.hpp"

namespace sispec {

/// Bidirectional functional maps for one spectral domain pair.
struct FunctionalMapPair {
  double alpha = 0.0;
  Eigen::MatrixXd c_xy;  // Phi -> Psi
  Eigen::MatrixXd c_yx;  // Psi -> Phi
};

struct LossWeights {
  double bijectivity = 1e3;
  double orthogonality = 1e3;
  double lbo_commutativity = 1.0;
  double descriptor_commutativity = 1e5;
};

/// Fixed per-domain inputs to the structural loss: the eigenvalues of both
/// bases and channel-aligned multiplication operators.
struct DomainLossData {
  Eigen::VectorXd lambda_x;
  Eigen::VectorXd lambda_y;
  std::vector<Eigen::MatrixXd> mult_x;
  std::vector<Eigen::MatrixXd> mult_y;
};

/// Per-term loss values; total is the weighted sum over domains.
struct LossBreakdown {
  double bijectivity = 0.0;
  double orthogonality = 0.0;
  double lbo_commutativity = 0.0;
  double descriptor_commutativity = 0.0;
  double total = 0.0;
};

struct OptimizerConfig {
  int max_iters = 500;
  double initial_step = 1e-4;
  int max_halvings = 30;
  double relative_decrease_tol = 1e-7;
};

struct RefineTraceRow {
  int iteration = 0;
  LossBreakdown loss;
};

struct RefineResult {
  std::vector<FunctionalMapPair> pairs;
  std::vector<RefineTraceRow> trace;
  int accepted_steps = 0;
};

/// argmin_C ||C F - G||_F via row-wise normal equations with Tikhonov
/// damping 1e-8 * ||F F^T||; F and G are k x d coefficient blocks.
Eigen::MatrixXd solve_lsq(const Eigen::MatrixXd& f_coeffs,
                          const Eigen::MatrixXd& g_coeffs);

double loss_bijectivity(const FunctionalMapPair& pair);
double loss_orthogonality(const FunctionalMapPair& pair);
double loss_lbo_commutativity(const FunctionalMapPair& pair,
                              const Eigen::VectorXd& lambda_x,
                              const Eigen::VectorXd& lambda_y);
double loss_descriptor_commutativity(
    const FunctionalMapPair& pair, const std::vector<Eigen::MatrixXd>& mult_x,
    const std::vector<Eigen::MatrixXd>& mult_y);

/// Spectral multiplication operator Phi^T B Diag(f) Phi.
Eigen::MatrixXd mult_operator(const SpectralBasis& basis,
                              const Eigen::VectorXd& f);

LossBreakdown total_loss(const std::vector<FunctionalMapPair>& pairs,
                         const LossWeights& weights,
                         const std::vector<DomainLossData>& data);

/// Analytic gradient of the weighted loss for one domain, with respect to
/// (c_xy, c_yx). Exposed for finite-difference verification.
void loss_gradient(const FunctionalMapPair& pair, const LossWeights& weights,
                   const DomainLossData& data, Eigen::MatrixXd& grad_xy,
                   Eigen::MatrixXd& grad_yx);

/// Gradient descent with backtracking halving; a step is accepted only if
/// the total loss decreases, so the loss is monotone non-increasing.
RefineResult refine(std::vector<FunctionalMapPair> pairs,
                    const LossWeights& weights,
                    const std::vector<DomainLossData>& data,
                    const OptimizerConfig& config = {});

/// Map file: header {k, alpha, direction}, row-major doubles.
void write_fmap(const Eigen::MatrixXd& c, double alpha, int direction,
                const std::filesystem::path& path);
Eigen::MatrixXd read_fmap(const std::filesystem::path& path, double* alpha,
                          int* direction);

/// Loss trace CSV: iteration,total,bijectivity,orthogonality,lbo,descriptor.
void write_loss_trace(const std::vector<RefineTraceRow>& trace,
                      const std::filesystem::path& path);

}  // namespace sispec
