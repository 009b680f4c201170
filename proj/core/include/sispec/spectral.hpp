#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <filesystem>

#include "sispec/curvature.hpp"
#include "sispec/mesh.hpp"

namespace sispec {

/// Cotangent stiffness matrix, sign-flipped to be positive semidefinite.
/// Symmetric, rows sum to zero.
struct StiffnessMatrix {
  Eigen::SparseMatrix<double> W;
};

/// Curvature-weighted FEM mass matrix; alpha = 0 gives the standard
/// Euclidean mass, alpha = 1 the fully scale-invariant one.
struct MassMatrix {
  Eigen::SparseMatrix<double> B;
  double alpha = 0.0;
};

/// One spectral domain of a shape: the k smallest generalized eigenpairs
/// of W phi = lambda B phi, with Phi B-orthonormal.
struct SpectralBasis {
  double alpha = 0.0;
  Eigen::VectorXd eigenvalues;  // ascending, nonnegative
  Eigen::MatrixXd phi;          // n x k, rows index vertices
  MassMatrix mass;

  int n() const { return static_cast<int>(phi.rows()); }
  int k() const { return static_cast<int>(phi.cols()); }
};

struct EigensolveOptions {
  double tolerance = 1e-9;    // relative eigenpair residual
  int dense_threshold = 2000; // dense generalized solve at or below this n
  int max_restarts = 5;
  bool force_dense = false;
  bool force_sparse = false;
};

/// Off-diagonal -(cot a + cot b)/2 per edge (one cotangent on boundary
/// edges), diagonal the negated row sum. `clamp_negative` zeroes positive
/// off-diagonal weights from obtuse triangles; off by default.
StiffnessMatrix assemble_stiffness(const TriMesh& mesh,
                                   bool clamp_negative = false);

/// B(i,j) = (|K1|^a |t1| + |K2|^a |t2|)/12 on edges, diagonal the sum of
/// incident |Kl|^a |tl| / 6.
MassMatrix assemble_mass(const TriMesh& mesh, const CurvatureField& curv,
                         double alpha);

/// Euclidean (alpha = 0) mass matrix; needs no curvature.
MassMatrix assemble_mass(const TriMesh& mesh);

/// k algebraically smallest eigenpairs of W phi = lambda B phi.
/// Shift-invert Lanczos above the dense threshold, dense otherwise.
/// Eigenvector signs fixed by making the first significant entry of each
/// column positive.
SpectralBasis eigensolve(const StiffnessMatrix& W, const MassMatrix& B, int k,
                         const EigensolveOptions& opts = {});

/// Spectral coefficients Phi^T B f; f is n x d.
Eigen::MatrixXd project(const SpectralBasis& basis, const Eigen::MatrixXd& f);

/// Binary basis cache: header {n, k, alpha, version}, eigenvalues, Phi
/// column-major, B as coordinate triplets.
void write_basis_cache(const SpectralBasis& basis,
                       const std::filesystem::path& path);
SpectralBasis read_basis_cache(const std::filesystem::path& path);

}  // namespace sispec
