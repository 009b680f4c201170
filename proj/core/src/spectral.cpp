#include "sispec/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <vector>

namespace sispec {

namespace {

double cotangent(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  const double cross = u.cross(v).norm();
  if (cross <= 0.0) throw DegenerateFace("zero-area corner in stiffness");
  return u.dot(v) / cross;
}

void fix_signs(Eigen::MatrixXd& phi) {
  for (int c = 0; c < phi.cols(); ++c) {
    const double scale = phi.col(c).cwiseAbs().maxCoeff();
    if (scale <= 0.0) continue;
    for (int r = 0; r < phi.rows(); ++r) {
      if (std::abs(phi(r, c)) > 1e-8 * scale) {
        if (phi(r, c) < 0.0) phi.col(c) *= -1.0;
        break;
      }
    }
  }
}

// Largest relative residual ||W phi - lambda B phi|| / ||B phi|| over pairs.
double max_residual(const Eigen::SparseMatrix<double>& W,
                    const Eigen::SparseMatrix<double>& B,
                    const Eigen::VectorXd& lambda,
                    const Eigen::MatrixXd& phi) {
  double worst = 0.0;
  for (int i = 0; i < phi.cols(); ++i) {
    const Eigen::VectorXd bphi = B * phi.col(i);
    const double num = (W * phi.col(i) - lambda(i) * bphi).norm();
    const double den = bphi.norm();
    if (den > 0.0) worst = std::max(worst, num / den);
  }
  return worst;
}

// In-place modified Gram-Schmidt in the B inner product, two passes per
// column; numerically dead columns are replaced by fresh random vectors so
// the basis keeps full rank even when inverse iteration aligns columns.
void b_orthonormalize(Eigen::MatrixXd& z, const Eigen::SparseMatrix<double>& B,
                      std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  const int n = static_cast<int>(z.rows());
  for (int c = 0; c < z.cols(); ++c) {
    double norm = std::sqrt(std::max(z.col(c).dot(B * z.col(c)), 0.0));
    if (norm > 0.0) z.col(c) /= norm;
    for (int attempt = 0; attempt < 3; ++attempt) {
      for (int sweep = 0; sweep < 2; ++sweep)
        for (int p = 0; p < c; ++p) {
          const double proj = z.col(c).dot(B * z.col(p));
          z.col(c) -= proj * z.col(p);
        }
      norm = std::sqrt(std::max(z.col(c).dot(B * z.col(c)), 0.0));
      if (norm > 1e-8) break;
      for (int r = 0; r < n; ++r) z(r, c) = gauss(rng);
      norm = std::sqrt(std::max(z.col(c).dot(B * z.col(c)), 0.0));
      z.col(c) /= norm;
    }
    z.col(c) /= norm;
  }
}

SpectralBasis dense_eigensolve(const StiffnessMatrix& W, const MassMatrix& B,
                               int k) {
  const Eigen::MatrixXd Wd(W.W);
  const Eigen::MatrixXd Bd(B.B);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(Wd, Bd);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("dense generalized eigensolve failed", -1.0);
  SpectralBasis basis;
  basis.alpha = B.alpha;
  basis.mass = B;
  basis.eigenvalues = solver.eigenvalues().head(k);
  basis.phi = solver.eigenvectors().leftCols(k);
  return basis;
}

// Shift-invert Lanczos in the B inner product on (W + cB)^{-1} B, full
// reorthogonalization, restarted with a larger subspace until the residual
// target holds.
SpectralBasis lanczos_eigensolve(const StiffnessMatrix& W, const MassMatrix& B,
                                 int k, const EigensolveOptions& opts) {
  const int n = static_cast<int>(W.W.rows());
  const double shift = 1e-8 * B.B.diagonal().sum() / static_cast<double>(n);
  Eigen::SparseMatrix<double> S = W.W + shift * B.B;

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(S);
  if (chol.info() != Eigen::Success)
    throw NotPositiveDefinite("Cholesky of shifted stiffness failed");

  std::mt19937 rng(0x5e15u);  // deterministic start vector
  std::normal_distribution<double> gauss;

  double achieved = std::numeric_limits<double>::infinity();
  int m = std::min(n - 1, std::max(2 * k + 30, 60));
  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    std::vector<Eigen::VectorXd> basis_vecs;    // B-orthonormal Lanczos vectors
    std::vector<Eigen::VectorXd> b_times_vecs;  // B * v cached for reorth
    Eigen::VectorXd diag(m), offdiag(m);

    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    Eigen::VectorXd bv = B.B * v;
    v /= std::sqrt(v.dot(bv));

    int built = 0;
    for (int j = 0; j < m; ++j) {
      basis_vecs.push_back(v);
      b_times_vecs.push_back(B.B * v);
      Eigen::VectorXd w = chol.solve(b_times_vecs[j]);
      diag(j) = w.dot(b_times_vecs[j]);
      // Two reorthogonalization sweeps against the full basis.
      for (int sweep = 0; sweep < 2; ++sweep)
        for (int i = 0; i <= j; ++i)
          w -= w.dot(b_times_vecs[i]) * basis_vecs[i];
      Eigen::VectorXd bw = B.B * w;
      double beta = std::sqrt(std::max(w.dot(bw), 0.0));
      built = j + 1;
      if (j + 1 < m) {
        if (beta < 1e-14) {
          // Breakdown: restart the residual direction randomly.
          for (int i = 0; i < n; ++i) w(i) = gauss(rng);
          for (int sweep = 0; sweep < 2; ++sweep)
            for (int i = 0; i <= j; ++i)
              w -= w.dot(b_times_vecs[i]) * basis_vecs[i];
          bw = B.B * w;
          beta = std::sqrt(std::max(w.dot(bw), 0.0));
          if (beta < 1e-300) break;  // invariant subspace found
          offdiag(j) = 0.0;
        } else {
          offdiag(j) = beta;
        }
        v = w / beta;
      }
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
    for (int j = 0; j < built; ++j) {
      T(j, j) = diag(j);
      if (j + 1 < built) T(j, j + 1) = T(j + 1, j) = offdiag(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tsolver(T);
    if (tsolver.info() != Eigen::Success)
      throw ConvergenceFailure("tridiagonal eigensolve failed", achieved);

    if (built >= k) {
      // Largest theta of the shifted inverse are the smallest lambda.
      // A single Krylov sequence holds at most one direction per distinct
      // eigenvalue, so degenerate clusters may come out incomplete; random
      // extra columns below carry O(1) components on any missed members
      // and the subspace iteration pulls them in.
      const int ritz = std::min(built, k + 6);
      const int ext = std::min(n, k + 14);
      Eigen::MatrixXd phi(n, ext);
      for (int i = 0; i < ritz; ++i) {
        const int src = built - 1 - i;
        Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < built; ++j)
          col += tsolver.eigenvectors()(j, src) * basis_vecs[j];
        phi.col(i) = col;
      }
      for (int i = ritz; i < ext; ++i)
        for (int r = 0; r < n; ++r) phi(r, i) = gauss(rng);

      // Shift-invert limits Ritz accuracy to ~(lambda+shift)^2*eps/shift;
      // block inverse iteration with Rayleigh-Ritz restores full accuracy.
      // Residual alone cannot expose a missed cluster member, so also
      // require the Ritz values to have settled.
      Eigen::VectorXd values = Eigen::VectorXd::Zero(ext);
      Eigen::VectorXd previous = values;
      for (int polish = 0; polish < 300; ++polish) {
        Eigen::MatrixXd z(n, ext);
        for (int c = 0; c < ext; ++c) z.col(c) = chol.solve(B.B * phi.col(c));
        b_orthonormalize(z, B.B, rng);
        Eigen::MatrixXd proj = z.transpose() * (W.W * z);
        proj = 0.5 * (proj + proj.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> psolver(proj);
        if (psolver.info() != Eigen::Success) break;
        phi = z * psolver.eigenvectors();
        previous = values;
        values = psolver.eigenvalues();
        if (polish >= 25) {
          double drift = 0.0;
          for (int i = 0; i < k; ++i)
            drift = std::max(drift, std::abs(values(i) - previous(i)) /
                                        std::max(1.0, std::abs(values(i))));
          achieved = max_residual(W.W, B.B, values.head(k), phi.leftCols(k));
          if (achieved <= opts.tolerance && drift <= 1e-11) break;
        }
      }
      if (achieved <= opts.tolerance) {
        SpectralBasis out;
        out.alpha = B.alpha;
        out.mass = B;
        out.eigenvalues = values.head(k);
        out.phi = phi.leftCols(k);
        return out;
      }
    }
    m = std::min(n - 1, m * 2);
  }
  throw ConvergenceFailure("Lanczos did not reach the residual target",
                           achieved);
}

}  // namespace

StiffnessMatrix assemble_stiffness(const TriMesh& mesh, bool clamp_negative) {
  mesh.require_nondegenerate();
  const int n = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * mesh.num_edges() + n);
  std::vector<double> diag(n, 0.0);

  for (const Edge& e : mesh.edges()) {
    double w = 0.0;
    for (int f : {e.f0, e.f1}) {
      if (f < 0) continue;
      const auto& t = mesh.faces()[f];
      int c = 0;
      while (t[c] == e.v0 || t[c] == e.v1) ++c;
      const Eigen::Vector3d& apex = mesh.vertices()[t[c]];
      w += 0.5 * cotangent(mesh.vertices()[e.v0] - apex,
                           mesh.vertices()[e.v1] - apex);
    }
    if (clamp_negative && w < 0.0) w = 0.0;
    triplets.emplace_back(e.v0, e.v1, -w);
    triplets.emplace_back(e.v1, e.v0, -w);
    diag[e.v0] += w;
    diag[e.v1] += w;
  }
  for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, diag[i]);

  StiffnessMatrix out;
  out.W.resize(n, n);
  out.W.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

namespace {

MassMatrix assemble_mass_weighted(const TriMesh& mesh,
                                  const std::vector<double>& face_weight,
                                  double alpha) {
  const int n = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * mesh.num_edges() + n);
  std::vector<double> diag(n, 0.0);

  for (const Edge& e : mesh.edges()) {
    double w = 0.0;
    for (int f : {e.f0, e.f1})
      if (f >= 0) w += face_weight[f] * mesh.face_areas()[f];
    w /= 12.0;
    triplets.emplace_back(e.v0, e.v1, w);
    triplets.emplace_back(e.v1, e.v0, w);
  }
  for (int i = 0; i < n; ++i) {
    for (int f : mesh.incident_faces(i))
      diag[i] += face_weight[f] * mesh.face_areas()[f];
    diag[i] /= 6.0;
    triplets.emplace_back(i, i, diag[i]);
  }

  MassMatrix out;
  out.alpha = alpha;
  out.B.resize(n, n);
  out.B.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace

MassMatrix assemble_mass(const TriMesh& mesh, const CurvatureField& curv,
                         double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw AlphaOutOfRange("alpha = " + std::to_string(alpha));
  if (static_cast<int>(curv.triangle_k.size()) != mesh.num_faces())
    throw MeshMismatch("curvature field triangle count mismatch");
  mesh.require_nondegenerate();

  std::vector<double> weight(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f)
    weight[f] = alpha == 0.0 ? 1.0 : std::pow(curv.triangle_k[f], alpha);
  return assemble_mass_weighted(mesh, weight, alpha);
}

MassMatrix assemble_mass(const TriMesh& mesh) {
  mesh.require_nondegenerate();
  return assemble_mass_weighted(
      mesh, std::vector<double>(mesh.num_faces(), 1.0), 0.0);
}

SpectralBasis eigensolve(const StiffnessMatrix& W, const MassMatrix& B, int k,
                         const EigensolveOptions& opts) {
  const int n = static_cast<int>(W.W.rows());
  if (k >= n || k < 1) throw Error("basis size k must be in [1, n)");
  if (B.B.rows() != n) throw DimensionMismatch("W and B sizes differ");
  for (int i = 0; i < n; ++i)
    if (B.B.coeff(i, i) <= 0.0)
      throw NotPositiveDefinite("mass diagonal entry " + std::to_string(i));

  const bool dense = opts.force_dense ||
                     (!opts.force_sparse && n <= opts.dense_threshold);
  SpectralBasis basis =
      dense ? dense_eigensolve(W, B, k) : lanczos_eigensolve(W, B, k, opts);

  // B-orthonormality can drift slightly off; a thin correction restores it.
  Eigen::MatrixXd gram = basis.phi.transpose() * (B.B * basis.phi);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    basis.phi = llt.matrixL()
                    .solve(basis.phi.transpose())
                    .transpose();
  }
  for (int i = 0; i < k; ++i)
    basis.eigenvalues(i) = std::max(basis.eigenvalues(i), 0.0);
  fix_signs(basis.phi);
  return basis;
}

Eigen::MatrixXd project(const SpectralBasis& basis, const Eigen::MatrixXd& f) {
  if (f.rows() != basis.phi.rows())
    throw DimensionMismatch("function rows != vertex count");
  return basis.phi.transpose() * (basis.mass.B * f);
}

namespace {

constexpr std::uint32_t kCacheMagic = 0x53495342u;  // "SISB"
constexpr std::uint32_t kCacheVersion = 1u;

template <typename T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("truncated basis cache: " + path);
  return value;
}

}  // namespace

void write_basis_cache(const SpectralBasis& basis,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  put(out, kCacheMagic);
  put(out, kCacheVersion);
  put(out, static_cast<std::uint64_t>(basis.n()));
  put(out, static_cast<std::uint64_t>(basis.k()));
  put(out, basis.alpha);
  out.write(reinterpret_cast<const char*>(basis.eigenvalues.data()),
            sizeof(double) * basis.k());
  out.write(reinterpret_cast<const char*>(basis.phi.data()),
            sizeof(double) * basis.phi.size());
  put(out, static_cast<std::uint64_t>(basis.mass.B.nonZeros()));
  for (int c = 0; c < basis.mass.B.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(basis.mass.B, c); it;
         ++it) {
      put(out, static_cast<std::uint32_t>(it.row()));
      put(out, static_cast<std::uint32_t>(it.col()));
      put(out, it.value());
    }
  if (!out) throw IoError("write failed: " + path.string());
}

SpectralBasis read_basis_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string p = path.string();
  if (get<std::uint32_t>(in, p) != kCacheMagic)
    throw IoError("not a basis cache: " + p);
  if (get<std::uint32_t>(in, p) != kCacheVersion)
    throw IoError("unsupported basis cache version: " + p);
  const auto n = static_cast<int>(get<std::uint64_t>(in, p));
  const auto k = static_cast<int>(get<std::uint64_t>(in, p));
  SpectralBasis basis;
  basis.alpha = get<double>(in, p);
  basis.eigenvalues.resize(k);
  in.read(reinterpret_cast<char*>(basis.eigenvalues.data()),
          sizeof(double) * k);
  basis.phi.resize(n, k);
  in.read(reinterpret_cast<char*>(basis.phi.data()),
          sizeof(double) * basis.phi.size());
  if (!in) throw IoError("truncated basis cache: " + p);
  const auto nnz = get<std::uint64_t>(in, p);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(nnz);
  for (std::uint64_t i = 0; i < nnz; ++i) {
    const auto row = get<std::uint32_t>(in, p);
    const auto col = get<std::uint32_t>(in, p);
    const auto value = get<double>(in, p);
    triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
  }
  basis.mass.alpha = basis.alpha;
  basis.mass.B.resize(n, n);
  basis.mass.B.setFromTriplets(triplets.begin(), triplets.end());
  return basis;
}

}  // namespace sispec
