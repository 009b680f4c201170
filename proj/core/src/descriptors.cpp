#include "sispec/descriptors.hpp"

#include <cmath>
#include <fstream>

namespace sispec {

namespace {

// First strictly positive eigenvalue index (skips the constant mode).
int first_positive(const SpectralBasis& basis) {
  const double top = basis.eigenvalues(basis.k() - 1);
  for (int i = 0; i < basis.k(); ++i)
    if (basis.eigenvalues(i) > 1e-12 * top) return i;
  throw DegenerateSpectrum("all eigenvalues vanish");
}

}  // namespace

std::vector<double> default_hks_times(const SpectralBasis& basis, int count) {
  const int lo = first_positive(basis);
  const double lambda_min = basis.eigenvalues(lo);
  const double lambda_max = basis.eigenvalues(basis.k() - 1);
  const double t_min = 4.0 * std::log(10.0) / lambda_max;
  const double t_max = 4.0 * std::log(10.0) / lambda_min;
  std::vector<double> times(count);
  for (int i = 0; i < count; ++i) {
    const double s = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    times[i] = std::exp(std::log(t_min) + s * (std::log(t_max) - std::log(t_min)));
  }
  return times;
}

DescriptorSet hks(const SpectralBasis& basis,
                  const std::vector<double>& times_in) {
  if (basis.k() < 2) throw Error("HKS needs a basis with k >= 2");
  const std::vector<double> times =
      times_in.empty() ? default_hks_times(basis) : times_in;
  if (times.empty()) throw EmptyTimes("no HKS time samples");
  for (double t : times)
    if (!(t > 0.0)) throw Error("HKS times must be positive");

  const int n = basis.n();
  const Eigen::MatrixXd phi_sq = basis.phi.cwiseProduct(basis.phi);
  DescriptorSet out;
  out.kind = DescriptorKind::HKS;
  out.parameters = times;
  out.values.resize(n, static_cast<int>(times.size()));
  for (std::size_t c = 0; c < times.size(); ++c) {
    const Eigen::VectorXd w = (-times[c] * basis.eigenvalues.array()).exp();
    out.values.col(static_cast<int>(c)) = phi_sq * w;
  }
  return out;
}

DescriptorSet wks(const SpectralBasis& basis, int num_energies,
                  double variance_scale) {
  if (basis.k() < 3) throw Error("WKS needs a basis with k >= 3");
  if (num_energies < 1) throw Error("num_energies must be >= 1");
  const int lo = first_positive(basis);
  const double e_min = std::log(basis.eigenvalues(lo));
  const double e_max = std::log(basis.eigenvalues(basis.k() - 1));
  if (!(e_max - e_min > 1e-9))
    throw DegenerateSpectrum("eigenvalue range too small for WKS");

  const double delta =
      num_energies > 1 ? (e_max - e_min) / (num_energies - 1)
                       : (e_max - e_min);
  const double sigma = variance_scale * delta;

  const int n = basis.n();
  const Eigen::MatrixXd phi_sq = basis.phi.cwiseProduct(basis.phi);
  DescriptorSet out;
  out.kind = DescriptorKind::WKS;
  out.parameters.resize(num_energies);
  out.values.resize(n, num_energies);
  for (int c = 0; c < num_energies; ++c) {
    const double e = num_energies > 1 ? e_min + c * delta
                                      : 0.5 * (e_min + e_max);
    out.parameters[c] = e;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(basis.k());
    for (int i = lo; i < basis.k(); ++i) {
      const double d = e - std::log(basis.eigenvalues(i));
      w(i) = std::exp(-d * d / (2.0 * sigma * sigma));
    }
    w /= w.sum();
    Eigen::VectorXd col = phi_sq * w;
    const double l1 = col.cwiseAbs().sum();
    if (l1 > 0.0) col /= l1;  // unit L1 vertex-sum per energy
    out.values.col(c) = col;
  }
  return out;
}

void project_all(DescriptorSet& desc,
                 const std::vector<const SpectralBasis*>& bases) {
  for (const SpectralBasis* basis : bases) {
    if (basis->n() != desc.values.rows())
      throw MeshMismatch("basis vertex count != descriptor rows");
    desc.projections[basis->alpha] = project(*basis, desc.values);
  }
}

namespace {

constexpr std::uint32_t kDescMagic = 0x53495344u;  // "SISD"

template <typename T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("truncated descriptor cache: " + path);
  return value;
}

}  // namespace

void write_descriptor_cache(const DescriptorSet& desc,
                            const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  put(out, kDescMagic);
  put(out, static_cast<std::uint64_t>(desc.values.rows()));
  put(out, static_cast<std::uint64_t>(desc.values.cols()));
  put(out, static_cast<std::uint32_t>(desc.kind));
  put(out, static_cast<std::uint64_t>(desc.parameters.size()));
  out.write(reinterpret_cast<const char*>(desc.parameters.data()),
            sizeof(double) * desc.parameters.size());
  // Row-major on disk.
  for (int r = 0; r < desc.values.rows(); ++r)
    for (int c = 0; c < desc.values.cols(); ++c) put(out, desc.values(r, c));
  if (!out) throw IoError("write failed: " + path.string());
}

DescriptorSet read_descriptor_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string p = path.string();
  if (get<std::uint32_t>(in, p) != kDescMagic)
    throw IoError("not a descriptor cache: " + p);
  const auto n = static_cast<int>(get<std::uint64_t>(in, p));
  const auto d = static_cast<int>(get<std::uint64_t>(in, p));
  DescriptorSet out;
  out.kind = static_cast<DescriptorKind>(get<std::uint32_t>(in, p));
  const auto np = get<std::uint64_t>(in, p);
  out.parameters.resize(np);
  in.read(reinterpret_cast<char*>(out.parameters.data()),
          sizeof(double) * np);
  out.values.resize(n, d);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < d; ++c) out.values(r, c) = get<double>(in, p);
  return out;
}

}  // namespace sispec
