#include "sispec/config.hpp"

#include <fstream>
#include <sstream>

namespace sispec {

PipelineConfig PipelineConfig::near_isometric() {
  PipelineConfig config;
  config.alphas = {0.0, 0.6, 0.8};
  return config;
}

void PipelineConfig::validate() const {
  if (alphas.empty()) throw ConfigError("alphas must be non-empty");
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0))
      throw ConfigError("alpha out of [0,1]: " + std::to_string(a));
  if (k < 2) throw ConfigError("k must be >= 2");
  if (!(clip_lo_pct >= 0.0 && clip_lo_pct < clip_hi_pct &&
        clip_hi_pct <= 100.0))
    throw ConfigError("invalid clip percentiles");
  if (smooth_iterations < 0) throw ConfigError("negative smooth_iterations");
  if (!(smooth_step > 0.0 && smooth_step < 1.0))
    throw ConfigError("smooth_step must be in (0,1)");
  if (descriptor_count < 1) throw ConfigError("descriptor_count must be >= 1");
  if (descriptor_stride < 1) throw ConfigError("descriptor_stride must be >= 1");
  const LossWeights& w = weights;
  if (w.bijectivity < 0 || w.orthogonality < 0 || w.lbo_commutativity < 0 ||
      w.descriptor_commutativity < 0)
    throw ConfigError("loss weights must be nonnegative");
  if (w.bijectivity == 0 && w.orthogonality == 0 && w.lbo_commutativity == 0 &&
      w.descriptor_commutativity == 0)
    throw ConfigError("loss weights must not all be zero");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

namespace {

std::string join(const std::vector<double>& values) {
  std::ostringstream ss;
  ss.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) ss << ',';
    ss << values[i];
  }
  return ss.str();
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  PipelineConfig config;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ParseError(path.string(), line_no, "expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "alphas")
        config.alphas = parse_double_list(value);
      else if (key == "k")
        config.k = std::stoi(value);
      else if (key == "clip_lo_pct")
        config.clip_lo_pct = std::stod(value);
      else if (key == "clip_hi_pct")
        config.clip_hi_pct = std::stod(value);
      else if (key == "smooth_iterations")
        config.smooth_iterations = std::stoi(value);
      else if (key == "smooth_step")
        config.smooth_step = std::stod(value);
      else if (key == "descriptor_kind") {
        if (value == "hks")
          config.descriptor_kind = DescriptorKind::HKS;
        else if (value == "wks")
          config.descriptor_kind = DescriptorKind::WKS;
        else
          throw ConfigError("descriptor_kind must be hks or wks");
      } else if (key == "descriptor_count")
        config.descriptor_count = std::stoi(value);
      else if (key == "wks_variance_scale")
        config.wks_variance_scale = std::stod(value);
      else if (key == "descriptor_stride")
        config.descriptor_stride = std::stoi(value);
      else if (key == "weight_bijectivity")
        config.weights.bijectivity = std::stod(value);
      else if (key == "weight_orthogonality")
        config.weights.orthogonality = std::stod(value);
      else if (key == "weight_lbo_commutativity")
        config.weights.lbo_commutativity = std::stod(value);
      else if (key == "weight_descriptor_commutativity")
        config.weights.descriptor_commutativity = std::stod(value);
      else if (key == "optimizer_max_iters")
        config.optimizer.max_iters = std::stoi(value);
      else if (key == "optimizer_initial_step")
        config.optimizer.initial_step = std::stod(value);
      else if (key == "optimizer_max_halvings")
        config.optimizer.max_halvings = std::stoi(value);
      else if (key == "optimizer_relative_decrease_tol")
        config.optimizer.relative_decrease_tol = std::stod(value);
      else if (key == "cache_dir")
        config.cache_dir = value;
      else if (key == "seed")
        config.seed = static_cast<unsigned>(std::stoul(value));
      else
        throw ConfigError("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
      throw ParseError(path.string(), line_no, "bad value for " + key);
    }
  }
  config.validate();
  return config;
}

void save_config(const PipelineConfig& config,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config: " + path.string());
  out.precision(17);
  out << "# interpolation exponents of the spectral domains, each in [0,1]\n"
      << "alphas = " << join(config.alphas) << "\n"
      << "# basis size per domain\n"
      << "k = " << config.k << "\n"
      << "# curvature magnitude clip percentiles\n"
      << "clip_lo_pct = " << config.clip_lo_pct << "\n"
      << "clip_hi_pct = " << config.clip_hi_pct << "\n"
      << "# pre-smoothing before curvature estimation\n"
      << "smooth_iterations = " << config.smooth_iterations << "\n"
      << "smooth_step = " << config.smooth_step << "\n"
      << "# hks or wks\n"
      << "descriptor_kind = "
      << (config.descriptor_kind == DescriptorKind::HKS ? "hks" : "wks")
      << "\n"
      << "descriptor_count = " << config.descriptor_count << "\n"
      << "wks_variance_scale = " << config.wks_variance_scale << "\n"
      << "# every n-th channel feeds the commutativity operators\n"
      << "descriptor_stride = " << config.descriptor_stride << "\n"
      << "# loss weights\n"
      << "weight_bijectivity = " << config.weights.bijectivity << "\n"
      << "weight_orthogonality = " << config.weights.orthogonality << "\n"
      << "weight_lbo_commutativity = " << config.weights.lbo_commutativity
      << "\n"
      << "weight_descriptor_commutativity = "
      << config.weights.descriptor_commutativity << "\n"
      << "# refinement settings\n"
      << "optimizer_max_iters = " << config.optimizer.max_iters << "\n"
      << "optimizer_initial_step = " << config.optimizer.initial_step << "\n"
      << "optimizer_max_halvings = " << config.optimizer.max_halvings << "\n"
      << "optimizer_relative_decrease_tol = "
      << config.optimizer.relative_decrease_tol << "\n"
      << "cache_dir = " << config.cache_dir << "\n"
      << "seed = " << config.seed << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace sispec
