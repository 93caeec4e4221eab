#include "tumorpinn/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "tumorpinn/errors.hpp"

namespace tumorpinn {

std::string to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kSyntheticMse: return "synthetic_mse";
    case ExperimentMode::kRealBce: return "real_bce";
    case ExperimentMode::kSpatialV1V2: return "spatial_v1v2";
    case ExperimentMode::kVAndA: return "v_and_a";
  }
  return "?";
}

ExperimentMode experiment_mode_from_string(const std::string& name) {
  if (name == "synthetic_mse") return ExperimentMode::kSyntheticMse;
  if (name == "real_bce") return ExperimentMode::kRealBce;
  if (name == "spatial_v1v2") return ExperimentMode::kSpatialV1V2;
  if (name == "v_and_a") return ExperimentMode::kVAndA;
  throw ConfigError("unknown experiment mode '" + name + "'");
}

ParamMode TrainConfig::param_mode() const {
  switch (mode) {
    case ExperimentMode::kSpatialV1V2: return ParamMode::kSpatialV1V2;
    case ExperimentMode::kVAndA: return ParamMode::kVAndA;
    default: return ParamMode::kConstantV;
  }
}

DataLoss TrainConfig::data_loss() const {
  return mode == ExperimentMode::kSyntheticMse ? DataLoss::kMse : DataLoss::kBce;
}

PhysicalParams TrainConfig::initial_physical() const {
  PhysicalParams p;
  p.mode = param_mode();
  if (!initial_guess.empty()) {
    p.values = initial_guess;
  } else if (p.mode == ParamMode::kConstantV) {
    p.values = {2.0};
  } else if (p.mode == ParamMode::kSpatialV1V2) {
    p.values = {1.0, 1.0};
  } else {
    p.values = {2.0, 1.0};
  }
  return p;
}

void TrainConfig::validate() const {
  weights.validate();
  if (epochs < 0) throw ConfigError("epochs must be nonnegative");
  optim.validate();
  arch.validate();
  sampling.validate();
  initial_physical().validate();
  if (log_every <= 0) throw ConfigError("log_every must be positive");
  if (early_stop_window <= 0 || !(early_stop_tol > 0.0)) throw ConfigError("early stop window/tolerance must be positive");
  if (!(noise_eps >= 0.0 && noise_sigma >= 0.0)) throw ConfigError("noise parameters must be nonnegative");
  if (solver_nx < 3) throw ConfigError("solver_nx must be at least 3");
  if (mode != ExperimentMode::kSyntheticMse && train_times.empty() && data_file.empty()) {
    throw ConfigError("binary modes need train_times or a data_file");
  }
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    if constexpr (std::is_floating_point_v<T>) {
      os << fmt(v[i]);
    } else {
      os << v[i];
    }
  }
  return os.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) throw ConfigError(key + ": '" + text + "' is not a number");
  return v;
}

template <class I>
I parse_int(const std::string& key, const std::string& text) {
  I v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) throw ConfigError(key + ": '" + text + "' is not an integer");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "on") return true;
  if (text == "false" || text == "0" || text == "off") return false;
  throw ConfigError(key + ": '" + text + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

}  // namespace

std::string TrainConfig::canonical() const {
  std::ostringstream os;
  auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
  kv("name", name);
  kv("mode", to_string(mode));
  kv("w_pde", fmt(weights.w_pde));
  kv("w_ic", fmt(weights.w_ic));
  kv("w_bc", fmt(weights.w_bc));
  kv("w_data", fmt(weights.w_data));
  kv("epochs", std::to_string(epochs));
  kv("init_seed", std::to_string(init_seed));
  kv("sampling_seed", std::to_string(sampling_seed));
  kv("data_seed", std::to_string(data_seed));
  kv("noise_seed", std::to_string(noise_seed));
  kv("initial_guess", join(initial_guess));
  kv("lr", fmt(optim.base_lr));
  kv("lr_decay", fmt(optim.decay_factor));
  kv("lr_decay_every", std::to_string(optim.decay_every));
  kv("beta1", fmt(optim.beta1));
  kv("beta2", fmt(optim.beta2));
  kv("adam_eps", fmt(optim.eps));
  kv("clip_norm", fmt(optim.clip_norm));
  kv("arch", join(arch.widths));
  kv("n_interior", std::to_string(sampling.n_interior));
  kv("n_per_edge", std::to_string(sampling.n_per_edge));
  kv("n_initial", std::to_string(sampling.n_initial));
  kv("n_data", std::to_string(sampling.n_data));
  kv("precision", precision == Precision::kFloat32 ? "float32" : "float64");
  kv("log_every", std::to_string(log_every));
  kv("resample_each_epoch", resample_each_epoch ? "true" : "false");
  kv("early_stop", early_stop ? "true" : "false");
  kv("early_stop_tol", fmt(early_stop_tol));
  kv("early_stop_window", std::to_string(early_stop_window));
  kv("data_file", data_file);
  kv("v_true", fmt(v_true));
  kv("noise_eps", fmt(noise_eps));
  kv("noise_sigma", fmt(noise_sigma));
  kv("solver_nx", std::to_string(solver_nx));
  kv("solver_cfl", fmt(solver_cfl));
  kv("snapshot_times", join(snapshot_times));
  kv("radius_file", radius_file);
  kv("train_times", join(train_times));
  kv("binary_sampling", binary_sampling == SpatialSampling::kUniform ? "uniform" : "balanced");
  return os.str();
}

void apply_setting(TrainConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "preset") c = preset(v);
  else if (key == "name") c.name = v;
  else if (key == "mode") c.mode = experiment_mode_from_string(v);
  else if (key == "w_pde") c.weights.w_pde = parse_double(key, v);
  else if (key == "w_ic") c.weights.w_ic = parse_double(key, v);
  else if (key == "w_bc") c.weights.w_bc = parse_double(key, v);
  else if (key == "w_data") c.weights.w_data = parse_double(key, v);
  else if (key == "epochs") c.epochs = parse_int<std::int64_t>(key, v);
  else if (key == "init_seed") c.init_seed = parse_int<std::uint64_t>(key, v);
  else if (key == "sampling_seed") c.sampling_seed = parse_int<std::uint64_t>(key, v);
  else if (key == "data_seed") c.data_seed = parse_int<std::uint64_t>(key, v);
  else if (key == "noise_seed") c.noise_seed = parse_int<std::uint64_t>(key, v);
  else if (key == "initial_guess") c.initial_guess = parse_list(key, v);
  else if (key == "lr") c.optim.base_lr = parse_double(key, v);
  else if (key == "lr_decay") c.optim.decay_factor = parse_double(key, v);
  else if (key == "lr_decay_every") c.optim.decay_every = parse_int<std::int64_t>(key, v);
  else if (key == "beta1") c.optim.beta1 = parse_double(key, v);
  else if (key == "beta2") c.optim.beta2 = parse_double(key, v);
  else if (key == "adam_eps") c.optim.eps = parse_double(key, v);
  else if (key == "clip_norm") c.optim.clip_norm = parse_double(key, v);
  else if (key == "arch") {
    c.arch.widths.clear();
    for (double w : parse_list(key, v)) c.arch.widths.push_back(static_cast<int>(w));
  } else if (key == "n_interior") c.sampling.n_interior = parse_int<std::size_t>(key, v);
  else if (key == "n_per_edge") c.sampling.n_per_edge = parse_int<std::size_t>(key, v);
  else if (key == "n_initial") c.sampling.n_initial = parse_int<std::size_t>(key, v);
  else if (key == "n_data") c.sampling.n_data = parse_int<std::size_t>(key, v);
  else if (key == "precision") {
    if (v == "float32") c.precision = Precision::kFloat32;
    else if (v == "float64") c.precision = Precision::kFloat64;
    else throw ConfigError("precision: expected float32 or float64, got '" + v + "'");
  } else if (key == "log_every") c.log_every = parse_int<std::int64_t>(key, v);
  else if (key == "resample_each_epoch") c.resample_each_epoch = parse_bool(key, v);
  else if (key == "early_stop") c.early_stop = parse_bool(key, v);
  else if (key == "early_stop_tol") c.early_stop_tol = parse_double(key, v);
  else if (key == "early_stop_window") c.early_stop_window = parse_int<std::int64_t>(key, v);
  else if (key == "data_file") c.data_file = v;
  else if (key == "v_true") c.v_true = parse_double(key, v);
  else if (key == "noise_eps") c.noise_eps = parse_double(key, v);
  else if (key == "noise_sigma") c.noise_sigma = parse_double(key, v);
  else if (key == "solver_nx") c.solver_nx = parse_int<int>(key, v);
  else if (key == "solver_cfl") c.solver_cfl = parse_double(key, v);
  else if (key == "snapshot_times") c.snapshot_times = parse_list(key, v);
  else if (key == "radius_file") c.radius_file = v;
  else if (key == "train_times") c.train_times = parse_list(key, v);
  else if (key == "binary_sampling") {
    if (v == "uniform") c.binary_sampling = SpatialSampling::kUniform;
    else if (v == "balanced") c.binary_sampling = SpatialSampling::kBalanced;
    else throw ConfigError("binary_sampling: expected uniform or balanced, got '" + v + "'");
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

TrainConfig parse_config(std::istream& in, const std::string& source_name) {
  TrainConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source_name + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    try {
      apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  return c;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_config(in, path.string());
}

namespace {

TrainConfig synthetic_preset(double v_true, double w_data) {
  TrainConfig c;
  std::ostringstream name;
  name << "synthetic-v" << std::fixed << std::setprecision(1) << v_true;
  c.name = name.str();
  c.mode = ExperimentMode::kSyntheticMse;
  c.weights = {10.0, 1.0, 1.0, w_data};
  c.epochs = 60000;
  c.v_true = v_true;
  c.initial_guess = {1.0};
  return c;
}

std::string noise_name(double eps, double sigma) {
  std::ostringstream os;
  os << "noise-e" << eps << "-s" << sigma;
  return os.str();
}

// (eps, sigma) grid of the noise study, v_true = 2.1.
const std::vector<std::pair<double, double>>& noise_grid() {
  static const std::vector<std::pair<double, double>> grid{
      {0.5, 0.2}, {0.5, 0.5}, {0.5, 1.0}, {1.0, 0.2}, {10.0, 0.2}};
  return grid;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names{"synthetic-v1.7", "synthetic-v1.8", "synthetic-v1.9",
                                 "synthetic-v2.0", "synthetic-v2.1", "synthetic-v2.2"};
  for (const auto& [e, s] : noise_grid()) names.push_back(noise_name(e, s));
  names.insert(names.end(), {"real-bce", "spatial", "v-and-a"});
  return names;
}

TrainConfig preset(const std::string& name) {
  static const std::map<std::string, double> table1{{"synthetic-v1.7", 50.0}, {"synthetic-v1.8", 50.0},
                                                    {"synthetic-v1.9", 80.0}, {"synthetic-v2.0", 100.0},
                                                    {"synthetic-v2.1", 100.0}, {"synthetic-v2.2", 100.0}};
  if (const auto it = table1.find(name); it != table1.end()) {
    return synthetic_preset(std::stod(name.substr(std::string("synthetic-v").size())), it->second);
  }
  for (const auto& [e, s] : noise_grid()) {
    if (name == noise_name(e, s)) {
      TrainConfig c = synthetic_preset(2.1, 100.0);
      c.name = name;
      c.noise_eps = e;
      c.noise_sigma = s;
      c.epochs = 30000;
      return c;
    }
  }
  TrainConfig c;
  c.name = name;
  c.epochs = 80000;
  if (name == "real-bce") {
    c.mode = ExperimentMode::kRealBce;
    c.weights = {1.0, 1.0, 1.0, 5.0};
    c.initial_guess = {2.0};
    c.train_times = {0.0, 0.25, 0.375, 0.5};
    return c;
  }
  if (name == "spatial") {
    c.mode = ExperimentMode::kSpatialV1V2;
    c.weights = {1.0, 1.0, 1.0, 4.0};
    c.initial_guess = {1.0, 1.0};
    c.train_times = {0.0, 0.25, 0.375, 0.5, 0.625, 0.75};
    return c;
  }
  if (name == "v-and-a") {
    c.mode = ExperimentMode::kVAndA;
    c.weights = {1.0, 1.0, 1.0, 5.0};
    c.initial_guess = {2.0, 1.0};
    c.train_times = {0.0, 0.25, 0.375, 0.5};
    return c;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace tumorpinn
