// tumorpinn command-line front end.
//
// Exit codes: 0 ok, 1 runtime failure, 2 usage or configuration error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tumorpinn/config.hpp"
#include "tumorpinn/csv.hpp"
#include "tumorpinn/diagnostics.hpp"
#include "tumorpinn/errors.hpp"
#include "tumorpinn/obsdata.hpp"
#include "tumorpinn/solver.hpp"
#include "tumorpinn/trainer.hpp"

namespace fs = std::filesystem;
using namespace tumorpinn;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << std::setprecision(17);
  return os;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

// ---- shared config options for the training subcommands ----

struct ConfigArgs {
  std::string preset;
  std::string config_file;
  std::vector<std::string> sets;
  std::int64_t epochs = -1;
  std::int64_t log_every = -1;
  std::string precision;
  std::string data_file;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--preset", preset, "Named experiment preset")->check(CLI::IsMember(preset_names()));
    app->add_option("--config", config_file, "Config file of 'key = value' lines");
    app->add_option("--set", sets, "Override a config key, e.g. --set w_data=80 (repeatable)");
    app->add_option("--epochs", epochs, "Override the epoch budget");
    app->add_option("--log-every", log_every, "Override the logging interval");
    app->add_option("--precision", precision, "float32 or float64 network passes")
        ->check(CLI::IsMember({"float32", "float64"}));
    app->add_option("--data", data_file, "Observation CSV replacing generated data");
    app->add_option("--seed", seed, "Base seed; init/sampling/data/noise seeds become seed, seed+1, seed+2, seed+3");
  }

  TrainConfig resolve() const {
    if (preset.empty() == config_file.empty()) throw UsageError("give exactly one of --preset or --config");
    TrainConfig c = preset.empty() ? load_config(config_file) : tumorpinn::preset(preset);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (epochs >= 0) c.epochs = epochs;
    if (log_every >= 0) apply_setting(c, "log_every", std::to_string(log_every));
    if (!precision.empty()) apply_setting(c, "precision", precision);
    if (!data_file.empty()) c.data_file = data_file;
    if (seed) {
      c.init_seed = *seed;
      c.sampling_seed = *seed + 1;
      c.data_seed = *seed + 2;
      c.noise_seed = *seed + 3;
    }
    c.validate();
    return c;
  }
};

void print_record(const TrainRecord& r) {
  std::cout << "epoch " << r.epoch << "  total " << r.loss.total << "  pde " << r.loss.pde << "  ic " << r.loss.ic
            << "  bc " << r.loss.bc << "  data " << r.loss.data << "  params";
  for (double v : r.phys) std::cout << ' ' << v;
  std::cout << '\n' << std::flush;
}

void write_run_artifacts(const fs::path& dir, const std::string& stem, const TrainConfig& c, const TrainResult& r) {
  const std::string header = metadata_header(c.canonical(), {"preset " + c.name});
  write_trajectory_csv(dir / (stem + "trajectory.csv"), r.trajectory, r.phys.names(), header);
  write_final_json(dir / (stem + "final.json"), c, r);
}

// ---- generate ----

struct GenerateArgs {
  std::optional<double> v;
  std::optional<double> v1, v2;
  double plateau = 1.0;
  double t_end = 1.0;
  std::size_t n_data = 200;
  double noise_eps = 0.0;
  double noise_sigma = 0.0;
  int nx = 201;
  double cfl = 0.4;
  std::string snapshots;
  std::uint64_t seed = 3;
  std::uint64_t noise_seed = 4;
  bool seed_given = false;
  bool dump_fields = false;
  bool binary = false;
  std::string times = "0,0.25,0.375,0.5";
  std::string radius_file;
  bool balanced = false;
  std::string out = ".";
};

int cmd_generate(const GenerateArgs& a) {
  const fs::path dir(a.out);
  ensure_dir(dir);
  std::ostringstream canon;
  if (a.binary) {
    const RadiusSeries series = a.radius_file.empty() ? builtin_radius_table() : read_radius_csv(a.radius_file);
    const auto times = parse_doubles(a.times, "--times");
    canon << "generate binary times=" << a.times << " n_data=" << a.n_data << " seed=" << a.seed
          << " sampling=" << (a.balanced ? "balanced" : "uniform") << " radius_file=" << a.radius_file << '\n';
    const auto obs = make_binary_dataset(series, times, a.n_data, a.seed,
                                         a.balanced ? SpatialSampling::kBalanced : SpatialSampling::kUniform);
    const auto pts = to_data_points(obs);
    write_observations_csv(dir / "dataset.csv", pts, DataKind::kBinary, metadata_header(canon.str()));
    std::cout << "wrote " << pts.size() << " labelled rows to " << (dir / "dataset.csv").string() << '\n';
    return 0;
  }

  if (a.v.has_value() == (a.v1.has_value() || a.v2.has_value())) {
    throw UsageError("give either --v or both --v1 and --v2");
  }
  if (a.v1.has_value() != a.v2.has_value()) throw UsageError("--v1 and --v2 go together");
  SolveConfig sc;
  if (a.v) {
    sc.source.mode = ParamMode::kConstantV;
    sc.source.coeffs = {*a.v};
  } else {
    sc.source.mode = ParamMode::kSpatialV1V2;
    sc.source.coeffs = {*a.v1, *a.v2};
  }
  sc.plateau = a.plateau;
  sc.t_end = a.t_end;
  sc.cfl = a.cfl;
  SyntheticSampleSpec spec;
  spec.n_points = a.n_data;
  if (!a.snapshots.empty()) {
    spec.snapshot_times = parse_doubles(a.snapshots, "--snapshots");
  } else {
    spec.snapshot_times.clear();
    for (int k = 0; k <= 10; ++k) spec.snapshot_times.push_back(a.t_end * k / 10.0);
  }
  Grid2D grid;
  grid.nx = grid.ny = a.nx;
  sc.output_times = spec.snapshot_times;

  canon << "generate source=" << to_string(sc.source.mode);
  for (double c : sc.source.coeffs) canon << ' ' << fmt(c);
  canon << " plateau=" << fmt(a.plateau) << " t_end=" << fmt(a.t_end) << " n_data=" << a.n_data
        << " nx=" << a.nx << " cfl=" << fmt(a.cfl) << " snapshots=";
  for (double t : spec.snapshot_times) canon << fmt(t) << ';';
  canon << " seed=" << a.seed << " noise_eps=" << fmt(a.noise_eps) << " noise_sigma=" << fmt(a.noise_sigma)
        << " noise_seed=" << a.noise_seed << '\n';
  const std::string header = metadata_header(canon.str());

  const SolveResult res = solve(sc, patch_initial(grid, sc.plateau));
  auto pts = sample_snapshots(res.snapshots, spec.n_points, a.seed);
  pts = add_noise(pts, a.noise_eps, a.noise_sigma, a.noise_seed);
  write_observations_csv(dir / "dataset.csv", pts, DataKind::kDensity, header);

  auto os = open_out(dir / "snapshots.csv");
  os << header << "t,mass,max,radius\n";
  for (const auto& f : res.snapshots) {
    os << f.t << ',' << f.mass() << ',' << f.max() << ',';
    try {
      os << extract_radius(f, 0.1, 1e-9).radius;
    } catch (const std::exception&) {
      os << "nan";
    }
    os << '\n';
    if (a.dump_fields) {
      std::ostringstream name;
      name << "field_t" << std::fixed << std::setprecision(4) << f.t;
      write_field_binary(f, sc, dir / (name.str() + ".bin"));
      write_field_csv(f, dir / (name.str() + ".csv"), header);
    }
  }
  std::cout << "wrote " << pts.size() << " rows to " << (dir / "dataset.csv").string() << " (" << res.steps
            << " solver steps, clipped mass " << res.clipped_mass << ")\n";
  return 0;
}

// ---- train ----

int cmd_train(const ConfigArgs& ca, const std::string& out, std::int64_t checkpoint_every, const std::string& resume,
              bool quiet) {
  const TrainConfig c = ca.resolve();
  const fs::path dir(out);
  ensure_dir(dir);
  {
    auto os = open_out(dir / "config.cfg");
    os << metadata_header(c.canonical()) << c.canonical();
  }
  TrainOptions opt;
  opt.checkpoint_path = dir / "checkpoint.json";
  opt.checkpoint_every = checkpoint_every;
  std::optional<Checkpoint> ck;
  if (!resume.empty()) {
    ck = load_checkpoint(resume);
    if (ck->config_hash != config_hash(c.canonical())) {
      std::cerr << "warning: checkpoint was written under a different config (hash " << ck->config_hash << ")\n";
    }
    opt.resume_from = &*ck;
  }
  if (!quiet) opt.on_record = print_record;
  const TrainResult r = train(c, opt);
  write_run_artifacts(dir, "", c, r);
  std::cout << "final";
  const auto names = r.phys.names();
  for (std::size_t k = 0; k < names.size(); ++k) std::cout << ' ' << names[k] << '=' << fmt(r.phys.values[k]);
  std::cout << "  epochs " << r.epochs_run << (r.early_stopped ? " (early stop)" : "") << '\n';
  return 0;
}

// ---- multi-start ----

int cmd_multi_start(const ConfigArgs& ca, const std::string& guesses_text, const std::string& out) {
  const TrainConfig c = ca.resolve();
  const std::size_t n_phys = c.initial_physical().values.size();
  std::vector<std::vector<double>> guesses;
  std::stringstream ss(guesses_text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    auto g = parse_doubles(item, "--guesses");
    if (g.size() != n_phys) throw UsageError("each guess needs " + std::to_string(n_phys) + " value(s)");
    guesses.push_back(std::move(g));
  }
  if (guesses.empty()) throw UsageError("--guesses is empty");
  const fs::path dir(out);
  ensure_dir(dir);
  const MultiStartResult ms = multi_start(c, guesses);
  const std::string header = metadata_header(c.canonical());
  auto os = open_out(dir / "multistart.csv");
  os << header << "run";
  const auto names = c.initial_physical().names();
  for (const auto& n : names) os << ",guess_" << n;
  for (const auto& n : names) os << ",final_" << n;
  os << ",final_loss\n";
  for (std::size_t k = 0; k < ms.runs.size(); ++k) {
    os << k;
    for (double g : guesses[k]) os << ',' << g;
    for (double v : ms.finals[k].values) os << ',' << v;
    os << ',' << ms.runs[k].trajectory.back().loss.total << '\n';
    TrainConfig ck = c;
    ck.initial_guess = guesses[k];
    write_run_artifacts(dir, "run" + std::to_string(k) + "_", ck, ms.runs[k]);
    std::cout << "run " << k << " final " << names[0] << '=' << fmt(ms.finals[k].values[0]) << '\n';
  }
  std::cout << "spread of " << names[0] << ": " << ms.spread << '\n';
  return 0;
}

// ---- noise-sweep ----

int cmd_noise_sweep(ConfigArgs ca, const std::string& pairs_text, const std::string& out) {
  if (ca.preset.empty() && ca.config_file.empty()) ca.preset = "noise-e0.5-s0.2";
  const TrainConfig c = ca.resolve();
  std::vector<std::pair<double, double>> pairs;
  std::stringstream ss(pairs_text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("--pairs expects eps:sigma items, got '" + item + "'");
    const auto e = parse_doubles(item.substr(0, colon), "--pairs");
    const auto s = parse_doubles(item.substr(colon + 1), "--pairs");
    if (e.size() != 1 || s.size() != 1) throw UsageError("--pairs expects eps:sigma items, got '" + item + "'");
    pairs.emplace_back(e[0], s[0]);
  }
  if (pairs.empty()) throw UsageError("--pairs is empty");
  const fs::path dir(out);
  ensure_dir(dir);
  const auto entries = noise_sweep(c, pairs);
  const std::string header = metadata_header(c.canonical(), {"v_true " + fmt(c.v_true)});
  auto curves = open_out(dir / "noise_errors.csv");
  curves << header << "eps,sigma,epoch,relative_error\n";
  auto summary = open_out(dir / "noise_summary.csv");
  summary << header << "eps,sigma,final_v,final_relative_error\n";
  for (const auto& e : entries) {
    for (const auto& [ep, err] : e.error_curve) curves << e.eps << ',' << e.sigma << ',' << ep << ',' << err << '\n';
    summary << e.eps << ',' << e.sigma << ',' << e.result.phys.values[0] << ',' << e.final_error << '\n';
    std::cout << "eps " << e.eps << " sigma " << e.sigma << "  v " << e.result.phys.values[0] << "  error "
              << 100 * e.final_error << "%\n";
  }
  // For each eps, are the final errors non-decreasing in sigma?
  std::map<double, std::vector<std::pair<double, double>>> by_eps;
  for (const auto& e : entries) by_eps[e.eps].emplace_back(e.sigma, e.final_error);
  for (auto& [eps, list] : by_eps) {
    if (list.size() < 2) continue;
    std::sort(list.begin(), list.end());
    bool monotone = true;
    for (std::size_t k = 1; k < list.size(); ++k) monotone &= list[k].second >= list[k - 1].second;
    std::cout << "eps " << eps << ": error " << (monotone ? "non-decreasing" : "NOT monotone") << " in sigma\n";
  }
  return 0;
}

// ---- predict ----

struct PredictArgs {
  std::string final_json;
  std::optional<double> v, v1, v2, a;
  std::string times;
  int nx = 201;
  double cfl = 0.4;
  double threshold = 0.1;
  std::string out;
};

int cmd_predict(const PredictArgs& a) {
  PhysicalParams phys;
  if (!a.final_json.empty()) {
    std::ifstream is(a.final_json);
    if (!is) throw IoError("cannot open " + a.final_json);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(is);
      phys.mode = param_mode_from_string(j.at("param_mode").get<std::string>());
      phys.values = j.at("values").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(a.final_json + ": " + e.what());
    }
  } else if (a.v1 || a.v2) {
    if (!(a.v1 && a.v2) || a.v || a.a) throw UsageError("spatial prediction needs exactly --v1 and --v2");
    phys.mode = ParamMode::kSpatialV1V2;
    phys.values = {*a.v1, *a.v2};
  } else if (a.v) {
    phys.mode = a.a ? ParamMode::kVAndA : ParamMode::kConstantV;
    phys.values = a.a ? std::vector<double>{*a.v, *a.a} : std::vector<double>{*a.v};
  } else {
    throw UsageError("give --final, --v [--a], or --v1 and --v2");
  }
  phys.validate();

  const RadiusSeries table = builtin_radius_table();
  std::vector<double> times;
  if (a.times.empty()) {
    for (const auto& e : table.entries) times.push_back(e.t);
  } else {
    times = parse_doubles(a.times, "--times");
  }
  ForwardOptions fo;
  fo.nx = a.nx;
  fo.cfl = a.cfl;
  fo.threshold = a.threshold;
  const auto pred = predict_forward(phys, times, fo);

  std::ostringstream canon;
  canon << "predict mode=" << to_string(phys.mode);
  for (double v : phys.values) canon << ' ' << fmt(v);
  canon << " nx=" << a.nx << " cfl=" << fmt(a.cfl) << " threshold=" << fmt(a.threshold) << '\n';
  std::ostringstream table_out;
  table_out << std::setprecision(17) << metadata_header(canon.str()) << "t,radius,observed,relative_error\n";
  for (const auto& p : pred) {
    table_out << p.t << ',' << p.radius << ',';
    const auto obs = table.radius_at(p.t);
    if (obs && p.t > 0.0) {
      table_out << *obs << ',' << relative_error(p.radius, *obs) << '\n';
    } else {
      table_out << ",\n";
    }
  }
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    os << table_out.str();
  }
  std::cout << table_out.str();
  return 0;
}

// ---- radius ----

int cmd_radius(const std::string& field_path, double threshold, bool contour) {
  const DensityField f = read_field_binary(field_path);
  if (contour) {
    const auto c = extract_radius_contour(f, threshold);
    std::cout << "t " << f.t << "  contour radius min " << c.min << " mean " << c.mean << " max " << c.max << '\n';
    return 0;
  }
  const auto r = extract_radius(f, threshold, 1e-9);
  std::cout << "t " << f.t << "  radius " << std::setprecision(10) << r.radius << '\n';
  if (r.multiple_crossings) std::cerr << "warning: profile crosses the threshold more than once\n";
  return 0;
}

// ---- validate ----

int cmd_validate(std::uint64_t seed) {
  bool ok = true;
  for (const auto& r : run_invariant_suite(seed)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  (" << r.detail << ")\n";
    ok &= r.passed;
  }
  return ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Porous-medium tumour growth PINN: data generation, training and prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Solve the forward model and sample a synthetic dataset");
  auto* v_opt = generate->add_option("--v", gen.v, "Constant proliferation rate");
  generate->add_option("--v1", gen.v1, "Spatial rate: g = v1 + v2 sin(r)")->excludes(v_opt);
  generate->add_option("--v2", gen.v2, "Spatial rate: g = v1 + v2 sin(r)")->excludes(v_opt);
  generate->add_option("--plateau", gen.plateau, "Initial patch height");
  generate->add_option("--t-end", gen.t_end, "Final time");
  generate->add_option("--n-data", gen.n_data, "Number of sampled rows");
  generate->add_option("--noise-eps", gen.noise_eps, "Noise scale epsilon");
  generate->add_option("--noise-sigma", gen.noise_sigma, "Noise standard deviation sigma");
  generate->add_option("--nx", gen.nx, "Grid nodes per direction");
  generate->add_option("--cfl", gen.cfl, "CFL safety factor");
  generate->add_option("--snapshots", gen.snapshots, "Comma-separated snapshot times (default: 11 evenly spaced)");
  auto* gen_seed = generate->add_option("--seed", gen.seed, "Sampling seed (noise uses seed + 1)");
  generate->add_option("--noise-seed", gen.noise_seed, "Noise seed");
  generate->add_flag("--dump-fields", gen.dump_fields, "Write every snapshot as CSV and binary field");
  generate->add_flag("--binary", gen.binary, "Write presence labels from the radius table instead");
  generate->add_option("--times", gen.times, "Label times for --binary");
  generate->add_option("--radius-file", gen.radius_file, "t,radius CSV replacing the built-in table");
  generate->add_flag("--balanced", gen.balanced, "Half the labels inside, half outside (with --binary)");
  generate->add_option("--out", gen.out, "Output directory");

  ConfigArgs train_args;
  std::string train_out = "run";
  std::int64_t checkpoint_every = 0;
  std::string resume;
  bool quiet = false;
  auto* train_cmd = app.add_subcommand("train", "Train on a preset or config file");
  train_args.attach(train_cmd);
  train_cmd->add_option("--out", train_out, "Output directory");
  train_cmd->add_option("--checkpoint-every", checkpoint_every, "Save checkpoint.json every N epochs");
  train_cmd->add_option("--resume", resume, "Continue from a checkpoint");
  train_cmd->add_flag("--quiet", quiet, "No per-record progress output");

  ConfigArgs ms_args;
  std::string guesses = "1;2;3;4;5";
  std::string ms_out = "multistart";
  auto* ms_cmd = app.add_subcommand("multi-start", "Independent runs from several initial guesses");
  ms_args.attach(ms_cmd);
  ms_cmd->add_option("--guesses", guesses, "Guesses separated by ';', components by ',' (e.g. \"1;2;3\" or \"1,1;2,1\")");
  ms_cmd->add_option("--out", ms_out, "Output directory");

  ConfigArgs ns_args;
  std::string pairs;
  std::string ns_out = "noise";
  auto* ns_cmd = app.add_subcommand("noise-sweep", "Synthetic runs across (eps, sigma) noise levels");
  ns_args.attach(ns_cmd);
  ns_cmd->add_option("--pairs", pairs, "eps:sigma pairs, e.g. 0.5:0.2,0.5:0.5,0.5:1")->required();
  ns_cmd->add_option("--out", ns_out, "Output directory");

  PredictArgs pa;
  std::uint64_t predict_seed = 0;
  auto* predict = app.add_subcommand("predict", "Forward radii from recovered parameters");
  predict->add_option("--final", pa.final_json, "final.json written by train");
  predict->add_option("--v", pa.v, "Constant proliferation rate");
  predict->add_option("--a", pa.a, "Initial plateau (with --v)");
  predict->add_option("--v1", pa.v1, "Spatial rate coefficient v1");
  predict->add_option("--v2", pa.v2, "Spatial rate coefficient v2");
  predict->add_option("--times", pa.times, "Comma-separated times (default: the radius table times)");
  predict->add_option("--nx", pa.nx, "Grid nodes per direction");
  predict->add_option("--cfl", pa.cfl, "CFL safety factor");
  predict->add_option("--threshold", pa.threshold, "Density threshold of the tumour boundary");
  predict->add_option("--out", pa.out, "Also write the table to this CSV");
  predict->add_option("--seed", predict_seed, "Accepted for uniformity; prediction is deterministic");

  std::string field_path;
  double threshold = 0.1;
  bool contour = false;
  std::uint64_t radius_seed = 0;
  auto* radius = app.add_subcommand("radius", "Threshold radius of a dumped density field");
  radius->add_option("--field", field_path, "Binary field written by generate --dump-fields")->required();
  radius->add_option("--threshold", threshold, "Density threshold");
  radius->add_flag("--contour", contour, "Report min/mean/max over many rays");
  radius->add_option("--seed", radius_seed, "Accepted for uniformity; extraction is deterministic");

  std::uint64_t validate_seed = 1;
  auto* validate = app.add_subcommand("validate", "Run the invariant self-checks");
  validate->add_option("--seed", validate_seed, "Seed for the randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) {
      if (gen_seed->count() > 0) gen.noise_seed = gen.seed + 1;
      return cmd_generate(gen);
    }
    if (*train_cmd) return cmd_train(train_args, train_out, checkpoint_every, resume, quiet);
    if (*ms_cmd) return cmd_multi_start(ms_args, guesses, ms_out);
    if (*ns_cmd) return cmd_noise_sweep(ns_args, pairs, ns_out);
    if (*predict) return cmd_predict(pa);
    if (*radius) return cmd_radius(field_path, threshold, contour);
    if (*validate) return cmd_validate(validate_seed);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
