#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tumorpinn/errors.hpp"
#include "tumorpinn/trainer.hpp"

using namespace tumorpinn;

namespace {

TrainConfig tiny(const std::string& name, std::int64_t epochs) {
  TrainConfig c = preset(name);
  c.epochs = epochs;
  c.arch.widths = {3, 10, 10, 1};
  c.sampling.n_interior = 60;
  c.sampling.n_per_edge = 5;
  c.sampling.n_initial = 20;
  c.sampling.n_data = 30;
  c.solver_nx = 41;
  c.log_every = 5;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST(Train, ZeroEpochsKeepsInitialState) {
  const auto c = tiny("real-bce", 0);
  const auto r = train(c);
  EXPECT_EQ(r.epochs_run, 0);
  EXPECT_EQ(r.phys.values, std::vector<double>{2.0});
  EXPECT_EQ(r.net.flatten(), init_xavier(c.arch, c.init_seed).flatten());
  ASSERT_EQ(r.trajectory.size(), 1u);
  EXPECT_EQ(r.trajectory[0].epoch, 0);
}

TEST(Train, TrajectoryLayout) {
  const auto c = tiny("synthetic-v2.0", 12);
  const auto r = train(c);
  ASSERT_EQ(r.trajectory.size(), 4u);
  EXPECT_EQ(r.trajectory[0].epoch, 0);
  EXPECT_EQ(r.trajectory[1].epoch, 5);
  EXPECT_EQ(r.trajectory[2].epoch, 10);
  EXPECT_EQ(r.trajectory[3].epoch, 12);
  for (const auto& rec : r.trajectory) {
    EXPECT_NEAR(rec.loss.total, 10 * rec.loss.pde + rec.loss.ic + rec.loss.bc + 100 * rec.loss.data,
                1e-12 * rec.loss.total);
    EXPECT_EQ(rec.lr, 1e-3);
  }
  EXPECT_NE(r.phys.values[0], 1.0);
}

TEST(Train, Deterministic) {
  const auto c = tiny("spatial", 10);
  const auto a = train(c);
  const auto b = train(c);
  EXPECT_EQ(a.net.flatten(), b.net.flatten());
  EXPECT_EQ(a.phys.values, b.phys.values);
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) EXPECT_EQ(a.trajectory[i].loss.total, b.trajectory[i].loss.total);
}

TEST(Train, ResumeMatchesUninterrupted) {
  for (bool resample : {false, true}) {
    auto c = tiny("v-and-a", 20);
    c.resample_each_epoch = resample;
    const auto full = train(c);
    auto first = c;
    first.epochs = 10;
    const auto part = train(first);
    const Checkpoint ck = checkpoint_from_string(checkpoint_to_string(part.checkpoint(first)));
    TrainOptions opt;
    opt.resume_from = &ck;
    const auto rest = train(c, opt);
    EXPECT_EQ(rest.net.flatten(), full.net.flatten());
    EXPECT_EQ(rest.phys.values, full.phys.values);
    EXPECT_EQ(rest.trajectory.back().loss.total, full.trajectory.back().loss.total);
  }
}

TEST(Train, ResumeRejectsMismatchedCheckpoint) {
  const auto part = train(tiny("real-bce", 2));
  const Checkpoint ck = part.checkpoint(tiny("real-bce", 2));
  TrainOptions opt;
  opt.resume_from = &ck;
  EXPECT_THROW(train(tiny("spatial", 4), opt), ConfigError);
}

TEST(Train, MissingDataFileFailsEarly) {
  auto c = tiny("real-bce", 5);
  c.data_file = "/nonexistent/obs.csv";
  EXPECT_THROW(train(c), IoError);
}

TEST(Train, DataFileKindMustMatchMode) {
  const auto dir = scratch_dir("tumorpinn_train_data");
  const std::vector<DataPoint> pts{{{0.1, 0.0, 0.0}, 0.3}};
  write_observations_csv(dir / "d.csv", pts, DataKind::kDensity, "");
  auto c = tiny("real-bce", 1);
  c.data_file = (dir / "d.csv").string();
  EXPECT_THROW(train(c), DataError);
  std::filesystem::remove_all(dir);
}

TEST(Train, NonFiniteLossSavesLastGoodState) {
  const auto dir = scratch_dir("tumorpinn_nan");
  auto c = tiny("real-bce", 50);
  c.optim.base_lr = 1e6;
  c.weights = {1e300, 1.0, 1.0, 1.0};
  TrainOptions opt;
  opt.checkpoint_path = dir / "ck.json";
  try {
    train(c, opt);
    ADD_FAILURE() << "training with an absurd learning rate should blow up";
  } catch (const NumericalError& e) {
    EXPECT_TRUE(std::filesystem::exists(opt.checkpoint_path)) << e.what();
    const auto ck = load_checkpoint(opt.checkpoint_path);
    for (double v : ck.net.flatten()) EXPECT_TRUE(std::isfinite(v));
  }
  std::filesystem::remove_all(dir);
}

TEST(MultiStart, SingleGuessEqualsTrain) {
  const auto c = tiny("real-bce", 6);
  const std::vector<std::vector<double>> guesses{{3.0}};
  const auto ms = multi_start(c, guesses);
  auto c3 = c;
  c3.initial_guess = {3.0};
  EXPECT_EQ(ms.finals[0].values, train(c3).phys.values);
  EXPECT_EQ(ms.spread, 0.0);
  EXPECT_THROW(multi_start(c, std::span<const std::vector<double>>{}), ConfigError);
}

TEST(NoiseSweep, ErrorsAndCurves) {
  const auto c = tiny("noise-e0.5-s0.2", 6);
  const std::vector<std::pair<double, double>> pairs{{0.0, 0.0}, {0.5, 0.2}};
  const auto out = noise_sweep(c, pairs);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].error_curve.size(), out[0].result.trajectory.size());
  EXPECT_NEAR(out[1].final_error, std::abs(out[1].result.phys.values[0] - 2.1) / 2.1, 1e-15);
  EXPECT_THROW(noise_sweep(c, std::span<const std::pair<double, double>>{}), ConfigError);
}

TEST(PredictForward, NoGrowthShortTime) {
  PhysicalParams p;
  p.values = {0.0};
  const std::vector<double> times{1e-4};
  const auto r = predict_forward(p, times);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].radius, 0.5, 0.03);
}

TEST(PredictForward, PaperRadiusConstantV) {
  PhysicalParams p;
  p.values = {3.1264};
  const std::vector<double> times{1.0, 0.875};
  const auto r = predict_forward(p, times);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].t, 1.0);
  EXPECT_LT(relative_error(r[0].radius, 2.4426), 0.03) << r[0].radius;
  EXPECT_LT(relative_error(r[1].radius, 2.2308), 0.03) << r[1].radius;
}

TEST(PredictForward, PaperRadiusSpatial) {
  PhysicalParams p;
  p.mode = ParamMode::kSpatialV1V2;
  p.values = {7.0968, -5.9086};
  const std::vector<double> times{1.0};
  const auto r = predict_forward(p, times);
  EXPECT_LT(relative_error(r[0].radius, 2.3956), 0.03) << r[0].radius;
}

TEST(Artifacts, TrajectoryAndFinalJson) {
  const auto dir = scratch_dir("tumorpinn_artifacts");
  const auto c = tiny("spatial", 6);
  const auto r = train(c);
  write_trajectory_csv(dir / "trajectory.csv", r.trajectory, r.phys.names(), metadata_header(c.canonical()));
  write_final_json(dir / "final.json", c, r);
  const std::string csv = slurp(dir / "trajectory.csv");
  EXPECT_EQ(csv.rfind("# tumorpinn", 0), 0u);
  EXPECT_NE(csv.find("epoch,loss_pde,loss_ic,loss_bc,loss_data,loss_total,v1,v2,lr"), std::string::npos);
  const std::string js = slurp(dir / "final.json");
  EXPECT_NE(js.find("\"config_hash\""), std::string::npos);
  EXPECT_NE(js.find("\"v2\""), std::string::npos);
  std::filesystem::remove_all(dir);
}
