#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/run_context.hpp"
#include "json.hpp"
#include "owg/channel.hpp"
#include "owg/config_io.hpp"
#include "owg/waveform_io.hpp"

namespace owg::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("owg_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run_args(std::vector<std::string> args, const fs::path& out) {
    args.insert(args.begin(), {"owg", "--out-dir", out.string()});
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, PulseWritesEnvelopeAndManifest) {
  ASSERT_EQ(run_args({"pulse", "--kind", "gaussian", "--duration", "1e-6", "--fwhm", "3e-7"}, dir_), kExitOk);
  ASSERT_TRUE(fs::exists(dir_ / "pulse.csv"));
  ASSERT_TRUE(fs::exists(dir_ / "pulse.json"));
  const auto csv = load_envelope(dir_ / "pulse.csv");
  const auto json = load_envelope(dir_ / "pulse.json");
  EXPECT_EQ(csv.samples(), json.samples());
  const auto m = nlohmann::json::parse(read_text(dir_ / "manifest.json"));
  EXPECT_EQ(m.at("command"), "pulse");
  bool found = false;
  for (const auto& o : m.at("outputs")) {
    if (fs::path(o.at("path").get<std::string>()).filename() == "pulse.csv") {
      EXPECT_EQ(o.at("sha256"), sha256_hex(read_text(dir_ / "pulse.csv")));
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(m.contains("tool_version"));
  EXPECT_TRUE(m.contains("configuration"));
}

TEST_F(CliTest, UnknownFlagIsInvalidArguments) {
  EXPECT_EQ(run_args({"pulse", "--duration", "1e-6", "--bogus", "1"}, dir_), kExitInvalidArgs);
  EXPECT_EQ(run_args({"frobnicate"}, dir_), kExitInvalidArgs);
  EXPECT_EQ(run_args({}, dir_), kExitInvalidArgs);
}

TEST_F(CliTest, BadValuesAreInvalidArguments) {
  EXPECT_EQ(run_args({"pulse", "--duration", "-1"}, dir_), kExitInvalidArgs);
  EXPECT_EQ(run_args({"pulse", "--duration", "abc"}, dir_), kExitInvalidArgs);
  EXPECT_EQ(run_args({"demod", "--trace", path("absent.csv")}, dir_), kExitInvalidArgs);
  write_text_atomic(dir_ / "garbage.csv", "t_s,v\n0,x\n");
  EXPECT_EQ(run_args({"demod", "--trace", path("garbage.csv")}, dir_), kExitInvalidArgs);
}

TEST_F(CliTest, SimulateDemodRoundTrip) {
  ASSERT_EQ(run_args({"pulse", "--kind", "gaussian", "--duration", "1e-6", "--fwhm", "3e-7"}, dir_), kExitOk);
  const auto sim = dir_ / "sim";
  ASSERT_EQ(run_args({"simulate", "--input", path("pulse.csv"), "--preset", "identity", "--beat"}, sim), kExitOk);
  ASSERT_TRUE(fs::exists(sim / "beat.csv"));
  const auto dem = dir_ / "dem";
  ASSERT_EQ(run_args({"demod", "--trace", (sim / "beat.csv").string(), "--beat-hz", "2e8", "--cutoff-hz", "2e7",
                      "--order", "4"},
                     dem),
            kExitOk);
  const auto env = load_envelope(dem / "envelope.csv");
  EXPECT_GT(env.size(), 100u);
  const auto m = nlohmann::json::parse(read_text(dem / "manifest.json"));
  ASSERT_EQ(m.at("inputs").size(), 1u);
  EXPECT_EQ(m.at("inputs")[0].at("sha256"), sha256_hex(read_text(sim / "beat.csv")));
}

TEST_F(CliTest, EstimateWritesModelAndScores) {
  ASSERT_EQ(run_args({"pulse", "--kind", "gate-standin", "--duration", "5e-7"}, dir_), kExitOk);
  ASSERT_EQ(run_args({"simulate", "--input", path("pulse.csv"), "--preset", "distorting", "--noise", "0"}, dir_),
            kExitOk);
  const auto est = dir_ / "est";
  ASSERT_EQ(run_args({"estimate", "--input", path("pulse.csv"), "--output", path("output.csv"), "--memory", "16",
                      "--cv-folds", "4", "--lambda-grid", "0,1e-6,1e-2"},
                     est),
            kExitOk);
  const auto model = model_from_json(read_text(est / "model.json"));
  EXPECT_EQ(model.memory(), 16u);
  EXPECT_EQ(read_text(est / "scores.csv").rfind("lambda,mean_mse,fold_1,fold_2,fold_3,fold_4,selected\n", 0), 0u);
  EXPECT_EQ(run_args({"estimate", "--input", path("pulse.csv"), "--output", path("output.csv"), "--lambda", "1",
                      "--cv-folds", "3"},
                     est),
            kExitInvalidArgs);
}

TEST_F(CliTest, LoopConvergesOnGaussian) {
  ASSERT_EQ(run_args({"pulse", "--kind", "gaussian", "--duration", "1e-6", "--fwhm", "3e-7", "--name", "gauss_1us"},
                     dir_),
            kExitOk);
  write_text_atomic(dir_ / "chan.json", channel_to_json(ChannelConfig::distorting()));
  const auto out = dir_ / "loop";
  ASSERT_EQ(run_args({"loop", "--target", path("gauss_1us.csv"), "--channel", path("chan.json"), "--method",
                      "tf-free", "--max-iters", "10"},
                     out),
            kExitOk);
  const auto report = nlohmann::json::parse(read_text(out / "report.json"));
  EXPECT_TRUE(report.at("converged").get<bool>());
  EXPECT_TRUE(fs::exists(out / "convergence.csv"));
  EXPECT_TRUE(fs::exists(out / "iter_001_input.csv"));
  EXPECT_TRUE(fs::exists(out / "iter_001_output.csv"));
}

TEST_F(CliTest, LoopNonConvergenceExitsThree) {
  ASSERT_EQ(run_args({"pulse", "--kind", "gate-standin", "--duration", "1.8e-7"}, dir_), kExitOk);
  EXPECT_EQ(run_args({"loop", "--target", path("pulse.csv"), "--preset", "distorting", "--max-iters", "1"},
                     dir_ / "loop"),
            kExitNonConvergence);
  EXPECT_TRUE(fs::exists(dir_ / "loop" / "report.json"));
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  ASSERT_EQ(run_args({"pulse", "--kind", "gate-standin", "--duration", "1.8e-7"}, dir_), kExitOk);
  const std::vector<std::string> args{"loop", "--target", path("pulse.csv"), "--preset", "distorting",
                                      "--method", "tf", "--max-iters", "3", "--seed", "5"};
  run_args(args, dir_ / "a");
  run_args(args, dir_ / "b");
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    const auto name = e.path().filename();
    if (name == "manifest.json") continue;
    EXPECT_EQ(read_text(e.path()), read_text(dir_ / "b" / name)) << name;
    ++compared;
  }
  EXPECT_GE(compared, 8u);
}

TEST_F(CliTest, OpticsSubcommands) {
  EXPECT_EQ(run_args({"optics", "sensitivity"}, dir_), kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "sensitivity.csv"));
  EXPECT_EQ(run_args({"optics", "aperture", "--drift", "compact"}, dir_), kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "aperture.csv"));
  EXPECT_EQ(run_args({"optics", "waist-sweep", "--points", "5"}, dir_), kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "waist_sweep.csv"));
  EXPECT_EQ(run_args({"optics", "aperture", "--drift", "sideways"}, dir_), kExitInvalidArgs);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const auto env_dir = dir_ / "from_env";
  ::setenv("OWG_OUTPUT_DIR", env_dir.c_str(), 1);
  EXPECT_EQ(resolve_out_dir(""), env_dir);
  EXPECT_EQ(resolve_out_dir("explicit"), fs::path("explicit"));
  ::unsetenv("OWG_OUTPUT_DIR");
  EXPECT_EQ(resolve_out_dir(""), fs::path("."));
}

}  // namespace
}  // namespace owg::cli
