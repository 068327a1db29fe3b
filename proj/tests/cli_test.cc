#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"
#include "gtvv/room.h"
#include "gtvv/wav.h"

namespace {

namespace fs = std::filesystem;

int RunCli(const std::string& args) {
  const std::string cmd = std::string(GTVV_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gtvv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(CliTest, UnknownConfigKeyExitsTwo) {
  std::ofstream(P("bad.json")) << R"({"room": [5, 4, 2.8], "colour": "blue"})";
  EXPECT_EQ(RunCli("evaluate --config " + P("bad.json") + " --out " + P("out")), 2);
}

TEST_F(CliTest, OrderOutOfRangeExitsTwo) {
  EXPECT_EQ(RunCli("simulate --order 9 --out " + P("out")), 2);
}

TEST_F(CliTest, MissingSubcommandExitsTwo) { EXPECT_EQ(RunCli(""), 2); }

TEST_F(CliTest, EmptyMatrixTracesAreHeaderOnly) {
  std::ofstream(P("empty.csv")) << "time_s\n";
  ASSERT_EQ(RunCli("traces --input " + P("empty.csv") + " --out " + P("out")), 0);
  std::ifstream in(P("out/traces.csv"));
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 1);
}

TEST_F(CliTest, StationaryInputExitsThree) {
  gtvv::AmbisonicSignal sig;
  sig.fs = 16000;
  sig.channels = gtvv::SignalMatrix::Zero(4, 60000);
  for (long n = 0; n < 60000; ++n) {
    const double s = std::cos(2 * 3.14159265358979 * 64 * n / 1024.0);
    sig.channels(0, n) = s;
    sig.channels(3, n) = s;
  }
  gtvv::WriteFloatWav(sig, P("tone.wav"));
  EXPECT_EQ(RunCli("estimate --method htdvv --input " + P("tone.wav") + " --out " + P("out")), 3);
}

TEST_F(CliTest, SimulateEstimateInferChain) {
  ASSERT_EQ(RunCli("simulate --order 2 --out " + P("run")), 0);
  EXPECT_TRUE(fs::exists(P("run/scene.json")));
  ASSERT_TRUE(fs::exists(P("run/signal.wav")));
  ASSERT_EQ(RunCli("estimate --method gtvv --input " + P("run/signal.wav") + " --out " + P("run")), 0);
  EXPECT_TRUE(fs::exists(P("run/traces_gtvv.csv")));
  ASSERT_EQ(RunCli("infer --input " + P("run/gtvv.csv") + " --out " + P("run")), 0);
  EXPECT_TRUE(fs::exists(P("run/estimate.json")));
  ASSERT_EQ(RunCli("estimate --method srp --input " + P("run/signal.wav") + " --out " + P("run")), 0);
  EXPECT_TRUE(fs::exists(P("run/srp_map.csv")));
}

TEST_F(CliTest, EvaluateWritesOutputs) {
  std::ofstream(P("cfg.json")) << R"({"rt60": [0.3], "num_scenes": 1, "orders": [1]})";
  ASSERT_EQ(RunCli("evaluate --config " + P("cfg.json") + " --out " + P("out")), 0);
  EXPECT_TRUE(fs::exists(P("out/results.csv")));
  EXPECT_TRUE(fs::exists(P("out/results.json")));
  EXPECT_TRUE(fs::exists(P("out/runs/gtvv_L1_rt0_s0.json")));
}

}  // namespace
