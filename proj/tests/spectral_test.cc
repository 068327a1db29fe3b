#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "gtest/gtest.h"
#include "gtvv/errors.h"
#include "gtvv/experiment.h"
#include "gtvv/spectral.h"
#include "oracles.h"

namespace gtvv {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFs = 16000.0;

AmbisonicSignal Mono(std::vector<double> x, int channels = 1) {
  AmbisonicSignal s;
  s.fs = kFs;
  s.channels = SignalMatrix::Zero(channels, x.size());
  for (int c = 0; c < channels; ++c) {
    for (size_t n = 0; n < x.size(); ++n) s.channels(c, n) = x[n] * (c + 1);
  }
  return s;
}

TEST(StftTest, DefaultFraming) {
  const SpectrumTensor spec = Stft(Mono(std::vector<double>(4096, 0.0)), 1024, 256);
  EXPECT_EQ(spec.bins(), 513);
  EXPECT_EQ(spec.frames(), (4096 - 1024) / 256 + 1);
  EXPECT_EQ(spec.win_len(), 1024);
  EXPECT_EQ(spec.hop(), 256);
}

TEST(StftTest, CosineAtBinCenter) {
  const int t = 1024, bin = 100;
  const double amp = 0.7;
  std::vector<double> x(4 * t);
  for (size_t n = 0; n < x.size(); ++n) x[n] = amp * std::cos(2 * kPi * bin * n / t);
  const SpectrumTensor spec = Stft(Mono(x), t, 256);
  const double expected = 0.54 * amp * t / 2;
  for (int u = 0; u < spec.frames(); ++u) {
    int best = 0;
    for (int f = 1; f < spec.bins(); ++f) {
      if (std::abs(spec.at(u, f, 0)) > std::abs(spec.at(u, best, 0))) best = f;
    }
    EXPECT_EQ(best, bin);
    EXPECT_NEAR(std::abs(spec.at(u, bin, 0)), expected, 0.01 * expected);
  }
}

TEST(StftTest, ZeroSignalGivesZeroTensor) {
  const SpectrumTensor spec = Stft(Mono(std::vector<double>(2048, 0.0), 4), 512, 128);
  for (int u = 0; u < spec.frames(); ++u) {
    for (int f = 0; f < spec.bins(); ++f) {
      for (int c = 0; c < 4; ++c) EXPECT_EQ(spec.at(u, f, c), Complex(0.0, 0.0));
    }
  }
}

TEST(StftTest, RejectsBadFraming) {
  const AmbisonicSignal s = Mono(std::vector<double>(2048, 1.0));
  EXPECT_THROW(Stft(s, 1000, 250), InvalidArgument);
  EXPECT_THROW(Stft(s, 1024, 300), InvalidArgument);
  EXPECT_THROW(Stft(Mono(std::vector<double>(100, 1.0)), 1024, 256), InvalidArgument);
}

TEST(StftTest, FrameStartsAtHopMultiple) {
  std::vector<double> x(3000, 0.0);
  x[256 * 3 + 10] = 1.0;  // inside frames 0..3, at offset 10 of frame 3
  const SpectrumTensor spec = Stft(Mono(x), 1024, 256);
  const std::vector<double> w = HammingWindow(1024);
  EXPECT_NEAR(std::abs(spec.at(3, 0, 0)), w[10], 1e-14);
  EXPECT_NEAR(std::abs(spec.at(0, 0, 0)), w[256 * 3 + 10], 1e-14);
}

TEST(HammingTest, Periodic) {
  const std::vector<double> w = HammingWindow(8);
  EXPECT_NEAR(w[0], 0.08, 1e-15);
  EXPECT_NEAR(w[4], 1.0, 1e-15);
  EXPECT_NEAR(w[1], w[7], 1e-15);
}

TEST(GfvvToGtvvTest, ConstantGivesDeltaAtZero) {
  const Eigen::VectorXd y = ShEval(Direction(0.5, 0.1), 2).coeffs;
  Eigen::MatrixXcd vf(9, 513);
  for (int f = 0; f < 513; ++f) vf.col(f) = y.cast<Complex>();
  const GtvvMatrix v = GfvvToGtvv(vf, 1024, kFs);
  EXPECT_EQ(v.zero_column(), 512);
  EXPECT_LT((v.data.col(512) - y).cwiseAbs().maxCoeff(), 1e-12);
  double off = 0.0;
  for (int q = 0; q < 1024; ++q) {
    if (q != 512) off = std::max(off, v.data.col(q).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(off, 1e-12);
}

TEST(GfvvToGtvvTest, ShiftTheorem) {
  Eigen::MatrixXcd vf(1, 513);
  for (int f = 0; f < 513; ++f) vf(0, f) = std::polar(1.0, -2 * kPi * f * 32.0 / 1024);
  const GtvvMatrix v = GfvvToGtvv(vf, 1024, kFs);
  Eigen::Index peak;
  v.data.row(0).cwiseAbs().maxCoeff(&peak);
  EXPECT_DOUBLE_EQ(v.time_axis[peak], 0.002);
  EXPECT_NEAR(v.data(0, peak), 1.0, 1e-12);
}

TEST(GfvvToGtvvTest, RoundTrip) {
  testing::Gen gen(21);
  Eigen::MatrixXcd vf(4, 129);
  for (int c = 0; c < 4; ++c) {
    for (int f = 0; f < 129; ++f) vf(c, f) = Complex(gen.Normal(), gen.Normal());
    vf(c, 0) = vf(c, 0).real();
    vf(c, 128) = vf(c, 128).real();
  }
  const GtvvMatrix v = GfvvToGtvv(vf, 256, kFs);
  EXPECT_LT((GtvvToGfvv(v) - vf).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GfvvToGtvvTest, MatchesDenseInverseDft) {
  testing::Gen gen(23);
  Eigen::MatrixXcd vf(2, 33);
  for (int c = 0; c < 2; ++c) {
    for (int f = 0; f < 33; ++f) vf(c, f) = Complex(gen.Normal(), gen.Normal());
    vf(c, 0) = vf(c, 0).real();
    vf(c, 32) = vf(c, 32).real();
  }
  const GtvvMatrix v = GfvvToGtvv(vf, 64, kFs);
  const Eigen::MatrixXd oracle = testing::DenseInverseDft(vf, 64, -32, 64);
  EXPECT_LT((v.data - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GfvvToGtvvTest, ImaginaryDcIsInconsistent) {
  Eigen::MatrixXcd vf = Eigen::MatrixXcd::Ones(1, 9);
  vf(0, 0) = Complex(1.0, 0.5);
  EXPECT_THROW(GfvvToGtvv(vf, 16, kFs), InconsistentSpectrumError);
  vf(0, 0) = Complex(1.0, 1e-12);
  EXPECT_NO_THROW(GfvvToGtvv(vf, 16, kFs));
}

TEST(GfvvToGtvvTest, ShapeErrors) {
  EXPECT_THROW(GfvvToGtvv(Eigen::MatrixXcd::Ones(1, 10), 16, kFs), InvalidArgument);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Ones(1, 9);
  bad(0, 3) = Complex(NAN, 0);
  EXPECT_THROW(GfvvToGtvv(bad, 16, kFs), InvalidArgument);
}

TEST(NegativeLagRatioTest, CausalIsZero) {
  GtvvMatrix v;
  v.fs = kFs;
  v.data = Eigen::MatrixXd::Zero(2, 8);
  v.data(0, 4) = 1.0;
  v.data(1, 6) = 1.0;
  EXPECT_EQ(NegativeLagRatio(v), 0.0);
  v.data(1, 1) = 2.0;
  EXPECT_NEAR(NegativeLagRatio(v), 2.0 / std::sqrt(2.0), 1e-15);
}

TEST(TracesTest, EmptyMatrixWritesHeaderOnly) {
  const auto path = (std::filesystem::temp_directory_path() / "gtvv_empty_traces.csv").string();
  DumpTraces(GtvvMatrix{}, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1);
  std::filesystem::remove(path);
}

TEST(TracesTest, GtvvCsvRoundTrip) {
  testing::Gen gen(2);
  Eigen::MatrixXcd vf(4, 33);
  for (int c = 0; c < 4; ++c) {
    for (int f = 0; f < 33; ++f) vf(c, f) = Complex(gen.Normal(), f == 0 || f == 32 ? 0 : gen.Normal());
  }
  const GtvvMatrix v = GfvvToGtvv(vf, 64, kFs);
  const auto path = (std::filesystem::temp_directory_path() / "gtvv_matrix.csv").string();
  WriteGtvvCsv(v, path);
  const GtvvMatrix back = ReadGtvvCsv(path);
  EXPECT_EQ(back.data, v.data);
  EXPECT_EQ(back.time_axis, v.time_axis);
  EXPECT_NEAR(back.fs, kFs, 1e-6);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace gtvv
