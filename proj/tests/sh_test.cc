#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "gtest/gtest.h"
#include "gtvv/dictionary.h"
#include "gtvv/errors.h"
#include "gtvv/sh.h"
#include "oracles.h"

namespace gtvv {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(ShEvalTest, FrontDirectionOrderOne) {
  const ShVector y = ShEval(Direction(0.0, 0.0), 1);
  ASSERT_EQ(y.coeffs.size(), 4);
  EXPECT_NEAR(y.coeffs[0], 1.0, 1e-15);
  EXPECT_NEAR(y.coeffs[1], 0.0, 1e-15);
  EXPECT_NEAR(y.coeffs[2], 0.0, 1e-15);
  EXPECT_NEAR(y.coeffs[3], 1.0, 1e-15);
}

TEST(ShEvalTest, LeftDirectionOrderOne) {
  const ShVector y = ShEval(Direction(kPi / 2, 0.0), 1);
  EXPECT_NEAR(y.coeffs[0], 1.0, 1e-15);
  EXPECT_NEAR(y.coeffs[1], 1.0, 1e-15);
  EXPECT_NEAR(y.coeffs[2], 0.0, 1e-15);
  EXPECT_NEAR(y.coeffs[3], 0.0, 1e-15);
}

TEST(ShEvalTest, MatchesLegendreOracleAtOrderFour) {
  const ShVector y = ShEval(Direction(0.7, -0.3), 4);
  const Eigen::VectorXd expected = testing::ShOracle(0.7, -0.3, 4);
  ASSERT_EQ(y.coeffs.size(), 25);
  for (int i = 0; i < 25; ++i) EXPECT_NEAR(y.coeffs[i], expected[i], 1e-12) << "acn " << i;
}

TEST(ShEvalTest, MatchesOracleUpToOrderEight) {
  testing::Gen gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto [az, el] = gen.SphereAngles();
    const Eigen::VectorXd expected = testing::ShOracle(az, el, kMaxShOrder);
    const ShVector y = ShEval(Direction(az, el), kMaxShOrder);
    EXPECT_LT((y.coeffs - expected).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(ShEvalTest, RejectsOrderOutOfRange) {
  EXPECT_THROW(ShEval(Direction(), -1), InvalidArgument);
  EXPECT_THROW(ShEval(Direction(), 9), InvalidArgument);
}

TEST(ShEvalTest, PoleIsWellDefined) {
  const ShVector y = ShEval(Direction(1.234, kPi / 2), 3);
  const Eigen::VectorXd expected = testing::ShOracle(0.0, kPi / 2, 3);
  EXPECT_LT((y.coeffs - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DirectionTest, NormalizesRanges) {
  const Direction d(3 * kPi, 0.1);
  EXPECT_NEAR(d.azimuth(), kPi, 1e-12);
  const Direction e(-kPi, 0.0);
  EXPECT_NEAR(e.azimuth(), kPi, 1e-12);
  // Elevation past the pole flips the azimuth.
  const Direction f(0.0, kPi / 2 + 0.2);
  EXPECT_NEAR(f.elevation(), kPi / 2 - 0.2, 1e-12);
  EXPECT_NEAR(std::abs(f.azimuth()), kPi, 1e-12);
}

TEST(DirectionTest, RejectsNonFinite) {
  EXPECT_THROW(Direction(std::nan(""), 0.0), InvalidArgument);
  EXPECT_THROW(Direction(0.0, INFINITY), InvalidArgument);
}

TEST(DirectionTest, DegreesRoundTrip) {
  const Direction d = Direction::FromDegrees(-135.0, 20.0);
  EXPECT_NEAR(d.azimuth_deg(), -135.0, 1e-12);
  EXPECT_NEAR(d.elevation_deg(), 20.0, 1e-12);
}

TEST(AngularDistanceTest, QuarterTurn) {
  EXPECT_NEAR(AngularDistance(Direction(0, 0), Direction(kPi / 2, 0)), kPi / 2, 1e-15);
}

TEST(AngularDistanceTest, SelfIsZero) {
  const Direction a(0.4, -0.9);
  EXPECT_EQ(AngularDistance(a, a), 0.0);
}

TEST(AngularDistanceTest, MatchesCartesianOracle) {
  EXPECT_NEAR(AngularDistance(Direction(0.3, 0.2), Direction(-0.4, -0.1)),
              testing::AngleOracle(0.3, 0.2, -0.4, -0.1), 1e-12);
}

TEST(AngularDistanceTest, SymmetricAndAccurateNearZero) {
  const Direction a(1.0, 0.5);
  const Direction b(1.0 + 1e-9, 0.5);
  EXPECT_EQ(AngularDistance(a, b), AngularDistance(b, a));
  EXPECT_NEAR(AngularDistance(a, b), 1e-9 * std::cos(0.5), 1e-15);
}

TEST(ReferenceBeamTest, OrderZeroIsUnity) {
  const BeamWeights w = MakeReferenceBeam(Direction(0.3, 0.4), 0);
  ASSERT_EQ(w.weights.size(), 1);
  EXPECT_DOUBLE_EQ(w.weights[0], 1.0);
}

TEST(ReferenceBeamTest, FrontOrderOne) {
  const BeamWeights w = MakeReferenceBeam(Direction(0, 0), 1);
  EXPECT_NEAR(w.weights[0], 0.5, 1e-15);
  EXPECT_NEAR(w.weights[1], 0.0, 1e-15);
  EXPECT_NEAR(w.weights[2], 0.0, 1e-15);
  EXPECT_NEAR(w.weights[3], 0.5, 1e-15);
  EXPECT_NEAR(w.Gain(Direction(0, 0)), 1.0, 1e-15);
}

TEST(ReferenceBeamTest, UnitGainTowardSteering) {
  const Direction d(0.7, -0.3);
  const BeamWeights w = MakeReferenceBeam(d, 3);
  EXPECT_NEAR(w.weights.dot(ShEval(d, 3).coeffs), 1.0, 1e-12);
}

TEST(OmniBeamTest, Shapes) {
  const BeamWeights w1 = MakeOmniBeam(1);
  EXPECT_EQ(w1.weights, Eigen::Vector4d(1, 0, 0, 0));
  const BeamWeights w4 = MakeOmniBeam(4);
  ASSERT_EQ(w4.weights.size(), 25);
  EXPECT_EQ(w4.weights[0], 1.0);
  EXPECT_EQ(w4.weights.tail(24).cwiseAbs().sum(), 0.0);
  EXPECT_NEAR(w4.Gain(Direction(-2.0, 0.8)), 1.0, 1e-15);
}

TEST(DictionaryTest, DefaultGridSize) {
  const Dictionary dict = BuildDictionary(770, 4, GridScheme::kFibonacci);
  EXPECT_EQ(dict.size(), 770);
  EXPECT_EQ(dict.channels(), 25);
  for (int j = 0; j < dict.size(); ++j) EXPECT_GT(dict.atoms().col(j).norm(), 0.0);
}

TEST(DictionaryTest, FourPointsAreSpread) {
  const Dictionary dict = BuildDictionary(4, 1, GridScheme::kFibonacci);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const auto& da = dict.directions()[a];
      const auto& db = dict.directions()[b];
      EXPECT_GT(testing::AngleOracle(da.azimuth(), da.elevation(), db.azimuth(), db.elevation()),
                kPi / 3);
    }
  }
}

TEST(DictionaryTest, ColumnsAreHarmonics) {
  const Dictionary dict = BuildDictionary(50, 3, GridScheme::kFibonacci);
  for (int j = 0; j < dict.size(); ++j) {
    EXPECT_EQ(dict.atoms().col(j), ShEval(dict.directions()[j], 3).coeffs);
  }
}

TEST(DictionaryTest, ReadsDirectionFile) {
  const auto path = std::filesystem::temp_directory_path() / "gtvv_dirs_test.txt";
  {
    std::ofstream out(path);
    out << "# two rows\n0 0\n\n1.5708 0\n";
  }
  const Dictionary dict = BuildDictionary(0, 1, GridScheme::kFile, path.string());
  ASSERT_EQ(dict.size(), 2);
  EXPECT_EQ(dict.atoms().col(0), ShEval(Direction(0, 0), 1).coeffs);
  EXPECT_EQ(dict.atoms().col(1), ShEval(Direction(1.5708, 0), 1).coeffs);
  std::filesystem::remove(path);
}

TEST(DictionaryTest, RejectsMalformedFile) {
  const auto path = std::filesystem::temp_directory_path() / "gtvv_dirs_bad.txt";
  {
    std::ofstream out(path);
    out << "0 zero\n";
  }
  EXPECT_THROW(BuildDictionary(0, 1, GridScheme::kFile, path.string()), ConfigError);
  EXPECT_THROW(BuildDictionary(0, 1, GridScheme::kFile, "/nonexistent/dirs.txt"), ConfigError);
  std::filesystem::remove(path);
}

TEST(DictionaryTest, RejectsTooFewAtoms) {
  EXPECT_THROW(BuildDictionary(24, 4, GridScheme::kFibonacci), InvalidArgument);
}

TEST(DictionaryTest, RejectsNearDuplicates) {
  std::vector<Direction> dirs{Direction(0, 0), Direction(0.0005, 0)};
  EXPECT_THROW(Dictionary(dirs, 1), InvalidArgument);
}

TEST(DictionaryTest, NearestPicksClosestAtom) {
  const Dictionary dict = BuildDictionary(770, 1, GridScheme::kFibonacci);
  for (int j : {0, 17, 400, 769}) EXPECT_EQ(dict.Nearest(dict.directions()[j]), j);
}

}  // namespace
}  // namespace gtvv
