#ifndef GTVV_ROOM_H_
#define GTVV_ROOM_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gtvv/sh.h"

namespace gtvv {

inline constexpr double kSpeedOfSound = 343.0;  // m/s

using SignalMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One plane wave reaching the microphone: absolute time of arrival and
// frequency-independent linear gain.
struct Wavefront {
  Direction direction;
  double toa = 0.0;  // seconds
  double gain = 0.0;
  int reflection_order = 0;
};

// Image-source ground truth. wavefronts[0] is the direct path; the list is
// sorted by time of arrival.
struct GroundTruthScene {
  std::vector<Wavefront> wavefronts;
  std::vector<bool> first_order_flags;
  Eigen::Vector3d room = Eigen::Vector3d::Zero();
  Eigen::Vector3d src = Eigen::Vector3d::Zero();
  Eigen::Vector3d mic = Eigen::Vector3d::Zero();
  double rt60 = 0.0;
  double fs = 0.0;
  double reflection_coefficient = 0.0;

  const Wavefront& direct() const { return wavefronts.front(); }
};

// ACN/SN3D multichannel signal, one row per channel.
struct AmbisonicSignal {
  double fs = 0.0;
  SignalMatrix channels;

  int order() const;
  int num_channels() const { return static_cast<int>(channels.rows()); }
  long num_samples() const { return static_cast<long>(channels.cols()); }
  // First NumChannels(order) rows; requires order <= this->order().
  AmbisonicSignal Truncated(int order) const;
};

// Uniform pressure reflection coefficient sqrt(1 - alpha) with the
// absorption alpha from Sabine's formula. Throws if rt60 is too short for
// the room.
double SabineReflectionCoefficient(const Eigen::Vector3d& room, double rt60);

GroundTruthScene ImageSourceScene(const Eigen::Vector3d& room,
                                  const Eigen::Vector3d& src,
                                  const Eigen::Vector3d& mic, double rt60,
                                  int max_order, double fs);

// Renders every wavefront as gain * y(direction) applied to a fractionally
// delayed copy of `source`.
AmbisonicSignal EncodeScene(const GroundTruthScene& scene,
                            std::span<const double> source, int order);

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

// Adds i.i.d. white Gaussian noise of equal variance to every channel, with
// omni power / noise variance = 10^(snr_db/10). snr_db == kNoNoise copies.
AmbisonicSignal AddNoise(const AmbisonicSignal& sig, double snr_db,
                         std::uint64_t seed);

// Zero-mean amplitude-modulated Gaussian noise: bursts of 0.2-0.5 s at
// random levels separated by exact-zero gaps of 0.05-0.2 s.
std::vector<double> MakeBurstSource(double duration, double fs,
                                    std::uint64_t seed);

}  // namespace gtvv

#endif  // GTVV_ROOM_H_
