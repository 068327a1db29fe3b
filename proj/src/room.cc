#include "gtvv/room.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gtvv/errors.h"
#include "gtvv/fractional_delay.h"

namespace gtvv {

int AmbisonicSignal::order() const {
  const int order = static_cast<int>(std::lround(std::sqrt(num_channels()))) - 1;
  return order;
}

AmbisonicSignal AmbisonicSignal::Truncated(int target_order) const {
  if (target_order < 0 || target_order > order()) {
    throw InvalidArgument("cannot truncate order " + std::to_string(order()) +
                          " signal to order " + std::to_string(target_order));
  }
  return {fs, channels.topRows(NumChannels(target_order))};
}

double SabineReflectionCoefficient(const Eigen::Vector3d& room, double rt60) {
  const double volume = room.prod();
  const double surface =
      2.0 * (room.x() * room.y() + room.x() * room.z() + room.y() * room.z());
  // 24 ln(10) / c
  const double sabine_constant = 24.0 * std::log(10.0) / kSpeedOfSound;
  const double alpha = sabine_constant * volume / (surface * rt60);
  if (alpha >= 1.0) {
    throw InvalidArgument("rt60 " + std::to_string(rt60) +
                          " s is too short for this room (absorption >= 1)");
  }
  return std::sqrt(1.0 - alpha);
}

GroundTruthScene ImageSourceScene(const Eigen::Vector3d& room,
                                  const Eigen::Vector3d& src,
                                  const Eigen::Vector3d& mic, double rt60,
                                  int max_order, double fs) {
  if ((room.array() <= 0.0).any()) {
    throw InvalidArgument("room dimensions must be positive");
  }
  auto inside = [&](const Eigen::Vector3d& p) {
    return (p.array() > 0.0).all() && (p.array() < room.array()).all();
  };
  if (!inside(src) || !inside(mic)) {
    throw InvalidArgument("source and microphone must lie strictly inside the room");
  }
  if ((src - mic).norm() == 0.0) {
    throw InvalidArgument("source and microphone coincide");
  }
  if (!(rt60 > 0.0)) throw InvalidArgument("rt60 must be positive");
  if (max_order < 0) throw InvalidArgument("max_order must be non-negative");
  if (!(fs > 0.0)) throw InvalidArgument("fs must be positive");

  GroundTruthScene scene;
  scene.room = room;
  scene.src = src;
  scene.mic = mic;
  scene.rt60 = rt60;
  scene.fs = fs;
  scene.reflection_coefficient = SabineReflectionCoefficient(room, rt60);
  const double beta = scene.reflection_coefficient;

  // Image position along one axis: (1 - 2p) s + 2 n L, reflecting
  // |n - p| + |n| times.
  for (int nx = -max_order; nx <= max_order; ++nx) {
    for (int ny = -max_order; ny <= max_order; ++ny) {
      for (int nz = -max_order; nz <= max_order; ++nz) {
        for (int p = 0; p < 8; ++p) {
          const Eigen::Vector3i n(nx, ny, nz);
          const Eigen::Vector3i parity(p & 1, (p >> 1) & 1, (p >> 2) & 1);
          int order = 0;
          Eigen::Vector3d image;
          for (int a = 0; a < 3; ++a) {
            order += std::abs(n[a] - parity[a]) + std::abs(n[a]);
            image[a] = (1 - 2 * parity[a]) * src[a] + 2.0 * n[a] * room[a];
          }
          if (order > max_order) continue;
          const Eigen::Vector3d offset = image - mic;
          const double distance = offset.norm();
          Wavefront wf;
          wf.direction = Direction::FromVector(offset);
          wf.toa = distance / kSpeedOfSound;
          wf.gain = std::pow(beta, order) / distance;
          wf.reflection_order = order;
          scene.wavefronts.push_back(wf);
        }
      }
    }
  }
  std::stable_sort(scene.wavefronts.begin(), scene.wavefronts.end(),
                   [](const Wavefront& a, const Wavefront& b) {
                     if (a.toa != b.toa) return a.toa < b.toa;
                     return a.reflection_order < b.reflection_order;
                   });
  scene.first_order_flags.reserve(scene.wavefronts.size());
  for (const Wavefront& wf : scene.wavefronts) {
    scene.first_order_flags.push_back(wf.reflection_order == 1);
  }
  return scene;
}

AmbisonicSignal EncodeScene(const GroundTruthScene& scene,
                            std::span<const double> source, int order) {
  if (source.empty()) throw InvalidArgument("empty source signal");
  if (scene.wavefronts.empty()) throw InvalidArgument("scene has no wavefronts");
  const int channels = NumChannels(order);
  const long n_src = static_cast<long>(source.size());
  const int n_waves = static_cast<int>(scene.wavefronts.size());

  std::vector<FractionalDelayKernel> kernels(n_waves);
  Eigen::MatrixXd patterns(channels, n_waves);
  long last_index = 0;
  for (int w = 0; w < n_waves; ++w) {
    const Wavefront& wf = scene.wavefronts[w];
    kernels[w] = MakeFractionalDelay(wf.toa * scene.fs);
    last_index = std::max(last_index,
                          kernels[w].first_index + kFractionalDelayTaps - 1);
    patterns.col(w) = wf.gain * ShEval(wf.direction, order).coeffs;
  }
  const long out_len = n_src + last_index;

  // Delayed copy of the source for every wavefront.
  SignalMatrix delayed = SignalMatrix::Zero(n_waves, out_len);
#pragma omp parallel for schedule(static)
  for (int w = 0; w < n_waves; ++w) {
    const FractionalDelayKernel& k = kernels[w];
    for (int tap = 0; tap < kFractionalDelayTaps; ++tap) {
      const double h = k.taps[tap];
      if (h == 0.0) continue;
      const long shift = k.first_index + tap;
      const long begin = std::max(0L, shift);
      const long end = std::min(out_len, n_src + shift);
      for (long t = begin; t < end; ++t) delayed(w, t) += h * source[t - shift];
    }
  }

  AmbisonicSignal out{scene.fs, SignalMatrix::Zero(channels, out_len)};
#pragma omp parallel for schedule(static)
  for (int c = 0; c < channels; ++c) {
    for (int w = 0; w < n_waves; ++w) {
      out.channels.row(c) += patterns(c, w) * delayed.row(w);
    }
  }
  return out;
}

AmbisonicSignal AddNoise(const AmbisonicSignal& sig, double snr_db,
                         std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0) return sig;
  if (!std::isfinite(snr_db)) throw InvalidArgument("snr_db must be finite or kNoNoise");
  if (sig.num_channels() == 0 || sig.num_samples() == 0) {
    throw InvalidArgument("empty signal");
  }
  const double omni_power = sig.channels.row(0).squaredNorm() / sig.num_samples();
  if (omni_power == 0.0) {
    throw InvalidArgument("cannot calibrate noise against an all-zero signal");
  }
  const double sigma = std::sqrt(omni_power / std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  AmbisonicSignal out = sig;
  for (int c = 0; c < out.num_channels(); ++c) {
    for (long t = 0; t < out.num_samples(); ++t) out.channels(c, t) += normal(rng);
  }
  return out;
}

std::vector<double> MakeBurstSource(double duration, double fs,
                                    std::uint64_t seed) {
  if (!(duration > 0.0) || !(fs > 0.0)) {
    throw InvalidArgument("duration and fs must be positive");
  }
  const long n = std::lround(duration * fs);
  std::vector<double> out(n, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> burst_len(0.2, 0.5);
  std::uniform_real_distribution<double> gap_len(0.05, 0.2);
  std::uniform_real_distribution<double> level(0.1, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const long ramp = std::max(1L, std::lround(0.01 * fs));

  std::vector<bool> active(n, false);
  long t = 0;
  while (t < n) {
    const long len = std::lround(burst_len(rng) * fs);
    const double amp = level(rng);
    for (long i = 0; i < len && t + i < n; ++i) {
      double env = amp;
      const long edge = std::min(i, len - 1 - i);
      if (edge < ramp) {
        env *= 0.5 * (1.0 - std::cos(std::numbers::pi * (edge + 1) / (ramp + 1)));
      }
      out[t + i] = env * normal(rng);
      active[t + i] = true;
    }
    t += len;
    t += std::lround(gap_len(rng) * fs);
  }

  double sum = 0.0;
  long count = 0;
  for (long i = 0; i < n; ++i) {
    if (active[i]) {
      sum += out[i];
      ++count;
    }
  }
  if (count > 0) {
    const double mean = sum / count;
    for (long i = 0; i < n; ++i) {
      if (active[i]) out[i] -= mean;
    }
  }
  return out;
}

}  // namespace gtvv
