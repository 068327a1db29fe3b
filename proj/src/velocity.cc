#include "gtvv/velocity.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "gtvv/errors.h"
#include "gtvv/fractional_delay.h"
#include "gtvv/kernels.h"

namespace gtvv {

Complex RelativeWavefront::Gamma(double frequency) const {
  return gain * beta * std::polar(1.0, -2.0 * std::numbers::pi * frequency * delay);
}

std::vector<RelativeWavefront> RelativeWavefronts(const GroundTruthScene& scene,
                                                  const BeamWeights& reference) {
  std::vector<RelativeWavefront> out;
  out.reserve(scene.wavefronts.size());
  const Wavefront& direct = scene.direct();
  for (const Wavefront& wf : scene.wavefronts) {
    out.push_back({wf.direction, wf.gain / direct.gain, wf.toa - direct.toa,
                   reference.Gain(wf.direction)});
  }
  return out;
}

GfvvEstimate InstantaneousGfvv(const SpectrumTensor& spec, const BeamWeights& w,
                               int frame) {
  if (frame < 0 || frame >= spec.frames()) throw InvalidArgument("frame out of range");
  if (w.weights.size() != spec.channels()) {
    throw InvalidArgument("reference weights do not match spectrum channels");
  }
  const int channels = spec.channels();
  const int bins = spec.bins();
  double energy = 0.0;
  for (int f = 0; f < bins; ++f) {
    for (int c = 0; c < channels; ++c) energy += std::norm(spec.at(frame, f, c));
  }
  const double floor = 1e-9 * std::sqrt(energy / (static_cast<double>(bins) * channels));

  GfvvEstimate out{Eigen::MatrixXcd::Zero(channels, bins), std::vector<bool>(bins, false)};
  int valid = 0;
  for (int f = 0; f < bins; ++f) {
    Complex reference = 0.0;
    for (int c = 0; c < channels; ++c) reference += w.weights[c] * spec.at(frame, f, c);
    if (!(std::abs(reference) > floor)) continue;
    for (int c = 0; c < channels; ++c) out.values(c, f) = spec.at(frame, f, c) / reference;
    out.valid[f] = true;
    ++valid;
  }
  if (valid == 0) {
    throw SilentFrameError("frame " + std::to_string(frame) + " is silent");
  }
  return out;
}

Eigen::MatrixXcd ModelGfvv(std::span<const RelativeWavefront> waves, int order,
                           std::span<const double> frequencies) {
  if (waves.empty()) throw InvalidArgument("no wavefronts");
  const int channels = NumChannels(order);
  const int n = static_cast<int>(waves.size());
  Eigen::MatrixXd patterns(channels, n);
  for (int i = 0; i < n; ++i) patterns.col(i) = ShEval(waves[i].direction, order).coeffs;

  Eigen::MatrixXcd out(channels, frequencies.size());
  for (size_t f = 0; f < frequencies.size(); ++f) {
    Eigen::VectorXcd numerator = Eigen::VectorXcd::Zero(channels);
    Complex denominator = 0.0;
    for (int i = 0; i < n; ++i) {
      const Complex a = waves[i].gain *
          std::polar(1.0, -2.0 * std::numbers::pi * frequencies[f] * waves[i].delay);
      numerator += a * patterns.col(i).cast<Complex>();
      denominator += a * waves[i].beta;
    }
    out.col(f) = numerator / denominator;
  }
  return out;
}

GfvvEstimate EstimateGfvvLs(const SpectrumTensor& spec, const EstimatorConfig& cfg) {
  const kernels::LsSettings settings{cfg.seg_count, cfg.frames_per_seg,
                                     cfg.diagonal_load};
  kernels::LsSolution sol =
      kernels::SolveGfvvBinsParallel(spec, cfg.reference.weights, settings);

  const int bins = spec.bins();
  int worst_bin = -1, degenerate = 0, valid = 0;
  GfvvEstimate out{std::move(sol.v), std::vector<bool>(bins, false)};
  for (int f = 0; f < bins; ++f) {
    switch (sol.status[f]) {
      case kernels::BinStatus::kOk:
        out.valid[f] = true;
        ++valid;
        break;
      case kernels::BinStatus::kDegenerate:
        ++degenerate;
        if (worst_bin < 0 || sol.reference_energy[f] > sol.reference_energy[worst_bin]) {
          worst_bin = f;
        }
        break;
      case kernels::BinStatus::kSilent:
        break;
    }
  }
  if (degenerate > 0) throw EstimatorDegenerateError(worst_bin, degenerate);
  if (valid == 0) throw SilentFrameError("all frequency bins are silent");
  return out;
}

Eigen::MatrixXcd InterpolateInvalidBins(const GfvvEstimate& estimate) {
  Eigen::MatrixXcd out = estimate.values;
  const int bins = static_cast<int>(out.cols());
  int previous = -1;
  for (int f = 0; f <= bins; ++f) {
    if (f < bins && !estimate.valid[f]) continue;
    // Bins (previous, f) are invalid.
    for (int g = previous + 1; g < f; ++g) {
      if (previous < 0 && f == bins) {
        throw SilentFrameError("no valid bins to interpolate from");
      } else if (previous < 0) {
        out.col(g) = out.col(f);
      } else if (f == bins) {
        out.col(g) = out.col(previous);
      } else {
        const double t = static_cast<double>(g - previous) / (f - previous);
        out.col(g) = (1.0 - t) * out.col(previous) + t * out.col(f);
      }
    }
    previous = f;
  }
  return out;
}

GtvvMatrix EstimateGtvv(const SpectrumTensor& spec, const EstimatorConfig& cfg) {
  const GfvvEstimate gfvv = EstimateGfvvLs(spec, cfg);
  Eigen::MatrixXcd filled = InterpolateInvalidBins(gfvv);
  // DC and Nyquist are real for real input; drop the rounding residue.
  filled.col(0) = filled.col(0).real().cast<Complex>();
  filled.col(filled.cols() - 1) = filled.col(filled.cols() - 1).real().cast<Complex>();
  return GfvvToGtvv(filled, spec.win_len(), spec.fs());
}

ClosedFormGtvv GtvvClosedForm(std::span<const RelativeWavefront> waves, int order,
                              int max_k, int win_len, double fs) {
  if (waves.empty()) throw InvalidArgument("no wavefronts");
  if (max_k < 0) throw InvalidArgument("max_k must be non-negative");
  if (win_len < 2 || (win_len & (win_len - 1)) != 0) {
    throw InvalidArgument("win_len must be a power of two");
  }
  const RelativeWavefront& direct = waves[0];
  if (std::abs(direct.gain - 1.0) > 1e-9 || std::abs(direct.delay) > 1e-12 ||
      std::abs(direct.beta - 1.0) > 1e-9) {
    throw InvalidArgument("waves[0] must be the direct path with g = 1, tau = 0, beta = 1");
  }
  const int n = static_cast<int>(waves.size());
  double sum_gb = 0.0;
  for (int i = 1; i < n; ++i) {
    const double q = std::abs(waves[i].gain * waves[i].beta);
    if (q >= 1.0) {
      throw ExpansionInvalidError("|g beta| = " + std::to_string(q) +
                                  " >= 1 for wavefront " + std::to_string(i));
    }
    if (waves[i].delay <= 0.0) {
      throw InvalidArgument("reflections must arrive after the direct path");
    }
    sum_gb += q;
  }

  const int half = win_len / 2;
  const int channels = NumChannels(order);
  std::vector<Eigen::VectorXd> y(n);
  std::vector<double> y_max(n);
  for (int i = 0; i < n; ++i) {
    y[i] = ShEval(waves[i].direction, order).coeffs;
    y_max[i] = y[i].cwiseAbs().maxCoeff();
  }

  ClosedFormGtvv out;
  GtvvMatrix& m = out.matrix;
  m.fs = fs;
  m.data = Eigen::MatrixXd::Zero(channels, win_len);
  m.time_axis.resize(win_len);
  for (int j = 0; j < win_len; ++j) m.time_axis[j] = (j - half) / fs;
  m.data.col(half) = y[0];

  SeriesExpansion& series = out.expansion;
  series.max_k = max_k;
  series.sufficient_condition_met = sum_gb < 1.0;
  for (int i = 1; i < n; ++i) {
    const RelativeWavefront& wave = waves[i];
    const double q = std::abs(wave.gain * wave.beta);
    double gb_pow = 1.0;              // (-g beta)^k
    double g_beta_pow = 0.0;          // (-g)^k beta^(k-1)
    for (int k = 1; k <= max_k; ++k) {
      gb_pow *= -wave.gain * wave.beta;
      g_beta_pow = (k == 1) ? -wave.gain : g_beta_pow * (-wave.gain * wave.beta);
      SeriesExpansion::Term term{i, k, gb_pow, k * wave.delay, false};
      const double lag_samples = k * wave.delay * fs;
      if (lag_samples <= half) {
        const Eigen::VectorXd pattern = gb_pow * y[0] - g_beta_pow * y[i];
        const FractionalDelayKernel kernel = MakeFractionalDelay(lag_samples);
        for (int tap = 0; tap < kFractionalDelayTaps; ++tap) {
          if (kernel.taps[tap] == 0.0) continue;
          long column = (kernel.first_index + tap + half) % win_len;
          if (column < 0) column += win_len;
          m.data.col(column) += kernel.taps[tap] * pattern;
        }
        term.placed = true;
      } else {
        series.truncation_budget +=
            std::abs(gb_pow) * y_max[0] + std::abs(g_beta_pow) * y_max[i];
      }
      series.terms.push_back(term);
    }
    // Tail k > max_k: sum of y0 q^k + |g| q^(k-1) y_n.
    series.truncation_budget += (y_max[0] * std::pow(q, max_k + 1) +
                                 y_max[i] * std::abs(wave.gain) * std::pow(q, max_k)) /
                                (1.0 - q);
  }

  if (!series.sufficient_condition_met) {
    series.cross_term_budget = std::numeric_limits<double>::infinity();
  } else {
    // Coefficient mass of the multi-wave part of 1/(1 + sum gamma), times the
    // numerator mass, plus numerator/denominator pairs from distinct waves.
    double single = 0.0;
    double numerator = y_max[0];
    for (int i = 1; i < n; ++i) {
      const double q = std::abs(waves[i].gain * waves[i].beta);
      single += q / (1.0 - q);
      numerator += std::abs(waves[i].gain) * y_max[i];
    }
    const double cross_rho = std::max(0.0, 1.0 / (1.0 - sum_gb) - 1.0 - single);
    double pairs = 0.0;
    for (int a = 1; a < n; ++a) {
      for (int b = 1; b < n; ++b) {
        if (a == b) continue;
        const double qb = std::abs(waves[b].gain * waves[b].beta);
        pairs += std::abs(waves[a].gain) * y_max[a] * qb / (1.0 - qb);
      }
    }
    series.cross_term_budget = numerator * cross_rho + pairs;
  }
  return out;
}

}  // namespace gtvv
