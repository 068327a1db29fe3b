#ifndef GTVV_VELOCITY_H_
#define GTVV_VELOCITY_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gtvv/room.h"
#include "gtvv/sh.h"
#include "gtvv/spectral.h"

namespace gtvv {

// A wavefront relative to the direct path: gain ratio, delay difference and
// the reference beam's response toward it.
struct RelativeWavefront {
  Direction direction;
  double gain = 1.0;   // g
  double delay = 0.0;  // tau, seconds
  double beta = 1.0;   // w^T y(direction)

  Complex Gamma(double frequency) const;
};

std::vector<RelativeWavefront> RelativeWavefronts(const GroundTruthScene& scene,
                                                  const BeamWeights& reference);

// Per-bin GFVV with a validity mask.
struct GfvvEstimate {
  Eigen::MatrixXcd values;  // channels x bins
  std::vector<bool> valid;  // per bin
};

// b(f) / (w^T b(f)) for one STFT frame. Bins where |w^T b| does not exceed
// 1e-9 times the frame RMS are flagged invalid and left at zero. Throws
// SilentFrameError when no bin qualifies.
GfvvEstimate InstantaneousGfvv(const SpectrumTensor& spec, const BeamWeights& w,
                               int frame);

// The frequency-domain model sum_n a_n y_n / sum_n a_n beta_n with
// a_n = g_n exp(-j 2 pi f tau_n). waves[0] is the direct path.
Eigen::MatrixXcd ModelGfvv(std::span<const RelativeWavefront> waves, int order,
                           std::span<const double> frequencies);

struct EstimatorConfig {
  int seg_count = 8;
  int frames_per_seg = 24;
  double diagonal_load = 1e-6;
  BeamWeights reference;
};

// Nonstationarity least-squares GFVV over the first
// seg_count * frames_per_seg frames. Near-silent bins come back invalid.
// Throws EstimatorDegenerateError when a non-silent bin has collinear
// columns (stationary excitation).
GfvvEstimate EstimateGfvvLs(const SpectrumTensor& spec, const EstimatorConfig& cfg);

// Fills invalid bins by linear interpolation of the complex values between
// the nearest valid neighbours (nearest value at the edges).
Eigen::MatrixXcd InterpolateInvalidBins(const GfvvEstimate& estimate);

// EstimateGfvvLs -> InterpolateInvalidBins -> GfvvToGtvv.
GtvvMatrix EstimateGtvv(const SpectrumTensor& spec, const EstimatorConfig& cfg);

// Truncated geometric-series bookkeeping of the closed-form GTVV.
struct SeriesExpansion {
  struct Term {
    int wave = 0;           // index into the wave list (>= 1)
    int k = 0;              // power
    double coefficient = 0.0;  // (-g beta)^k
    double lag = 0.0;       // k * tau, seconds
    bool placed = false;    // false when outside the lag window
  };
  int max_k = 0;
  std::vector<Term> terms;
  // Per-entry bound on the neglected multi-wavefront terms (integer lags);
  // infinite when sum |g beta| >= 1.
  double cross_term_budget = 0.0;
  // Per-entry bound on the single-wavefront terms that were not placed
  // (k > max_k or lag beyond the window).
  double truncation_budget = 0.0;
  // sum_n |g_n beta_n| < 1.
  bool sufficient_condition_met = true;
};

struct ClosedFormGtvv {
  GtvvMatrix matrix;
  SeriesExpansion expansion;
};

// delta(t) y_0 + sum_{k=1..max_k} sum_n (-g_n beta_n)^k (y_0 - y_n / beta_n)
// delta(t - k tau_n), fractional lags spread by the 64-tap sinc kernel.
// Requires waves[0] to be the direct path with gain 1, delay 0, beta 1.
// Throws ExpansionInvalidError if any |g_n beta_n| >= 1.
ClosedFormGtvv GtvvClosedForm(std::span<const RelativeWavefront> waves, int order,
                              int max_k, int win_len, double fs);

}  // namespace gtvv

#endif  // GTVV_VELOCITY_H_
