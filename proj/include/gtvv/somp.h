#ifndef GTVV_SOMP_H_
#define GTVV_SOMP_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtvv/dictionary.h"
#include "gtvv/room.h"
#include "gtvv/spectral.h"

namespace gtvv {

// S-OMP output in iteration order. The first entry is the DoA estimate.
struct EstimateSet {
  std::vector<int> atoms;
  std::vector<Direction> directions;
  std::vector<double> delays;          // seconds, relative to t = 0
  Eigen::MatrixXd coeffs;              // #selected x T
  std::vector<double> residual_norms;  // Frobenius, after each iteration
  bool terminated_early = false;
  std::string termination_reason;

  int size() const { return static_cast<int>(atoms.size()); }
};

struct SompOptions {
  int iterations = 7;
  // Restrict the delay readout to lags t >= 0.
  bool causal_lags_only = true;
};

// 4 for first-order input, 7 above.
int DefaultIterationCap(int order);

// Simultaneous OMP over the dictionary atoms. Requires
// iterations <= (L+1)^2 and matching channel counts.
EstimateSet Somp(const GtvvMatrix& v, const Dictionary& dict,
                 const SompOptions& options);

struct MatchReport {
  double doa_error = 0.0;  // radians, iteration 1 vs the direct path
  int detections = 0;
  int num_first_order = 0;
  double mean_angular_error = 0.0;  // radians over matched reflections
  double mean_delay_error = 0.0;    // seconds over matched reflections
  // (estimate index, wavefront index) pairs.
  std::vector<std::pair<int, int>> matches;
};

// Greedy one-to-one matching of estimates 2.. to the first-order image
// reflections by angular distance; pairs further apart than `gate` are
// discarded. Means are zero when nothing matched.
MatchReport MatchToTruth(const EstimateSet& est, const GroundTruthScene& truth,
                         double gate);

}  // namespace gtvv

#endif  // GTVV_SOMP_H_
