#include "gtvv/somp.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gtvv/errors.h"
#include "gtvv/kernels.h"

namespace gtvv {

int DefaultIterationCap(int order) { return order <= 1 ? 4 : 7; }

EstimateSet Somp(const GtvvMatrix& v, const Dictionary& dict,
                 const SompOptions& options) {
  const Eigen::MatrixXd& atoms = dict.atoms();
  if (v.channels() != dict.channels()) {
    throw InvalidArgument("GTVV channels do not match dictionary order");
  }
  if (options.iterations < 1 || options.iterations > dict.channels()) {
    throw InvalidArgument("S-OMP iterations must be in [1, (L+1)^2]");
  }
  const int lags = v.lags();
  const int first_causal = options.causal_lags_only ? v.zero_column() : 0;

  EstimateSet est;
  Eigen::MatrixXd residual = v.data;
  double initial_peak = -1.0;
  for (int it = 0; it < options.iterations; ++it) {
    const kernels::AtomScores scores = kernels::ScoreAtomsParallel(atoms, residual);
    int best = 0;
    for (int j = 1; j < dict.size(); ++j) {
      if (scores.peak[j] > scores.peak[best]) best = j;
    }
    if (initial_peak < 0.0) initial_peak = scores.peak[best];
    if (scores.peak[best] <= 1e-12 * initial_peak) {
      est.terminated_early = true;
      est.termination_reason = "residual exhausted";
      break;
    }
    if (std::find(est.atoms.begin(), est.atoms.end(), best) != est.atoms.end()) {
      est.terminated_early = true;
      est.termination_reason = "duplicate atom " + std::to_string(best);
      break;
    }

    // Delay readout on the residual before this iteration's projection.
    const Eigen::RowVectorXd corr = atoms.col(best).transpose() * residual;
    int lag = first_causal;
    for (int q = first_causal + 1; q < lags; ++q) {
      if (std::abs(corr[q]) > std::abs(corr[lag])) lag = q;
    }
    est.atoms.push_back(best);
    est.directions.push_back(dict.directions()[best]);
    est.delays.push_back(v.time_axis[lag]);

    // Z = argmin ||Y_sel Z - V||_F via loaded normal equations.
    const int k = est.size();
    Eigen::MatrixXd selected(dict.channels(), k);
    for (int i = 0; i < k; ++i) selected.col(i) = atoms.col(est.atoms[i]);
    Eigen::MatrixXd gram = selected.transpose() * selected;
    gram.diagonal().array() += 1e-10 * gram.trace();
    est.coeffs = gram.ldlt().solve(selected.transpose() * v.data);
    residual = selected * est.coeffs - v.data;
    est.residual_norms.push_back(residual.norm());
  }
  return est;
}

MatchReport MatchToTruth(const EstimateSet& est, const GroundTruthScene& truth,
                         double gate) {
  MatchReport report;
  if (est.size() > 0) {
    report.doa_error = AngularDistance(est.directions[0], truth.direct().direction);
  }
  std::vector<int> reflections;
  for (size_t i = 0; i < truth.wavefronts.size(); ++i) {
    if (truth.first_order_flags[i]) reflections.push_back(static_cast<int>(i));
  }
  report.num_first_order = static_cast<int>(reflections.size());

  std::vector<std::tuple<double, int, int>> candidates;
  for (int e = 1; e < est.size(); ++e) {
    for (int r : reflections) {
      const double d = AngularDistance(est.directions[e], truth.wavefronts[r].direction);
      if (d <= gate) candidates.emplace_back(d, e, r);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<bool> est_used(est.size(), false);
  std::vector<bool> truth_used(truth.wavefronts.size(), false);
  double angle_sum = 0.0, delay_sum = 0.0;
  for (const auto& [d, e, r] : candidates) {
    if (est_used[e] || truth_used[r]) continue;
    est_used[e] = true;
    truth_used[r] = true;
    report.matches.emplace_back(e, r);
    angle_sum += d;
    const double true_delay = truth.wavefronts[r].toa - truth.direct().toa;
    delay_sum += std::abs(est.delays[e] - true_delay);
  }
  report.detections = static_cast<int>(report.matches.size());
  if (report.detections > 0) {
    report.mean_angular_error = angle_sum / report.detections;
    report.mean_delay_error = delay_sum / report.detections;
  }
  return report;
}

}  // namespace gtvv
