#ifndef GTVV_KERNELS_H_
#define GTVV_KERNELS_H_

// Data-parallel inner loops of the pipeline. Every kernel comes as a plain
// serial reference and an OpenMP version; the two must agree to rounding.
// Parallel versions only split over independent outputs, so results do not
// depend on the thread count.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gtvv/spectral.h"

namespace gtvv::kernels {

// ---- Per-bin nonstationarity least squares -------------------------------

struct LsSettings {
  int seg_count = 8;
  int frames_per_seg = 24;
  double diagonal_load = 1e-6;
};

enum class BinStatus : std::uint8_t { kOk = 0, kSilent = 1, kDegenerate = 2 };

struct LsSolution {
  Eigen::MatrixXcd v;             // channels x bins
  std::vector<BinStatus> status;  // per bin, worst over channels
  std::vector<double> reference_energy;  // per bin, sum_u |w^T b|^2
};

// Solves, for every (channel, bin), the stacked system
//   phi_BB(j) = v * Phi_RB(j) + d,  j = 0..seg_count-1
// over the first seg_count * frames_per_seg frames, where R = w^T b.
LsSolution SolveGfvvBinsSerial(const SpectrumTensor& spec,
                               const Eigen::VectorXd& w,
                               const LsSettings& settings);
LsSolution SolveGfvvBinsParallel(const SpectrumTensor& spec,
                                 const Eigen::VectorXd& w,
                                 const LsSettings& settings);

// ---- S-OMP atom scoring --------------------------------------------------

struct AtomScores {
  std::vector<double> peak;  // max_q |atom_j^T R_q|
  std::vector<int> peak_lag;  // first q attaining it
};

AtomScores ScoreAtomsSerial(const Eigen::MatrixXd& atoms,
                            const Eigen::MatrixXd& residual);
AtomScores ScoreAtomsParallel(const Eigen::MatrixXd& atoms,
                              const Eigen::MatrixXd& residual);

// ---- Steered response power ----------------------------------------------

// P_j = sum_u (1 / E_u) sum_f |y_j^T b(u, f)|^2 with E_u the frame energy;
// all-zero frames are skipped.
std::vector<double> SteeredPowerSerial(const SpectrumTensor& spec,
                                       const Eigen::MatrixXd& atoms);
// Same quantity through the frame-normalized spatial covariance.
std::vector<double> SteeredPowerParallel(const SpectrumTensor& spec,
                                         const Eigen::MatrixXd& atoms);

}  // namespace gtvv::kernels

#endif  // GTVV_KERNELS_H_
