#include "gtvv/kernels.h"

#include <algorithm>
#include <cmath>

#include "gtvv/errors.h"

namespace gtvv::kernels {

namespace {

constexpr double kSilentBinFloor = 1e-18;      // energy, relative to loudest bin
constexpr double kNegligibleChannel = 1e-20;   // energy, relative to reference
constexpr double kCollinearityFloor = 1e-10;   // on 1 - |rho|^2
constexpr int kRefinementSteps = 2;

struct CellResult {
  Complex v;
  BinStatus status;
};

// Index of the channel when w is exactly a unit vector, else -1.
int UnitReferenceChannel(const Eigen::VectorXd& w) {
  int index = -1;
  for (int c = 0; c < w.size(); ++c) {
    if (w[c] == 0.0) continue;
    if (w[c] != 1.0 || index >= 0) return -1;
    index = c;
  }
  return index;
}

void CheckShapes(const SpectrumTensor& spec, const Eigen::VectorXd& w,
                 const LsSettings& s) {
  if (w.size() != spec.channels()) {
    throw InvalidArgument("reference weights do not match spectrum channels");
  }
  if (s.seg_count < 2 || s.frames_per_seg < 1) {
    throw InvalidArgument("need seg_count >= 2 and frames_per_seg >= 1");
  }
  if (spec.frames() < s.seg_count * s.frames_per_seg) {
    throw InvalidArgument("spectrum has " + std::to_string(spec.frames()) +
                          " frames, estimator needs " +
                          std::to_string(s.seg_count * s.frames_per_seg));
  }
}

// Columns are equilibrated before the loaded solve; two refinement steps then
// remove the loading bias on well-conditioned cells.
CellResult SolveStacked(const std::vector<double>& auto_power,
                        const std::vector<Complex>& cross, double load) {
  const int segs = static_cast<int>(auto_power.size());
  double cross_norm2 = 0.0;
  for (const Complex& x : cross) cross_norm2 += std::norm(x);
  if (cross_norm2 == 0.0) return {0.0, BinStatus::kDegenerate};
  const double cross_norm = std::sqrt(cross_norm2);
  const double ones = 1.0 / std::sqrt(static_cast<double>(segs));

  Complex rho = 0.0, g1 = 0.0;
  double g2 = 0.0;
  for (int j = 0; j < segs; ++j) {
    const Complex a1 = std::conj(cross[j] / cross_norm);
    rho += a1 * ones;
    g1 += a1 * auto_power[j];
    g2 += ones * auto_power[j];
  }
  if (1.0 - std::norm(rho) < kCollinearityFloor) {
    return {0.0, BinStatus::kDegenerate};
  }
  const double diag = 1.0 + 2.0 * load;  // load * trace(G), trace = 2
  const double det = diag * diag - std::norm(rho);
  auto apply_inverse = [&](Complex r1, Complex r2, Complex& x1, Complex& x2) {
    x1 += (diag * r1 - rho * r2) / det;
    x2 += (-std::conj(rho) * r1 + diag * r2) / det;
  };
  Complex x1 = 0.0, x2 = 0.0;
  apply_inverse(g1, g2, x1, x2);
  for (int step = 0; step < kRefinementSteps; ++step) {
    const Complex r1 = g1 - (x1 + rho * x2);
    const Complex r2 = Complex(g2) - (std::conj(rho) * x1 + x2);
    apply_inverse(r1, r2, x1, x2);
  }
  return {x1 / cross_norm, BinStatus::kOk};
}

void FinishStatus(LsSolution& out, const std::vector<BinStatus>& cells,
                  int channels) {
  const int bins = static_cast<int>(out.reference_energy.size());
  const double loudest =
      *std::max_element(out.reference_energy.begin(), out.reference_energy.end());
  out.status.assign(bins, BinStatus::kOk);
  for (int f = 0; f < bins; ++f) {
    if (out.reference_energy[f] <= kSilentBinFloor * loudest) {
      out.status[f] = BinStatus::kSilent;
      out.v.col(f).setZero();
      continue;
    }
    for (int c = 0; c < channels; ++c) {
      out.status[f] = std::max(out.status[f], cells[c * bins + f]);
    }
  }
}

CellResult SolveChannel(const std::vector<double>& auto_power,
                        const std::vector<Complex>& cross, double channel_energy,
                        double reference_energy, double load) {
  if (channel_energy <= kNegligibleChannel * reference_energy) {
    return {0.0, BinStatus::kOk};
  }
  return SolveStacked(auto_power, cross, load);
}

}  // namespace

LsSolution SolveGfvvBinsSerial(const SpectrumTensor& spec,
                               const Eigen::VectorXd& w,
                               const LsSettings& settings) {
  CheckShapes(spec, w, settings);
  const int channels = spec.channels();
  const int bins = spec.bins();
  const int segs = settings.seg_count;
  const int per_seg = settings.frames_per_seg;
  const int ref_channel = UnitReferenceChannel(w);

  LsSolution out;
  out.v = Eigen::MatrixXcd::Zero(channels, bins);
  out.reference_energy.assign(bins, 0.0);
  std::vector<BinStatus> cells(static_cast<size_t>(channels) * bins, BinStatus::kOk);

  for (int f = 0; f < bins; ++f) {
    for (int u = 0; u < segs * per_seg; ++u) {
      Complex r = 0.0;
      for (int c = 0; c < channels; ++c) r += w[c] * spec.at(u, f, c);
      out.reference_energy[f] += std::norm(r);
    }
  }

  std::vector<double> auto_power(segs);
  std::vector<Complex> cross(segs);
  for (int c = 0; c < channels; ++c) {
    for (int f = 0; f < bins; ++f) {
      if (c == ref_channel) {
        out.v(c, f) = 1.0;
        continue;
      }
      double channel_energy = 0.0;
      for (int j = 0; j < segs; ++j) {
        auto_power[j] = 0.0;
        cross[j] = 0.0;
        for (int u = j * per_seg; u < (j + 1) * per_seg; ++u) {
          const Complex b = spec.at(u, f, c);
          Complex r = 0.0;
          for (int k = 0; k < channels; ++k) r += w[k] * spec.at(u, f, k);
          auto_power[j] += std::norm(b);
          cross[j] += r * std::conj(b);
        }
        channel_energy += auto_power[j];
        auto_power[j] /= per_seg;
        cross[j] /= static_cast<double>(per_seg);
      }
      const CellResult cell =
          SolveChannel(auto_power, cross, channel_energy,
                       out.reference_energy[f], settings.diagonal_load);
      out.v(c, f) = cell.v;
      cells[static_cast<size_t>(c) * bins + f] = cell.status;
    }
  }
  FinishStatus(out, cells, channels);
  return out;
}

LsSolution SolveGfvvBinsParallel(const SpectrumTensor& spec,
                                 const Eigen::VectorXd& w,
                                 const LsSettings& settings) {
  CheckShapes(spec, w, settings);
  const int channels = spec.channels();
  const int bins = spec.bins();
  const int segs = settings.seg_count;
  const int per_seg = settings.frames_per_seg;
  const int frames = segs * per_seg;
  const int ref_channel = UnitReferenceChannel(w);

  LsSolution out;
  out.v = Eigen::MatrixXcd::Zero(channels, bins);
  out.reference_energy.assign(bins, 0.0);
  std::vector<BinStatus> cells(static_cast<size_t>(channels) * bins, BinStatus::kOk);

#pragma omp parallel
  {
    std::vector<Complex> reference(frames);
    std::vector<double> auto_power(segs);
    std::vector<Complex> cross(segs);
#pragma omp for schedule(dynamic, 8)
    for (int f = 0; f < bins; ++f) {
      double ref_energy = 0.0;
      for (int u = 0; u < frames; ++u) {
        const Complex* b = spec.cell(u, f);
        Complex r = 0.0;
        for (int k = 0; k < channels; ++k) r += w[k] * b[k];
        reference[u] = r;
        ref_energy += std::norm(r);
      }
      out.reference_energy[f] = ref_energy;
      for (int c = 0; c < channels; ++c) {
        if (c == ref_channel) {
          out.v(c, f) = 1.0;
          continue;
        }
        double channel_energy = 0.0;
        for (int j = 0; j < segs; ++j) {
          double p = 0.0;
          Complex x = 0.0;
          for (int u = j * per_seg; u < (j + 1) * per_seg; ++u) {
            const Complex b = spec.cell(u, f)[c];
            p += std::norm(b);
            x += reference[u] * std::conj(b);
          }
          channel_energy += p;
          auto_power[j] = p / per_seg;
          cross[j] = x / static_cast<double>(per_seg);
        }
        const CellResult cell = SolveChannel(auto_power, cross, channel_energy,
                                             ref_energy, settings.diagonal_load);
        out.v(c, f) = cell.v;
        cells[static_cast<size_t>(c) * bins + f] = cell.status;
      }
    }
  }
  FinishStatus(out, cells, channels);
  return out;
}

AtomScores ScoreAtomsSerial(const Eigen::MatrixXd& atoms,
                            const Eigen::MatrixXd& residual) {
  const int n_atoms = static_cast<int>(atoms.cols());
  const int channels = static_cast<int>(atoms.rows());
  const int lags = static_cast<int>(residual.cols());
  AtomScores out{std::vector<double>(n_atoms, 0.0), std::vector<int>(n_atoms, 0)};
  for (int j = 0; j < n_atoms; ++j) {
    for (int q = 0; q < lags; ++q) {
      double dot = 0.0;
      for (int c = 0; c < channels; ++c) dot += atoms(c, j) * residual(c, q);
      if (std::abs(dot) > out.peak[j]) {
        out.peak[j] = std::abs(dot);
        out.peak_lag[j] = q;
      }
    }
  }
  return out;
}

AtomScores ScoreAtomsParallel(const Eigen::MatrixXd& atoms,
                              const Eigen::MatrixXd& residual) {
  constexpr int kBlock = 32;
  const int n_atoms = static_cast<int>(atoms.cols());
  const int lags = static_cast<int>(residual.cols());
  AtomScores out{std::vector<double>(n_atoms, 0.0), std::vector<int>(n_atoms, 0)};
  const int blocks = (n_atoms + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (int b = 0; b < blocks; ++b) {
    const int first = b * kBlock;
    const int count = std::min(kBlock, n_atoms - first);
    const Eigen::MatrixXd proj =
        atoms.middleCols(first, count).transpose() * residual;
    for (int j = 0; j < count; ++j) {
      for (int q = 0; q < lags; ++q) {
        const double a = std::abs(proj(j, q));
        if (a > out.peak[first + j]) {
          out.peak[first + j] = a;
          out.peak_lag[first + j] = q;
        }
      }
    }
  }
  return out;
}

namespace {

std::vector<double> FrameEnergies(const SpectrumTensor& spec) {
  std::vector<double> energy(spec.frames(), 0.0);
  for (int u = 0; u < spec.frames(); ++u) {
    for (int f = 0; f < spec.bins(); ++f) {
      const Complex* b = spec.cell(u, f);
      for (int c = 0; c < spec.channels(); ++c) energy[u] += std::norm(b[c]);
    }
  }
  return energy;
}

void CheckSrpShapes(const SpectrumTensor& spec, const Eigen::MatrixXd& atoms) {
  if (spec.frames() == 0 || spec.bins() == 0) {
    throw InvalidArgument("empty spectrum");
  }
  if (atoms.rows() != spec.channels()) {
    throw InvalidArgument("dictionary order does not match spectrum channels");
  }
}

}  // namespace

std::vector<double> SteeredPowerSerial(const SpectrumTensor& spec,
                                       const Eigen::MatrixXd& atoms) {
  CheckSrpShapes(spec, atoms);
  const std::vector<double> energy = FrameEnergies(spec);
  const int n_atoms = static_cast<int>(atoms.cols());
  std::vector<double> power(n_atoms, 0.0);
  for (int j = 0; j < n_atoms; ++j) {
    for (int u = 0; u < spec.frames(); ++u) {
      if (energy[u] == 0.0) continue;
      double frame_power = 0.0;
      for (int f = 0; f < spec.bins(); ++f) {
        Complex beam = 0.0;
        for (int c = 0; c < spec.channels(); ++c) beam += atoms(c, j) * spec.at(u, f, c);
        frame_power += std::norm(beam);
      }
      power[j] += frame_power / energy[u];
    }
  }
  return power;
}

std::vector<double> SteeredPowerParallel(const SpectrumTensor& spec,
                                         const Eigen::MatrixXd& atoms) {
  CheckSrpShapes(spec, atoms);
  const std::vector<double> energy = FrameEnergies(spec);
  const int channels = spec.channels();

  // Real part of sum_u sum_f b b^H / E_u; each thread owns whole entries.
  std::vector<std::pair<int, int>> entries;
  for (int a = 0; a < channels; ++a) {
    for (int b = a; b < channels; ++b) entries.emplace_back(a, b);
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(channels, channels);
  const int n_entries = static_cast<int>(entries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (int e = 0; e < n_entries; ++e) {
    const auto [a, b] = entries[e];
    double sum = 0.0;
    for (int u = 0; u < spec.frames(); ++u) {
      if (energy[u] == 0.0) continue;
      double frame_sum = 0.0;
      for (int f = 0; f < spec.bins(); ++f) {
        const Complex* x = spec.cell(u, f);
        frame_sum += (x[a] * std::conj(x[b])).real();
      }
      sum += frame_sum / energy[u];
    }
    cov(a, b) = sum;
    cov(b, a) = sum;
  }

  const int n_atoms = static_cast<int>(atoms.cols());
  std::vector<double> power(n_atoms);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n_atoms; ++j) {
    power[j] = std::max(0.0, atoms.col(j).dot(cov * atoms.col(j)));
  }
  return power;
}

}  // namespace gtvv::kernels
