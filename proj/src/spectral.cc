#include "gtvv/spectral.h"

#include <cmath>
#include <numbers>

#include "fft.h"
#include "gtvv/errors.h"

namespace gtvv {

namespace {

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

SpectrumTensor::SpectrumTensor(int frames, int bins, int channels, double fs,
                               int win_len, int hop)
    : frames_(frames),
      bins_(bins),
      channels_(channels),
      fs_(fs),
      win_len_(win_len),
      hop_(hop),
      data_(static_cast<size_t>(frames) * bins * channels) {}

SpectrumTensor SpectrumTensor::TruncatedToOrder(int order) const {
  const int keep = NumChannels(order);
  if (keep > channels_) throw InvalidArgument("order exceeds spectrum channels");
  SpectrumTensor out(frames_, bins_, keep, fs_, win_len_, hop_);
  for (int u = 0; u < frames_; ++u) {
    for (int f = 0; f < bins_; ++f) {
      for (int c = 0; c < keep; ++c) out.at(u, f, c) = at(u, f, c);
    }
  }
  return out;
}

SpectrumTensor SpectrumTensor::FrameRange(int first, int count) const {
  if (first < 0 || count < 0 || first + count > frames_) {
    throw InvalidArgument("frame range out of bounds");
  }
  SpectrumTensor out(count, bins_, channels_, fs_, win_len_, hop_);
  const size_t stride = static_cast<size_t>(bins_) * channels_;
  std::copy(data_.begin() + first * stride,
            data_.begin() + (first + count) * stride, out.data_.begin());
  return out;
}

std::vector<double> HammingWindow(int length) {
  std::vector<double> w(length);
  for (int n = 0; n < length; ++n) {
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / length);
  }
  return w;
}

SpectrumTensor Stft(const AmbisonicSignal& sig, int win_len, int hop) {
  if (!IsPowerOfTwo(win_len)) throw InvalidArgument("win_len must be a power of two");
  if (hop <= 0 || win_len % hop != 0) {
    throw InvalidArgument("hop must divide win_len");
  }
  if (sig.num_samples() < win_len) {
    throw InvalidArgument("signal shorter than one analysis window");
  }
  const int frames = static_cast<int>((sig.num_samples() - win_len) / hop + 1);
  const int bins = win_len / 2 + 1;
  const int channels = sig.num_channels();
  SpectrumTensor out(frames, bins, channels, sig.fs, win_len, hop);
  const std::vector<double> window = HammingWindow(win_len);
  const internal::RealForwardFft fft(win_len);

#pragma omp parallel
  {
    std::vector<double> frame(win_len);
    std::vector<Complex> spectrum(bins);
#pragma omp for schedule(static) collapse(2)
    for (int c = 0; c < channels; ++c) {
      for (int u = 0; u < frames; ++u) {
        const double* x = sig.channels.row(c).data() + static_cast<long>(u) * hop;
        for (int n = 0; n < win_len; ++n) frame[n] = window[n] * x[n];
        fft.Execute(frame.data(), spectrum.data());
        for (int f = 0; f < bins; ++f) out.at(u, f, c) = spectrum[f];
      }
    }
  }
  return out;
}

GtvvMatrix GfvvToGtvv(const Eigen::MatrixXcd& v_f, int win_len, double fs) {
  if (!IsPowerOfTwo(win_len) || win_len < 2) {
    throw InvalidArgument("win_len must be a power of two >= 2");
  }
  const int bins = win_len / 2 + 1;
  if (v_f.cols() != bins) {
    throw InvalidArgument("GFVV has " + std::to_string(v_f.cols()) +
                          " bins, expected " + std::to_string(bins));
  }
  if (!v_f.allFinite()) throw InvalidArgument("GFVV contains non-finite values");
  const int channels = static_cast<int>(v_f.rows());
  const int half = win_len / 2;

  GtvvMatrix out;
  out.fs = fs;
  out.data.resize(channels, win_len);
  out.time_axis.resize(win_len);
  for (int j = 0; j < win_len; ++j) out.time_axis[j] = (j - half) / fs;

  const internal::ComplexFft ifft(win_len, internal::ComplexFft::Direction::kInverse);
  const double peak = v_f.cwiseAbs().maxCoeff();
  double worst_imag = 0.0;
  std::vector<Complex> full(win_len), time(win_len);
  for (int c = 0; c < channels; ++c) {
    for (int f = 0; f < bins; ++f) full[f] = v_f(c, f);
    for (int f = bins; f < win_len; ++f) full[f] = std::conj(v_f(c, win_len - f));
    ifft.Execute(full.data(), time.data());
    for (int n = 0; n < win_len; ++n) {
      const Complex value = time[n] / static_cast<double>(win_len);
      worst_imag = std::max(worst_imag, std::abs(value.imag()));
      // Lag n (mod T) lands in column n + T/2 (mod T).
      out.data(c, (n + half) % win_len) = value.real();
    }
  }
  if (worst_imag > 1e-8 * std::max(peak, 1e-300)) {
    throw InconsistentSpectrumError(
        "GFVV is not Hermitian-consistent: imaginary residue " +
        std::to_string(worst_imag) + " relative to peak " + std::to_string(peak));
  }
  return out;
}

Eigen::MatrixXcd GtvvToGfvv(const GtvvMatrix& v) {
  const int win_len = v.lags();
  const int half = win_len / 2;
  const int bins = half + 1;
  Eigen::MatrixXcd out(v.channels(), bins);
  const internal::ComplexFft fft(win_len, internal::ComplexFft::Direction::kForward);
  std::vector<Complex> time(win_len), spectrum(win_len);
  for (int c = 0; c < v.channels(); ++c) {
    for (int n = 0; n < win_len; ++n) time[n] = v.data(c, (n + half) % win_len);
    fft.Execute(time.data(), spectrum.data());
    for (int f = 0; f < bins; ++f) out(c, f) = spectrum[f];
  }
  return out;
}

double NegativeLagRatio(const GtvvMatrix& v) {
  const int zero = v.zero_column();
  const double negative = v.data.leftCols(zero).norm();
  const double causal = v.data.rightCols(v.lags() - zero).norm();
  return negative / causal;
}

}  // namespace gtvv
