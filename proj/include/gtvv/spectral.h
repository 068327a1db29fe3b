#ifndef GTVV_SPECTRAL_H_
#define GTVV_SPECTRAL_H_

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtvv/room.h"

namespace gtvv {

using Complex = std::complex<double>;

// Multichannel STFT, one-sided. Frame u covers samples
// [u*hop, u*hop + win_len). Stored frames x bins x channels.
class SpectrumTensor {
 public:
  SpectrumTensor() = default;
  SpectrumTensor(int frames, int bins, int channels, double fs, int win_len,
                 int hop);

  int frames() const { return frames_; }
  int bins() const { return bins_; }
  int channels() const { return channels_; }
  double fs() const { return fs_; }
  int win_len() const { return win_len_; }
  int hop() const { return hop_; }

  Complex& at(int frame, int bin, int channel) {
    return data_[Index(frame, bin, channel)];
  }
  const Complex& at(int frame, int bin, int channel) const {
    return data_[Index(frame, bin, channel)];
  }
  // Pointer to the `channels()` contiguous values of (frame, bin).
  const Complex* cell(int frame, int bin) const {
    return &data_[Index(frame, bin, 0)];
  }
  Complex* cell(int frame, int bin) { return &data_[Index(frame, bin, 0)]; }

  double BinFrequency(int bin) const { return bin * fs_ / win_len_; }
  // Same tensor restricted to the first NumChannels(order) channels.
  SpectrumTensor TruncatedToOrder(int order) const;
  // Frames [first, first + count).
  SpectrumTensor FrameRange(int first, int count) const;

 private:
  size_t Index(int frame, int bin, int channel) const {
    return (static_cast<size_t>(frame) * bins_ + bin) * channels_ + channel;
  }

  int frames_ = 0;
  int bins_ = 0;
  int channels_ = 0;
  double fs_ = 0.0;
  int win_len_ = 0;
  int hop_ = 0;
  std::vector<Complex> data_;
};

// Periodic Hamming window 0.54 - 0.46 cos(2 pi n / T).
std::vector<double> HammingWindow(int length);

// win_len must be a power of two and a multiple of hop. Throws
// InvalidArgument when the signal is shorter than one window.
SpectrumTensor Stft(const AmbisonicSignal& sig, int win_len, int hop);

// Real GTVV on the lag grid t = (j - T/2) / fs, j = 0..T-1.
struct GtvvMatrix {
  Eigen::MatrixXd data;          // channels x T
  std::vector<double> time_axis;  // seconds, strictly increasing
  double fs = 0.0;

  int channels() const { return static_cast<int>(data.rows()); }
  int lags() const { return static_cast<int>(data.cols()); }
  int zero_column() const { return lags() / 2; }
};

// Inverse transform of a one-sided GFVV (channels x (T/2+1)) into the
// circularly shifted lag domain. Throws InconsistentSpectrumError when the
// DC/Nyquist bins carry an imaginary part above 1e-8 of the peak magnitude.
GtvvMatrix GfvvToGtvv(const Eigen::MatrixXcd& v_f, int win_len, double fs);

// One-sided spectrum of a GtvvMatrix (inverse of GfvvToGtvv).
Eigen::MatrixXcd GtvvToGfvv(const GtvvMatrix& v);

// ||v(t<0)||_F / ||v(t>=0)||_F.
double NegativeLagRatio(const GtvvMatrix& v);

}  // namespace gtvv

#endif  // GTVV_SPECTRAL_H_
