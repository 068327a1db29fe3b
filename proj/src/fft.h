#ifndef GTVV_SRC_FFT_H_
#define GTVV_SRC_FFT_H_

#include <complex>

namespace gtvv::internal {

// Thin RAII wrappers over FFTW plans. Plans are created under a global lock;
// Execute is reentrant and may be called concurrently on distinct buffers.

class RealForwardFft {
 public:
  explicit RealForwardFft(int size);
  ~RealForwardFft();
  RealForwardFft(const RealForwardFft&) = delete;
  RealForwardFft& operator=(const RealForwardFft&) = delete;

  int size() const { return size_; }
  // in: size() samples, out: size()/2 + 1 bins. Unnormalized.
  void Execute(const double* in, std::complex<double>* out) const;

 private:
  int size_;
  void* plan_;
};

class ComplexFft {
 public:
  enum class Direction { kForward, kInverse };
  ComplexFft(int size, Direction direction);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  int size() const { return size_; }
  // Unnormalized in both directions.
  void Execute(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  int size_;
  void* plan_;
};

}  // namespace gtvv::internal

#endif  // GTVV_SRC_FFT_H_
