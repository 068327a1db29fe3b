#include "fft.h"

#include <mutex>
#include <vector>

#include <fftw3.h>

#include "gtvv/errors.h"

namespace gtvv::internal {

namespace {

std::mutex& PlannerMutex() {
  static std::mutex mutex;
  return mutex;
}

fftw_complex* AsFftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

RealForwardFft::RealForwardFft(int size) : size_(size) {
  if (size <= 0) throw InvalidArgument("FFT size must be positive");
  std::vector<double> in(size);
  std::vector<std::complex<double>> out(size / 2 + 1);
  std::lock_guard<std::mutex> lock(PlannerMutex());
  plan_ = fftw_plan_dft_r2c_1d(size, in.data(), AsFftw(out.data()),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
}

RealForwardFft::~RealForwardFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void RealForwardFft::Execute(const double* in, std::complex<double>* out) const {
  // r2c plans leave their input untouched.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_), const_cast<double*>(in),
                       AsFftw(out));
}

ComplexFft::ComplexFft(int size, Direction direction) : size_(size) {
  if (size <= 0) throw InvalidArgument("FFT size must be positive");
  std::vector<std::complex<double>> in(size), out(size);
  std::lock_guard<std::mutex> lock(PlannerMutex());
  plan_ = fftw_plan_dft_1d(
      size, AsFftw(in.data()), AsFftw(out.data()),
      direction == Direction::kForward ? FFTW_FORWARD : FFTW_BACKWARD,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
}

ComplexFft::~ComplexFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void ComplexFft::Execute(const std::complex<double>* in,
                         std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_),
                   AsFftw(const_cast<std::complex<double>*>(in)), AsFftw(out));
}

}  // namespace gtvv::internal
