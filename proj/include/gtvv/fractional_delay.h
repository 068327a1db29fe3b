#ifndef GTVV_FRACTIONAL_DELAY_H_
#define GTVV_FRACTIONAL_DELAY_H_

#include <array>

namespace gtvv {

inline constexpr int kFractionalDelayTaps = 64;

// Hann-windowed sinc interpolator for a delay of `delay_samples`:
// out[first_index + k] += taps[k] * in[0]. Integer delays give an exact
// unit impulse.
struct FractionalDelayKernel {
  long first_index = 0;
  std::array<double, kFractionalDelayTaps> taps{};
};

FractionalDelayKernel MakeFractionalDelay(double delay_samples);

}  // namespace gtvv

#endif  // GTVV_FRACTIONAL_DELAY_H_
