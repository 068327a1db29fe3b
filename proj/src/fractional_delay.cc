#include "gtvv/fractional_delay.h"

#include <cmath>
#include <numbers>

namespace gtvv {

FractionalDelayKernel MakeFractionalDelay(double delay_samples) {
  constexpr double kPi = std::numbers::pi;
  constexpr int kHalf = kFractionalDelayTaps / 2;
  FractionalDelayKernel kernel;
  const double base = std::floor(delay_samples);
  kernel.first_index = static_cast<long>(base) - (kHalf - 1);
  for (int k = 0; k < kFractionalDelayTaps; ++k) {
    const double x = static_cast<double>(kernel.first_index + k) - delay_samples;
    if (x == 0.0) {
      kernel.taps[k] = 1.0;
      continue;
    }
    if (std::abs(x) >= kHalf || x == std::round(x)) continue;
    const double sinc = std::sin(kPi * x) / (kPi * x);
    const double window = 0.5 * (1.0 + std::cos(kPi * x / kHalf));
    kernel.taps[k] = sinc * window;
  }
  return kernel;
}

}  // namespace gtvv
