#ifndef GTVV_WAV_H_
#define GTVV_WAV_H_

#include <string>
#include <vector>

#include "gtvv/room.h"

namespace gtvv {

struct MonoAudio {
  double fs = 0.0;
  std::vector<double> samples;  // [-1, 1] for PCM input
};

// Reads a mono WAV: 16-bit PCM, 32-bit PCM or 32-bit IEEE float.
// Throws ConfigError on anything else.
MonoAudio ReadMonoWav(const std::string& path);

// Writes all channels as interleaved 32-bit IEEE float.
void WriteFloatWav(const AmbisonicSignal& sig, const std::string& path);

// Reads a float/PCM multichannel WAV back into an AmbisonicSignal; the
// channel count must be a perfect square.
AmbisonicSignal ReadAmbisonicWav(const std::string& path);

}  // namespace gtvv

#endif  // GTVV_WAV_H_
