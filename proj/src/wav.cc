#include "gtvv/wav.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gtvv/errors.h"

namespace gtvv {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct RawWav {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  std::vector<char> data;
};

template <typename T>
T ReadLe(const char* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  return value;
}

RawWav ReadRaw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ConfigError(path + " is not a RIFF/WAVE file");
  }
  RawWav wav;
  bool have_fmt = false, have_data = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = ReadLe<std::uint32_t>(&bytes[pos + 4]);
    const char* body = &bytes[pos + 8];
    if (pos + 8 + size > bytes.size()) throw ConfigError(path + ": truncated chunk");
    if (std::memcmp(&bytes[pos], "fmt ", 4) == 0 && size >= 16) {
      wav.format = ReadLe<std::uint16_t>(body);
      wav.channels = ReadLe<std::uint16_t>(body + 2);
      wav.sample_rate = ReadLe<std::uint32_t>(body + 4);
      wav.bits = ReadLe<std::uint16_t>(body + 14);
      if (wav.format == kFormatExtensible && size >= 26) {
        wav.format = ReadLe<std::uint16_t>(body + 24);  // sub-format GUID head
      }
      have_fmt = true;
    } else if (std::memcmp(&bytes[pos], "data", 4) == 0) {
      wav.data.assign(body, body + size);
      have_data = true;
    }
    pos += 8 + size + (size & 1);
  }
  if (!have_fmt || !have_data || wav.channels == 0) {
    throw ConfigError(path + ": missing fmt or data chunk");
  }
  return wav;
}

std::vector<double> DecodeSamples(const RawWav& wav, const std::string& path) {
  std::vector<double> out;
  const size_t width = wav.bits / 8;
  if (width == 0) throw ConfigError(path + ": bad sample width");
  const size_t count = wav.data.size() / width;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    const char* p = &wav.data[i * width];
    if (wav.format == kFormatPcm && wav.bits == 16) {
      out.push_back(ReadLe<std::int16_t>(p) / 32768.0);
    } else if (wav.format == kFormatPcm && wav.bits == 32) {
      out.push_back(ReadLe<std::int32_t>(p) / 2147483648.0);
    } else if (wav.format == kFormatFloat && wav.bits == 32) {
      out.push_back(ReadLe<float>(p));
    } else {
      throw ConfigError(path + ": unsupported WAV encoding (format " +
                        std::to_string(wav.format) + ", " +
                        std::to_string(wav.bits) + " bits)");
    }
  }
  return out;
}

template <typename T>
void WriteLe(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

MonoAudio ReadMonoWav(const std::string& path) {
  const RawWav wav = ReadRaw(path);
  if (wav.channels != 1) throw ConfigError(path + ": expected a mono file");
  return {static_cast<double>(wav.sample_rate), DecodeSamples(wav, path)};
}

AmbisonicSignal ReadAmbisonicWav(const std::string& path) {
  const RawWav wav = ReadRaw(path);
  const int root = static_cast<int>(std::lround(std::sqrt(wav.channels)));
  if (root * root != wav.channels) {
    throw ConfigError(path + ": channel count is not (L+1)^2");
  }
  const std::vector<double> interleaved = DecodeSamples(wav, path);
  const long frames = static_cast<long>(interleaved.size() / wav.channels);
  AmbisonicSignal sig{static_cast<double>(wav.sample_rate),
                      SignalMatrix(wav.channels, frames)};
  for (long t = 0; t < frames; ++t) {
    for (int c = 0; c < wav.channels; ++c) {
      sig.channels(c, t) = interleaved[t * wav.channels + c];
    }
  }
  return sig;
}

void WriteFloatWav(const AmbisonicSignal& sig, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  const std::uint16_t channels = static_cast<std::uint16_t>(sig.num_channels());
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(sig.fs));
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(sig.num_samples() * channels * 4);
  out.write("RIFF", 4);
  WriteLe<std::uint32_t>(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  WriteLe<std::uint32_t>(out, 16);
  WriteLe<std::uint16_t>(out, kFormatFloat);
  WriteLe<std::uint16_t>(out, channels);
  WriteLe<std::uint32_t>(out, rate);
  WriteLe<std::uint32_t>(out, rate * channels * 4);
  WriteLe<std::uint16_t>(out, static_cast<std::uint16_t>(channels * 4));
  WriteLe<std::uint16_t>(out, 32);
  out.write("data", 4);
  WriteLe<std::uint32_t>(out, data_bytes);
  for (long t = 0; t < sig.num_samples(); ++t) {
    for (int c = 0; c < channels; ++c) {
      WriteLe<float>(out, static_cast<float>(sig.channels(c, t)));
    }
  }
}

}  // namespace gtvv
