// wav-io.cc

// Copyright 2026  The qbe-kws Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "qbe/wav-io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "qbe/qbe-error.h"

namespace qbe {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xfffe;

uint32_t U32(const char *p) {
  const auto *u = reinterpret_cast<const unsigned char *>(p);
  return u[0] | (u[1] << 8) | (u[2] << 16) | (uint32_t(u[3]) << 24);
}

uint16_t U16(const char *p) {
  const auto *u = reinterpret_cast<const unsigned char *>(p);
  return static_cast<uint16_t>(u[0] | (u[1] << 8));
}

[[noreturn]] void Malformed(const std::string &why) {
  throw WavError(WavError::Kind::kMalformed, "malformed WAV: " + why);
}

void PutU32(std::vector<char> *out, uint32_t v) {
  for (int b = 0; b < 4; ++b) out->push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void PutU16(std::vector<char> *out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>(v >> 8));
}

}  // namespace

AudioBuffer DecodeWav(std::span<const char> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    Malformed("missing RIFF/WAVE header");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  std::span<const char> data;
  bool have_data = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char *chunk = bytes.data() + pos;
    const uint32_t size = U32(chunk + 4);
    const size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) Malformed("short fmt chunk");
      format = U16(chunk + 8);
      channels = U16(chunk + 10);
      rate = U32(chunk + 12);
      bits = U16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) Malformed("short WAVE_FORMAT_EXTENSIBLE chunk");
        // First two bytes of the sub-format GUID carry the codec tag.
        format = U16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      // Tolerate a data size that overruns the file (streamed writers).
      const size_t avail = std::min<size_t>(size, bytes.size() - body);
      data = bytes.subspan(body, avail);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) Malformed("no fmt chunk");
  if (!have_data) Malformed("no data chunk");
  if (channels == 0 || rate == 0) Malformed("zero channels or sample rate");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32)
    throw WavError(WavError::Kind::kUnsupportedCodec,
                   "unsupported WAV codec (format tag " + std::to_string(format) +
                       ", " + std::to_string(bits) +
                       " bits); need 16-bit PCM or 32-bit float");

  const size_t bytes_per_sample = bits / 8;
  const size_t frame_bytes = bytes_per_sample * channels;
  const size_t n = data.size() / frame_bytes;
  AudioBuffer out;
  out.sample_rate_hz = static_cast<int>(rate);
  out.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (uint16_t c = 0; c < channels; ++c) {
      const char *p = data.data() + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<int16_t>(U16(p)) / 32768.0;
      } else {
        uint32_t u = U32(p);
        float f;
        std::memcpy(&f, &u, 4);
        if (!std::isfinite(f)) Malformed("non-finite float sample");
        acc += f;
      }
    }
    out.samples[i] = static_cast<float>(std::clamp(acc / channels, -1.0, 1.0));
  }
  return out;
}

AudioBuffer ReadWav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw WavError(WavError::Kind::kMissingFile, "cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  try {
    return DecodeWav(bytes);
  } catch (const WavError &e) {
    throw WavError(e.kind(), path.string() + ": " + e.what());
  }
}

void WriteWav16(const AudioBuffer &audio, const std::filesystem::path &path) {
  const uint32_t data_bytes = static_cast<uint32_t>(audio.samples.size() * 2);
  std::vector<char> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(&out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(&out, 16);
  PutU16(&out, kFormatPcm);
  PutU16(&out, 1);
  PutU32(&out, static_cast<uint32_t>(audio.sample_rate_hz));
  PutU32(&out, static_cast<uint32_t>(audio.sample_rate_hz) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(&out, data_bytes);
  for (float s : audio.samples) {
    const long v = std::lround(std::clamp<double>(s, -1.0, 1.0) * 32768.0);
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(std::clamp(v, -32768L, 32767L))));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error("write failed for " + path.string());
}

AudioBuffer SliceAudio(const AudioBuffer &audio, double start_s, double end_s) {
  const double sr = audio.sample_rate_hz;
  const auto n = static_cast<int64_t>(audio.samples.size());
  auto clamp = [n](double v) {
    return static_cast<int64_t>(std::clamp(v, 0.0, static_cast<double>(n)));
  };
  const int64_t begin = clamp(std::floor(start_s * sr));
  const int64_t end = clamp(std::ceil(end_s * sr));
  AudioBuffer out;
  out.sample_rate_hz = audio.sample_rate_hz;
  if (end > begin)
    out.samples.assign(audio.samples.begin() + begin, audio.samples.begin() + end);
  return out;
}

}  // namespace qbe
