// qbe/wav-io.h

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

#ifndef QBE_WAV_IO_H_
#define QBE_WAV_IO_H_

#include <filesystem>
#include <span>
#include <vector>

namespace qbe {

struct AudioBuffer {
  // Mono, in [-1, 1].
  std::vector<float> samples;
  int sample_rate_hz = 16000;

  double DurationSeconds() const {
    return samples.size() / double(sample_rate_hz);
  }
};

/// Reads RIFF/WAVE with 16-bit PCM or 32-bit IEEE float samples (plain or
/// WAVE_FORMAT_EXTENSIBLE). Multi-channel audio is averaged to mono; the
/// sample rate is kept as-is. Throws WavError.
AudioBuffer ReadWav(const std::filesystem::path &path);
AudioBuffer DecodeWav(std::span<const char> bytes);

// 16-bit PCM mono writer, samples clipped to [-1, 1).
void WriteWav16(const AudioBuffer &audio, const std::filesystem::path &path);

// Samples [floor(start_s * sr), ceil(end_s * sr)), clamped to the buffer.
AudioBuffer SliceAudio(const AudioBuffer &audio, double start_s, double end_s);

}  // namespace qbe

#endif  // QBE_WAV_IO_H_
