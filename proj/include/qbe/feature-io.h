// qbe/feature-io.h

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

#ifndef QBE_FEATURE_IO_H_
#define QBE_FEATURE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qbe {

// Frames are stored frame-major so that each frame is a contiguous row.
using FrameMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Layer key for features that do not come from a layered encoder (MFCC).
inline constexpr int kNoLayer = -1;

/// One recording (or query) as a time-ordered matrix of frame vectors.
/// Immutable once constructed; the constructor enforces n_frames >= 1,
/// dim >= 1, finite values and a positive frame rate.
class FeatureSequence {
 public:
  FeatureSequence(FrameMatrix frames, float frame_rate_hz,
                  std::string source_id, int layer = kNoLayer);

  const FrameMatrix &frames() const { return frames_; }
  float frame_rate_hz() const { return frame_rate_hz_; }
  const std::string &source_id() const { return source_id_; }
  int layer() const { return layer_; }

  int64_t NumFrames() const { return frames_.rows(); }
  int64_t Dim() const { return frames_.cols(); }
  double DurationSeconds() const { return NumFrames() / double(frame_rate_hz_); }

  std::span<const float> Frame(int64_t i) const {
    return {frames_.data() + i * frames_.cols(),
            static_cast<size_t>(frames_.cols())};
  }

  bool operator==(const FeatureSequence &other) const;

 private:
  FrameMatrix frames_;
  float frame_rate_hz_;
  std::string source_id_;
  int layer_;
};

/// A forced-alignment word span, in seconds from the start of the recording.
struct WordSpan {
  std::string word;
  double start_s = 0.0;
  double end_s = 0.0;
};

// Half-open range of frame indices.
struct FrameRange {
  int64_t begin = 0;
  int64_t end = 0;
  int64_t size() const { return end - begin; }
};

// begin = floor(start_s * rate), end = ceil(end_s * rate), both clamped to
// [0, n_frames].
FrameRange SpanToFrames(double start_s, double end_s, double frame_rate_hz,
                        int64_t n_frames);

/// Extracts the frames covered by `span`. The span may overrun the end of
/// the sequence by at most one frame; anything that rounds to an empty range
/// is a DataError naming the span.
FeatureSequence SliceBySpan(const FeatureSequence &seq, const WordSpan &span);

// Binary codec. See README.md for the byte layout.
inline constexpr char kFeatureMagic[4] = {'Q', 'B', 'E', 'F'};
inline constexpr uint16_t kFeatureFormatVersion = 1;

std::vector<char> EncodeFeatureSequence(const FeatureSequence &seq);
FeatureSequence DecodeFeatureSequence(std::span<const char> bytes);

void WriteFeatureFile(const FeatureSequence &seq,
                      const std::filesystem::path &path);
FeatureSequence ReadFeatureFile(const std::filesystem::path &path);

}  // namespace qbe

#endif  // QBE_FEATURE_IO_H_
