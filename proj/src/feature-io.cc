// feature-io.cc

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

#include "qbe/feature-io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "qbe/qbe-error.h"

namespace qbe {

namespace {

// Fixed part of the header, excluding the variable-length source id.
constexpr size_t kFixedHeaderBytes = 4 + 2 + 2 + 4 + 4 + 4 + 2;
constexpr size_t kLayerBytes = 2;

template <typename T>
void PutLe(std::vector<char> *out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  using U = std::conditional_t<sizeof(T) == 2, uint16_t, uint32_t>;
  U bits;
  std::memcpy(&bits, &value, sizeof(T));
  for (size_t b = 0; b < sizeof(T); ++b)
    out->push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

class LeReader {
 public:
  explicit LeReader(std::span<const char> bytes) : bytes_(bytes) {}

  template <typename T>
  T Get(const char *what) {
    using U = std::conditional_t<sizeof(T) == 2, uint16_t, uint32_t>;
    Need(sizeof(T), what);
    U bits = 0;
    for (size_t b = 0; b < sizeof(T); ++b)
      bits |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + b]))
              << (8 * b);
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, &bits, sizeof(T));
    return value;
  }

  std::string GetString(size_t n, const char *what) {
    Need(n, what);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }

  void Need(size_t n, const char *what) const {
    if (bytes_.size() - pos_ < n) {
      std::ostringstream msg;
      msg << "feature file truncated while reading " << what << " (need " << n
          << " bytes at offset " << pos_ << ", have " << bytes_.size() - pos_
          << ")";
      throw FeatureFileError(FeatureFileError::Kind::kTruncated, msg.str());
    }
  }

  size_t pos() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const char> bytes_;
  size_t pos_ = 0;
};

}  // namespace

FeatureSequence::FeatureSequence(FrameMatrix frames, float frame_rate_hz,
                                 std::string source_id, int layer)
    : frames_(std::move(frames)),
      frame_rate_hz_(frame_rate_hz),
      source_id_(std::move(source_id)),
      layer_(layer) {
  if (frames_.rows() < 1 || frames_.cols() < 1) {
    std::ostringstream msg;
    msg << "feature sequence '" << source_id_ << "' has shape "
        << frames_.rows() << "x" << frames_.cols()
        << "; need at least one frame of dimension >= 1";
    throw DataError(msg.str());
  }
  if (!(frame_rate_hz_ > 0.0f) || !std::isfinite(frame_rate_hz_))
    throw DataError("feature sequence '" + source_id_ +
                    "' has a non-positive frame rate");
  if (layer_ < kNoLayer || layer_ > std::numeric_limits<int16_t>::max())
    throw DataError("feature sequence '" + source_id_ +
                    "' has an invalid layer index " + std::to_string(layer_));
  if (!frames_.allFinite())
    throw DataError("feature sequence '" + source_id_ +
                    "' contains non-finite values");
}

bool FeatureSequence::operator==(const FeatureSequence &other) const {
  // Bitwise comparison of the payload, so -0.0f and 0.0f differ.
  return frame_rate_hz_ == other.frame_rate_hz_ &&
         source_id_ == other.source_id_ && layer_ == other.layer_ &&
         frames_.rows() == other.frames_.rows() &&
         frames_.cols() == other.frames_.cols() &&
         std::memcmp(frames_.data(), other.frames_.data(),
                     sizeof(float) * frames_.size()) == 0;
}

FrameRange SpanToFrames(double start_s, double end_s, double frame_rate_hz,
                        int64_t n_frames) {
  auto clamp = [n_frames](double v) -> int64_t {
    if (v <= 0.0) return 0;
    if (v >= static_cast<double>(n_frames)) return n_frames;
    return static_cast<int64_t>(v);
  };
  return {clamp(std::floor(start_s * frame_rate_hz)),
          clamp(std::ceil(end_s * frame_rate_hz))};
}

FeatureSequence SliceBySpan(const FeatureSequence &seq, const WordSpan &span) {
  auto describe = [&]() {
    std::ostringstream s;
    s << "span '" << span.word << "' [" << span.start_s << ", " << span.end_s
      << ") s of '" << seq.source_id() << "'";
    return s.str();
  };
  if (!(span.start_s >= 0.0) || !(span.end_s > span.start_s))
    throw DataError(describe() + " is not a valid time span");
  const double rate = seq.frame_rate_hz();
  const double slack = (seq.NumFrames() + 1) / rate;
  if (span.end_s > slack) {
    std::ostringstream msg;
    msg << describe() << " ends beyond the recording (" << seq.DurationSeconds()
        << " s)";
    throw DataError(msg.str());
  }
  FrameRange range = SpanToFrames(span.start_s, span.end_s, rate,
                                  seq.NumFrames());
  if (range.size() < 1)
    throw DataError(describe() + " is shorter than one frame");
  FrameMatrix frames = seq.frames().middleRows(range.begin, range.size());
  return FeatureSequence(std::move(frames), seq.frame_rate_hz(),
                         seq.source_id(), seq.layer());
}

std::vector<char> EncodeFeatureSequence(const FeatureSequence &seq) {
  if (!seq.frames().allFinite())
    throw FeatureFileError(FeatureFileError::Kind::kNonFinite,
                           "refusing to write non-finite values for '" +
                               seq.source_id() + "'");
  if (seq.source_id().size() > std::numeric_limits<uint16_t>::max())
    throw FeatureFileError(FeatureFileError::Kind::kMalformed,
                           "source id longer than 65535 bytes");
  if (seq.NumFrames() > std::numeric_limits<uint32_t>::max() ||
      seq.Dim() > std::numeric_limits<uint32_t>::max())
    throw FeatureFileError(FeatureFileError::Kind::kMalformed,
                           "feature matrix too large for the file format");

  std::vector<char> out;
  out.reserve(kFixedHeaderBytes + seq.source_id().size() + kLayerBytes +
              sizeof(float) * seq.frames().size());
  out.insert(out.end(), std::begin(kFeatureMagic), std::end(kFeatureMagic));
  PutLe<uint16_t>(&out, kFeatureFormatVersion);
  PutLe<uint16_t>(&out, 0);
  PutLe<float>(&out, seq.frame_rate_hz());
  PutLe<uint32_t>(&out, static_cast<uint32_t>(seq.NumFrames()));
  PutLe<uint32_t>(&out, static_cast<uint32_t>(seq.Dim()));
  PutLe<uint16_t>(&out, static_cast<uint16_t>(seq.source_id().size()));
  out.insert(out.end(), seq.source_id().begin(), seq.source_id().end());
  PutLe<int16_t>(&out, static_cast<int16_t>(seq.layer()));
  const float *data = seq.frames().data();
  if constexpr (std::endian::native == std::endian::little) {
    const char *raw = reinterpret_cast<const char *>(data);
    out.insert(out.end(), raw, raw + sizeof(float) * seq.frames().size());
  } else {
    for (Eigen::Index i = 0; i < seq.frames().size(); ++i)
      PutLe<float>(&out, data[i]);
  }
  return out;
}

FeatureSequence DecodeFeatureSequence(std::span<const char> bytes) {
  LeReader in(bytes);
  in.Need(4, "magic");
  std::string magic = in.GetString(4, "magic");
  if (std::memcmp(magic.data(), kFeatureMagic, 4) != 0)
    throw FeatureFileError(FeatureFileError::Kind::kBadMagic,
                           "not a feature file (bad magic)");
  uint16_t version = in.Get<uint16_t>("version");
  if (version != kFeatureFormatVersion)
    throw FeatureFileError(FeatureFileError::Kind::kVersionMismatch,
                           "unsupported feature file version " +
                               std::to_string(version));
  uint16_t reserved = in.Get<uint16_t>("reserved");
  float rate = in.Get<float>("frame rate");
  uint32_t n_frames = in.Get<uint32_t>("frame count");
  uint32_t dim = in.Get<uint32_t>("dimension");
  uint16_t id_len = in.Get<uint16_t>("source id length");
  std::string source_id = in.GetString(id_len, "source id");
  int16_t layer = in.Get<int16_t>("layer");

  if (reserved != 0)
    throw FeatureFileError(FeatureFileError::Kind::kMalformed,
                           "reserved header field is not zero");
  if (!(rate > 0.0f) || !std::isfinite(rate))
    throw FeatureFileError(FeatureFileError::Kind::kMalformed,
                           "frame rate must be positive");
  if (n_frames == 0 || dim == 0)
    throw FeatureFileError(FeatureFileError::Kind::kMalformed,
                           "empty feature matrix");
  if (layer < kNoLayer)
    throw FeatureFileError(FeatureFileError::Kind::kMalformed,
                           "invalid layer index " + std::to_string(layer));

  const uint64_t n_values = uint64_t(n_frames) * dim;
  const uint64_t payload = n_values * sizeof(float);
  if (in.remaining() < payload) {
    std::ostringstream msg;
    msg << "feature file truncated: payload needs " << payload
        << " bytes, found " << in.remaining();
    throw FeatureFileError(FeatureFileError::Kind::kTruncated, msg.str());
  }
  if (in.remaining() > payload)
    throw FeatureFileError(FeatureFileError::Kind::kMalformed,
                           "trailing bytes after feature payload");

  FrameMatrix frames(n_frames, dim);
  float *data = frames.data();
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(data, bytes.data() + in.pos(), payload);
  } else {
    for (uint64_t i = 0; i < n_values; ++i) data[i] = in.Get<float>("payload");
  }
  for (uint64_t i = 0; i < n_values; ++i) {
    if (!std::isfinite(data[i])) {
      std::ostringstream msg;
      msg << "non-finite value at frame " << i / dim << ", dim " << i % dim;
      throw FeatureFileError(FeatureFileError::Kind::kNonFinite, msg.str());
    }
  }
  return FeatureSequence(std::move(frames), rate, std::move(source_id), layer);
}

void WriteFeatureFile(const FeatureSequence &seq,
                      const std::filesystem::path &path) {
  std::vector<char> bytes = EncodeFeatureSequence(seq);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw FeatureFileError(FeatureFileError::Kind::kIo,
                           "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw FeatureFileError(FeatureFileError::Kind::kIo,
                           "write failed for " + path.string());
}

FeatureSequence ReadFeatureFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FeatureFileError(FeatureFileError::Kind::kMissingFile,
                           "cannot open feature file " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  try {
    return DecodeFeatureSequence(bytes);
  } catch (const FeatureFileError &e) {
    throw FeatureFileError(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace qbe
