// tests/unit/feature-io-test.cc

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

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <doctest.h>

#include "qbe/feature-io.h"
#include "qbe/qbe-error.h"
#include "test-util.h"

using namespace qbe;
using qbe::testing::RandomSequence;
using qbe::testing::TempDir;

namespace {

FeatureFileError::Kind DecodeErrorKind(const std::vector<char> &bytes) {
  try {
    DecodeFeatureSequence(bytes);
  } catch (const FeatureFileError &e) {
    return e.kind();
  }
  FAIL("decode unexpectedly succeeded");
  return FeatureFileError::Kind::kIo;
}

template <typename T>
void Poke(std::vector<char> *bytes, size_t offset, T value) {
  std::memcpy(bytes->data() + offset, &value, sizeof(T));
}

}  // namespace

TEST_CASE("feature file size is header plus payload") {
  std::mt19937_64 rng(1);
  for (const std::string &id : std::vector<std::string>{"", "a", "utt_0001", std::string(300, 'x')}) {
    FeatureSequence s = RandomSequence(rng, 7, 5, id, 3);
    std::vector<char> b = EncodeFeatureSequence(s);
    CHECK(b.size() == 24 + id.size() + 4 * 7 * 5);
  }
}

TEST_CASE("feature file header layout is little-endian and fixed") {
  FrameMatrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  std::vector<char> b = EncodeFeatureSequence(FeatureSequence(m, 49.0f, "ab", 7));
  REQUIRE(b.size() == 24 + 2 + 24);
  CHECK(std::memcmp(b.data(), "QBEF", 4) == 0);
  auto u8 = [&](size_t i) { return static_cast<unsigned>(static_cast<unsigned char>(b[i])); };
  CHECK(u8(4) == 1);  // version
  CHECK(u8(5) == 0);
  CHECK(u8(6) == 0);  // reserved
  CHECK(u8(7) == 0);
  float rate;
  std::memcpy(&rate, b.data() + 8, 4);
  CHECK(rate == 49.0f);
  CHECK(u8(12) == 2);  // n_frames
  CHECK(u8(16) == 3);  // dim
  CHECK(u8(20) == 2);  // id length
  CHECK(b[22] == 'a');
  CHECK(b[23] == 'b');
  CHECK(u8(24) == 7);  // layer, i16
  CHECK(u8(25) == 0);
  float first;
  std::memcpy(&first, b.data() + 26, 4);
  CHECK(first == 1.0f);
}

TEST_CASE("no-layer marker encodes as -1") {
  FrameMatrix m = FrameMatrix::Ones(1, 1);
  std::vector<char> b = EncodeFeatureSequence(FeatureSequence(m, 100.0f, "", kNoLayer));
  int16_t layer;
  std::memcpy(&layer, b.data() + 20 + 2, 2);
  CHECK(layer == -1);
  CHECK(DecodeFeatureSequence(b).layer() == kNoLayer);
}

TEST_CASE("feature files round-trip bit-exactly") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> n(1, 40), d(1, 20), layer(-1, 24);
  for (int t = 0; t < 200; ++t) {
    FeatureSequence s = RandomSequence(rng, n(rng), d(rng), "id" + std::to_string(t),
                                       layer(rng), 49.0f + t);
    FeatureSequence back = DecodeFeatureSequence(EncodeFeatureSequence(s));
    CHECK(back == s);
  }
  TempDir dir("fio");
  FeatureSequence s = RandomSequence(rng, 13, 4, "on-disk", 2);
  WriteFeatureFile(s, dir / "x.qbef");
  CHECK(ReadFeatureFile(dir / "x.qbef") == s);
}

TEST_CASE("corrupt feature files are rejected with a specific kind") {
  std::mt19937_64 rng(3);
  const std::vector<char> good = EncodeFeatureSequence(RandomSequence(rng, 4, 3, "abc", 1));
  using K = FeatureFileError::Kind;

  SUBCASE("bad magic") {
    std::vector<char> b = good;
    b[0] = 'X';
    CHECK(DecodeErrorKind(b) == K::kBadMagic);
  }
  SUBCASE("version mismatch") {
    std::vector<char> b = good;
    Poke<uint16_t>(&b, 4, 2);
    CHECK(DecodeErrorKind(b) == K::kVersionMismatch);
  }
  SUBCASE("truncated payload") {
    std::vector<char> b(good.begin(), good.end() - 1);
    CHECK(DecodeErrorKind(b) == K::kTruncated);
  }
  SUBCASE("truncated header") {
    std::vector<char> b(good.begin(), good.begin() + 10);
    CHECK(DecodeErrorKind(b) == K::kTruncated);
  }
  SUBCASE("trailing bytes") {
    std::vector<char> b = good;
    b.push_back(0);
    CHECK(DecodeErrorKind(b) == K::kMalformed);
  }
  SUBCASE("NaN payload") {
    std::vector<char> b = good;
    Poke<float>(&b, 24 + 3 + 4, std::numeric_limits<float>::quiet_NaN());
    CHECK(DecodeErrorKind(b) == K::kNonFinite);
  }
  SUBCASE("zero frames") {
    std::vector<char> b = good;
    Poke<uint32_t>(&b, 12, 0);
    CHECK_THROWS_AS(DecodeFeatureSequence(b), FeatureFileError);
  }
  SUBCASE("non-positive rate") {
    std::vector<char> b = good;
    Poke<float>(&b, 8, 0.0f);
    CHECK_THROWS_AS(DecodeFeatureSequence(b), FeatureFileError);
  }
  SUBCASE("missing file") {
    try {
      ReadFeatureFile("/nonexistent/dir/f.qbef");
      FAIL("expected an error");
    } catch (const FeatureFileError &e) {
      CHECK(e.kind() == K::kMissingFile);
      CHECK(std::string(e.what()).find("/nonexistent/dir/f.qbef") != std::string::npos);
    }
  }
}

TEST_CASE("writer refuses non-finite values") {
  FrameMatrix m = FrameMatrix::Zero(2, 2);
  m(1, 1) = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(FeatureSequence(m, 49.0f, "x"), DataError);
}

TEST_CASE("span to frame conversion") {
  // 2 s of 49 Hz frames; [1, 2) covers frames 49..97.
  FrameRange r = SpanToFrames(1.0, 2.0, 49.0, 98);
  CHECK(r.begin == 49);
  CHECK(r.end == 98);
  r = SpanToFrames(0.25, 0.5, 100.0, 100);
  CHECK(r.begin == 25);
  CHECK(r.end == 50);
  // Partial frames are included at both ends.
  r = SpanToFrames(0.255, 0.501, 100.0, 100);
  CHECK(r.begin == 25);
  CHECK(r.end == 51);
  // Clamping.
  r = SpanToFrames(0.0, 5.0, 100.0, 100);
  CHECK(r.end == 100);
}

TEST_CASE("adjacent spans partition the frames they cover") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 500; ++t) {
    const double rate = 49.0;
    const int64_t n = 200;
    // Split points on the frame grid.
    int64_t a = static_cast<int64_t>(u(rng) * 10), b = a + 1 + static_cast<int64_t>(u(rng) * 10),
            c = b + 1 + static_cast<int64_t>(u(rng) * 10);
    FrameRange left = SpanToFrames(a / rate, b / rate, rate, n);
    FrameRange right = SpanToFrames(b / rate, c / rate, rate, n);
    CHECK(left.size() + right.size() >= c - a);
    CHECK(left.begin <= right.begin);
    CHECK(left.end <= right.end);
  }
}

TEST_CASE("frame range is monotone in the span") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int t = 0; t < 1000; ++t) {
    double s = u(rng), e = s + u(rng), s2 = std::max(0.0, s - u(rng) / 4), e2 = e + u(rng) / 4;
    FrameRange inner = SpanToFrames(s, e, 49.0, 1000);
    FrameRange outer = SpanToFrames(s2, e2, 49.0, 1000);
    CHECK(outer.begin <= inner.begin);
    CHECK(outer.end >= inner.end);
  }
}

TEST_CASE("slicing by span") {
  std::mt19937_64 rng(6);
  FeatureSequence s = RandomSequence(rng, 98, 4, "rec", 5);
  FeatureSequence cut = SliceBySpan(s, {"w", 1.0, 2.0});
  CHECK(cut.NumFrames() == 49);
  CHECK(cut.source_id() == "rec");
  CHECK(cut.layer() == 5);
  CHECK(cut.frames().row(0) == s.frames().row(49));

  // A span ending one frame past the end is clamped, not rejected.
  CHECK(SliceBySpan(s, {"w", 1.9, 99.0 / 49.0}).NumFrames() == 5);
  CHECK_THROWS_AS(SliceBySpan(s, {"w", 1.0, 3.0}), DataError);
  CHECK_THROWS_AS(SliceBySpan(s, {"w", 1.0, 1.0}), DataError);
  CHECK_THROWS_AS(SliceBySpan(s, {"w", -0.1, 1.0}), DataError);
  CHECK_THROWS_AS(SliceBySpan(s, {"w", 2.0, 2.01}), DataError);
}
