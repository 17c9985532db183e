// tests/unit/wav-mfcc-test.cc

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
#include <complex>
#include <cstring>
#include <numbers>

#include <doctest.h>

#include "qbe/mfcc.h"
#include "qbe/qbe-error.h"
#include "qbe/wav-io.h"
#include "test-util.h"

using namespace qbe;
using qbe::testing::TempDir;

namespace {

constexpr double kPi = std::numbers::pi;

// Minimal RIFF writer, independent of the library's.
std::vector<char> RawWav(uint16_t format, uint16_t channels, uint32_t rate,
                         uint16_t bits, const std::vector<char> &data) {
  std::vector<char> b;
  auto put = [&](const void *p, size_t n) {
    const char *c = static_cast<const char *>(p);
    b.insert(b.end(), c, c + n);
  };
  auto u32 = [&](uint32_t v) { put(&v, 4); };
  auto u16 = [&](uint16_t v) { put(&v, 2); };
  put("RIFF", 4);
  u32(36 + static_cast<uint32_t>(data.size()));
  put("WAVE", 4);
  put("fmt ", 4);
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<uint16_t>(channels * bits / 8));
  u16(bits);
  put("data", 4);
  u32(static_cast<uint32_t>(data.size()));
  put(data.data(), data.size());
  return b;
}

template <typename T>
std::vector<char> Bytes(const std::vector<T> &v) {
  std::vector<char> out(v.size() * sizeof(T));
  std::memcpy(out.data(), v.data(), out.size());
  return out;
}

AudioBuffer Tone(double hz, double seconds, double amp = 0.5, int rate = 16000) {
  AudioBuffer a;
  a.sample_rate_hz = rate;
  a.samples.resize(static_cast<size_t>(seconds * rate));
  for (size_t t = 0; t < a.samples.size(); ++t)
    a.samples[t] = static_cast<float>(amp * std::sin(2 * kPi * hz * t / rate));
  return a;
}

// Reference MFCC: direct DFT, filterbank and DCT written out longhand.
Eigen::MatrixXd ReferenceMfcc(const AudioBuffer &a) {
  const int sr = 16000, win = 400, hop = 160, nfft = 512, nfilt = 26, ncep = 13;
  const int n = static_cast<int>(a.samples.size());
  const int frames = 1 + (n - win) / hop;
  std::vector<double> y(n);
  for (int t = 0; t < n; ++t) y[t] = a.samples[t] - (t ? 0.97 * a.samples[t - 1] : 0.0);
  auto mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  Eigen::MatrixXd out(frames, ncep);
  for (int f = 0; f < frames; ++f) {
    std::vector<double> mag(nfft / 2 + 1);
    for (int k = 0; k <= nfft / 2; ++k) {
      std::complex<double> acc = 0.0;
      for (int i = 0; i < win; ++i) {
        const double w = 0.54 - 0.46 * std::cos(2 * kPi * i / (win - 1));
        acc += y[f * hop + i] * w * std::polar(1.0, -2 * kPi * k * i / nfft);
      }
      mag[k] = std::abs(acc);
    }
    std::vector<double> logmel(nfilt);
    for (int m = 0; m < nfilt; ++m) {
      const double top = mel(sr / 2.0);
      const double lo = hz(top * m / (nfilt + 1)), c = hz(top * (m + 1) / (nfilt + 1)),
                   hi = hz(top * (m + 2) / (nfilt + 1));
      double e = 0.0;
      for (int k = 0; k <= nfft / 2; ++k) {
        const double fk = double(k) * sr / nfft;
        double w = 0.0;
        if (fk > lo && fk <= c) w = (fk - lo) / (c - lo);
        else if (fk > c && fk < hi) w = (hi - fk) / (hi - c);
        e += w * mag[k];
      }
      logmel[m] = std::log(std::max(e, 1e-10));
    }
    for (int q = 0; q < ncep; ++q) {
      double s = 0.0;
      for (int m = 0; m < nfilt; ++m) s += logmel[m] * std::cos(kPi * q * (m + 0.5) / nfilt);
      out(f, q) = s * std::sqrt((q == 0 ? 1.0 : 2.0) / nfilt);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("PCM16 decoding and round trip") {
  std::vector<int16_t> pcm = {0, 32767, -32768, 16384};
  AudioBuffer a = DecodeWav(RawWav(1, 1, 16000, 16, Bytes(pcm)));
  REQUIRE(a.samples.size() == 4);
  CHECK(a.sample_rate_hz == 16000);
  CHECK(a.samples[1] == doctest::Approx(0.99997).epsilon(1e-5));
  CHECK(a.samples[2] == -1.0f);
  CHECK(a.samples[3] == 0.5f);

  TempDir dir("wav");
  AudioBuffer tone = Tone(440, 1.0);
  WriteWav16(tone, dir / "t.wav");
  AudioBuffer back = ReadWav(dir / "t.wav");
  CHECK(back.samples.size() == 16000);
  CHECK(back.DurationSeconds() == 1.0);
  for (size_t t = 0; t < back.samples.size(); t += 97)
    CHECK(std::abs(back.samples[t] - tone.samples[t]) <= 1.0 / 32768);
}

TEST_CASE("float and multichannel WAV") {
  std::vector<float> f = {0.25f, -0.75f, 1.0f, 0.0f};
  AudioBuffer a = DecodeWav(RawWav(3, 2, 8000, 32, Bytes(f)));
  REQUIRE(a.samples.size() == 2);
  CHECK(a.sample_rate_hz == 8000);
  CHECK(a.samples[0] == doctest::Approx(-0.25));
  CHECK(a.samples[1] == doctest::Approx(0.5));
}

TEST_CASE("unsupported and malformed WAV") {
  std::vector<char> ulaw(100, 0);
  try {
    DecodeWav(RawWav(7, 1, 8000, 8, ulaw));
    FAIL("expected an error");
  } catch (const WavError &e) {
    CHECK(e.kind() == WavError::Kind::kUnsupportedCodec);
  }
  std::vector<char> junk = {'R', 'I', 'F', 'F', 0, 0};
  CHECK_THROWS_AS(DecodeWav(junk), WavError);
  CHECK_THROWS_AS(ReadWav("/nonexistent.wav"), WavError);
}

TEST_CASE("audio slicing") {
  AudioBuffer a = Tone(100, 1.0);
  AudioBuffer s = SliceAudio(a, 0.25, 0.5);
  CHECK(s.samples.size() == 4000);
  CHECK(s.samples[0] == a.samples[4000]);
}

TEST_CASE("MFCC framing") {
  MfccComputer m(MfccConfig{}, 16000);
  CHECK(m.WindowSamples() == 400);
  CHECK(m.HopSamples() == 160);
  CHECK(m.FftSize() == 512);
  CHECK(m.FrameRateHz() == 100.0f);
  CHECK(m.NumFrames(16000) == 98);
  CHECK(m.NumFrames(399) == 0);
  CHECK(m.NumFrames(400) == 1);
  FeatureSequence f = m.Compute(Tone(300, 1.0), "tone");
  CHECK(f.NumFrames() == 98);
  CHECK(f.Dim() == 13);
  CHECK(f.layer() == kNoLayer);
  CHECK(f.frame_rate_hz() == 100.0f);
}

TEST_CASE("MFCC matches a longhand reference") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.1);
  AudioBuffer a = Tone(523, 0.06);
  for (float &s : a.samples) s += static_cast<float>(g(rng));
  Eigen::MatrixXd ref = ReferenceMfcc(a);
  FeatureSequence got = ComputeMfcc(a, {}, "x");
  REQUIRE(got.NumFrames() == ref.rows());
  for (int i = 0; i < ref.rows(); ++i)
    for (int j = 0; j < 13; ++j)
      CHECK(got.frames()(i, j) == doctest::Approx(ref(i, j)).epsilon(1e-5).scale(1.0));
}

TEST_CASE("silence gives the DCT of a constant floor") {
  AudioBuffer silence;
  silence.samples.assign(16000, 0.0f);
  FeatureSequence f = ComputeMfcc(silence, {}, "s");
  const double c0 = std::sqrt(26.0) * std::log(1e-10);
  for (int i = 0; i < f.NumFrames(); ++i) {
    CHECK(f.frames()(i, 0) == doctest::Approx(c0).epsilon(1e-6));
    for (int j = 1; j < 13; ++j) CHECK(std::abs(f.frames()(i, j)) < 1e-4);
  }
}

TEST_CASE("a pure tone peaks in the filter centred nearest to it") {
  MfccComputer m(MfccConfig{}, 16000);
  Eigen::MatrixXd e = m.LogMelEnergies(Tone(1000, 0.5));
  Eigen::Index peak;
  e.colwise().mean().maxCoeff(&peak);
  std::vector<double> centres = m.FilterCentersHz();
  size_t nearest = 0;
  for (size_t i = 1; i < centres.size(); ++i)
    if (std::abs(centres[i] - 1000) < std::abs(centres[nearest] - 1000)) nearest = i;
  CHECK(static_cast<size_t>(peak) == nearest);
}

TEST_CASE("DCT matrix is orthonormal") {
  for (int n : {1, 13, 26, 40}) {
    Eigen::MatrixXd d = DctMatrix(n);
    CHECK((d * d.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK(MelToHz(HzToMel(1234.5)) == doctest::Approx(1234.5).epsilon(1e-12));
  CHECK(HzToMel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)));
}

TEST_CASE("shifting audio by one hop shifts the frames") {
  std::mt19937_64 rng(2);
  std::normal_distribution<float> g(0.0f, 0.2f);
  AudioBuffer a;
  a.samples.resize(8000);
  for (float &s : a.samples) s = g(rng);
  AudioBuffer shifted = a;
  shifted.samples.erase(shifted.samples.begin(), shifted.samples.begin() + 160);
  FeatureSequence x = ComputeMfcc(a, {}, "a"), y = ComputeMfcc(shifted, {}, "b");
  REQUIRE(y.NumFrames() == x.NumFrames() - 1);
  // Frame 0 of the shifted signal differs only through the pre-emphasis
  // of its first sample.
  double worst = 0.0;
  for (int i = 1; i < y.NumFrames(); ++i)
    worst = std::max(worst, double((y.frames().row(i) - x.frames().row(i + 1)).cwiseAbs().maxCoeff()));
  CHECK(worst <= 1e-6);
}

TEST_CASE("amplitude only moves c0") {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> g(0.0f, 0.1f);
  AudioBuffer a;
  a.samples.resize(4000);
  for (float &s : a.samples) s = g(rng);
  AudioBuffer b = a;
  for (float &s : b.samples) s *= 4.0f;
  FeatureSequence x = ComputeMfcc(a, {}, "a"), y = ComputeMfcc(b, {}, "b");
  for (int i = 0; i < x.NumFrames(); ++i) {
    CHECK(y.frames()(i, 0) - x.frames()(i, 0) ==
          doctest::Approx(std::sqrt(26.0) * std::log(4.0)).epsilon(1e-5));
    for (int j = 1; j < 13; ++j) CHECK(std::abs(y.frames()(i, j) - x.frames()(i, j)) < 1e-5);
  }
}

TEST_CASE("unexpected sample rates are rejected") {
  AudioBuffer a = Tone(100, 0.1, 0.5, 8000);
  CHECK_THROWS_AS(ComputeMfcc(a, {}, "x"), DataError);
  MfccConfig any;
  any.expected_sample_rate_hz = 0;
  CHECK(ComputeMfcc(a, any, "x").Dim() == 13);
  AudioBuffer tiny;
  tiny.samples.assign(10, 0.1f);
  CHECK_THROWS_AS(ComputeMfcc(tiny, {}, "x"), DataError);
}
