// mfcc.cc

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

#include "qbe/mfcc.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "qbe/qbe-error.h"

namespace qbe {

Eigen::MatrixXd DctMatrix(int n) {
  Eigen::MatrixXd d(n, n);
  const double pi = std::numbers::pi;
  for (int k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (int i = 0; i < n; ++i)
      d(k, i) = scale * std::cos(pi * k * (2.0 * i + 1.0) / (2.0 * n));
  }
  return d;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MfccComputer::MfccComputer(const MfccConfig &config, int sample_rate_hz)
    : config_(config), sample_rate_hz_(sample_rate_hz) {
  if (sample_rate_hz_ <= 0) throw DataError("sample rate must be positive");
  if (config_.expected_sample_rate_hz > 0 &&
      sample_rate_hz_ != config_.expected_sample_rate_hz) {
    std::ostringstream msg;
    msg << "audio sample rate " << sample_rate_hz_ << " Hz does not match the "
        << "expected " << config_.expected_sample_rate_hz
        << " Hz (resampling is not supported)";
    throw DataError(msg.str());
  }
  if (!(config_.window_s > 0.0) || !(config_.hop_s > 0.0))
    throw DataError("MFCC window and hop must be positive");
  if (config_.n_mel_filters < 1 || config_.n_coeffs < 1 ||
      config_.n_coeffs > config_.n_mel_filters)
    throw DataError("MFCC needs 1 <= n_coeffs <= n_mel_filters");

  window_samples_ = static_cast<int>(std::lround(config_.window_s * sample_rate_hz_));
  hop_samples_ = static_cast<int>(std::lround(config_.hop_s * sample_rate_hz_));
  if (window_samples_ < 1 || hop_samples_ < 1)
    throw DataError("MFCC window or hop shorter than one sample");
  n_fft_ = config_.n_fft;
  if (n_fft_ == 0) {
    n_fft_ = 1;
    while (n_fft_ < window_samples_) n_fft_ *= 2;
  }
  if (n_fft_ < window_samples_ || (n_fft_ & (n_fft_ - 1)) != 0)
    throw DataError("n_fft must be a power of two >= the window length");

  const double pi = std::numbers::pi;
  window_.resize(window_samples_);
  for (int i = 0; i < window_samples_; ++i)
    window_(i) = window_samples_ == 1
        ? 1.0
        : 0.54 - 0.46 * std::cos(2.0 * pi * i / (window_samples_ - 1));

  // Triangles on mel-spaced edges, evaluated at each bin's centre frequency.
  const int n_bins = n_fft_ / 2 + 1;
  const int n_filt = config_.n_mel_filters;
  const double mel_hi = HzToMel(sample_rate_hz_ / 2.0);
  std::vector<double> edges(n_filt + 2);
  for (int e = 0; e < n_filt + 2; ++e)
    edges[e] = MelToHz(mel_hi * e / (n_filt + 1));
  filterbank_ = Eigen::MatrixXd::Zero(n_filt, n_bins);
  for (int f = 0; f < n_filt; ++f) {
    const double lo = edges[f], mid = edges[f + 1], hi = edges[f + 2];
    for (int b = 0; b < n_bins; ++b) {
      const double hz = double(b) * sample_rate_hz_ / n_fft_;
      if (hz > lo && hz < hi)
        filterbank_(f, b) = hz <= mid ? (hz - lo) / (mid - lo) : (hi - hz) / (hi - mid);
    }
  }

  dct_ = DctMatrix(n_filt).topRows(config_.n_coeffs);
}

int64_t MfccComputer::NumFrames(int64_t n_samples) const {
  if (n_samples < window_samples_) return 0;
  return (n_samples - window_samples_) / hop_samples_ + 1;
}

std::vector<double> MfccComputer::FilterCentersHz() const {
  const int n_filt = config_.n_mel_filters;
  const double mel_hi = HzToMel(sample_rate_hz_ / 2.0);
  std::vector<double> centers(n_filt);
  for (int f = 0; f < n_filt; ++f)
    centers[f] = MelToHz(mel_hi * (f + 1) / (n_filt + 1));
  return centers;
}

void MfccComputer::CheckAudio(const AudioBuffer &audio) const {
  if (audio.sample_rate_hz != sample_rate_hz_)
    throw DataError("audio sample rate differs from the MFCC computer's");
  if (NumFrames(static_cast<int64_t>(audio.samples.size())) < 1) {
    std::ostringstream msg;
    msg << "audio too short for one MFCC window (" << audio.samples.size()
        << " samples, need " << window_samples_ << ")";
    throw DataError(msg.str());
  }
  for (float s : audio.samples)
    if (!std::isfinite(s)) throw DataError("audio contains non-finite samples");
}

Eigen::MatrixXd MfccComputer::LogMelEnergies(const AudioBuffer &audio) const {
  CheckAudio(audio);
  const auto n_samples = static_cast<int64_t>(audio.samples.size());
  const int64_t n_frames = NumFrames(n_samples);

  std::vector<double> emphasized(n_samples);
  emphasized[0] = audio.samples[0];
  for (int64_t t = 1; t < n_samples; ++t)
    emphasized[t] = audio.samples[t] - config_.pre_emphasis * audio.samples[t - 1];

  const int n_bins = n_fft_ / 2 + 1;
  Eigen::FFT<double> fft;
  std::vector<double> frame(n_fft_, 0.0);
  std::vector<std::complex<double>> spectrum;
  Eigen::VectorXd magnitude(n_bins);
  Eigen::MatrixXd out(n_frames, config_.n_mel_filters);
  for (int64_t f = 0; f < n_frames; ++f) {
    const int64_t offset = f * hop_samples_;
    for (int i = 0; i < window_samples_; ++i)
      frame[i] = emphasized[offset + i] * window_(i);
    fft.fwd(spectrum, frame);
    for (int b = 0; b < n_bins; ++b) magnitude(b) = std::abs(spectrum[b]);
    Eigen::VectorXd energies = filterbank_ * magnitude;
    for (int m = 0; m < config_.n_mel_filters; ++m)
      out(f, m) = std::log(std::max(energies(m), config_.log_floor));
  }
  return out;
}

FeatureSequence MfccComputer::Compute(const AudioBuffer &audio,
                                      const std::string &source_id) const {
  Eigen::MatrixXd log_mel = LogMelEnergies(audio);
  FrameMatrix coeffs = (log_mel * dct_.transpose()).cast<float>();
  return FeatureSequence(std::move(coeffs), FrameRateHz(), source_id, kNoLayer);
}

FeatureSequence ComputeMfcc(const AudioBuffer &audio, const MfccConfig &config,
                            const std::string &source_id) {
  return MfccComputer(config, audio.sample_rate_hz).Compute(audio, source_id);
}

}  // namespace qbe
