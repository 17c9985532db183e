// qbe/mfcc.h

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

#ifndef QBE_MFCC_H_
#define QBE_MFCC_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbe/feature-io.h"
#include "qbe/wav-io.h"

namespace qbe {

struct MfccConfig {
  int n_coeffs = 13;
  double window_s = 0.025;
  double hop_s = 0.010;
  // 0 picks the smallest power of two holding one window.
  int n_fft = 0;
  int n_mel_filters = 26;
  double pre_emphasis = 0.97;
  double log_floor = 1e-10;
  // Audio at any other rate is rejected, never resampled. 0 accepts any.
  int expected_sample_rate_hz = 16000;
};

/// Orthonormal DCT-II basis, row k = coefficient k: D * D^T = I.
Eigen::MatrixXd DctMatrix(int n);

// HTK mel scale.
double HzToMel(double hz);
double MelToHz(double mel);

/// MFCC front-end for one sample rate. Pipeline per frame: pre-emphasis
/// (applied to the whole signal), Hamming window, |FFT|, triangular mel
/// filterbank from 0 Hz to Nyquist, log with a floor, orthonormal DCT-II,
/// first n_coeffs coefficients.
class MfccComputer {
 public:
  MfccComputer(const MfccConfig &config, int sample_rate_hz);

  int WindowSamples() const { return window_samples_; }
  int HopSamples() const { return hop_samples_; }
  int FftSize() const { return n_fft_; }
  float FrameRateHz() const { return static_cast<float>(1.0 / config_.hop_s); }

  // floor((n_samples - window) / hop) + 1, or 0 if shorter than a window.
  int64_t NumFrames(int64_t n_samples) const;

  // n_mel_filters x (n_fft/2 + 1).
  const Eigen::MatrixXd &Filterbank() const { return filterbank_; }
  std::vector<double> FilterCentersHz() const;

  /// Log mel energies before the DCT, one row per frame.
  Eigen::MatrixXd LogMelEnergies(const AudioBuffer &audio) const;

  FeatureSequence Compute(const AudioBuffer &audio,
                          const std::string &source_id) const;

 private:
  void CheckAudio(const AudioBuffer &audio) const;

  MfccConfig config_;
  int sample_rate_hz_;
  int window_samples_;
  int hop_samples_;
  int n_fft_;
  Eigen::VectorXd window_;
  Eigen::MatrixXd filterbank_;
  Eigen::MatrixXd dct_;  // n_coeffs x n_mel_filters
};

FeatureSequence ComputeMfcc(const AudioBuffer &audio, const MfccConfig &config,
                            const std::string &source_id);

}  // namespace qbe

#endif  // QBE_MFCC_H_
