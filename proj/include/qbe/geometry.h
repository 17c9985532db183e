// qbe/geometry.h

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

#ifndef QBE_GEOMETRY_H_
#define QBE_GEOMETRY_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbe/feature-io.h"

namespace qbe {

/// a.b / (|a||b|) accumulated in double and clamped to [-1, 1]. Throws
/// DataError for mismatched dimensions or a zero-norm argument.
double Cosine(std::span<const float> a, std::span<const float> b);

enum class PairStratum { kAny, kSameRecording, kDifferentRecording };

const char *PairStratumName(PairStratum s);

struct PairSamplingPlan {
  int64_t n_pairs = 1000;
  PairStratum stratum = PairStratum::kAny;
  uint64_t rng_seed = 0;
};

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  int64_t count = 0;
};

struct AnisotropyReport {
  int layer = kNoLayer;
  PairStratum stratum = PairStratum::kAny;
  int64_t n_pairs = 0;
  double expected_cosine = 0.0;
  // Always exactly 1 - expected_cosine.
  double one_minus_expected_cosine = 1.0;
  double median_cos = 0.0;
  double iqr_cos = 0.0;
  std::vector<HistogramBin> histogram;
};

inline constexpr int kDefaultHistogramBins = 80;

// Uniform bins over [-1, 1]; edges are computed the same way for every
// report so histograms from different strata overlay exactly.
std::vector<HistogramBin> EmptyCosineHistogram(int n_bins);

/// Estimates the expected cosine similarity between distinct frames by
/// sampling plan.n_pairs pairs uniformly from the requested stratum (pairs
/// drawn with replacement, never a frame with itself). Each element of
/// `corpus` is one recording; all must share the same layer.
AnisotropyReport Anisotropy(std::span<const FeatureSequence> corpus,
                            const PairSamplingPlan &plan,
                            int n_bins = kDefaultHistogramBins);

/// Same-recording and different-recording reports for overlay plotting.
std::pair<AnisotropyReport, AnisotropyReport> SimilarityDistribution(
    std::span<const FeatureSequence> corpus, const PairSamplingPlan &plan_same,
    const PairSamplingPlan &plan_diff, int n_bins = kDefaultHistogramBins);

struct RogueDimensionReport {
  int layer = kNoLayer;
  double max_mean = 0.0;
  int64_t argmax_dim = 0;
  double std_of_max_dim = 0.0;
  double second_max_mean = 0.0;
  double median_of_means = 0.0;
};

/// Per-dimension means over every frame of every sequence at `layer`
/// (other layers in `corpus` are ignored). Needs dim >= 2.
RogueDimensionReport RogueDimensions(std::span<const FeatureSequence> corpus,
                                     int layer);

}  // namespace qbe

#endif  // QBE_GEOMETRY_H_
