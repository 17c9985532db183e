// geometry.cc

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

#include "qbe/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "qbe/qbe-error.h"

namespace qbe {

double Cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    std::ostringstream msg;
    msg << "cosine of vectors with different dimensions (" << a.size()
        << " vs " << b.size() << ")";
    throw DataError(msg.str());
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += double(a[i]) * b[i];
    na += double(a[i]) * a[i];
    nb += double(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0)
    throw DataError("cosine of a zero-norm vector is undefined");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

const char *PairStratumName(PairStratum s) {
  switch (s) {
    case PairStratum::kAny: return "any";
    case PairStratum::kSameRecording: return "same_recording";
    case PairStratum::kDifferentRecording: return "different_recording";
  }
  return "?";
}

std::vector<HistogramBin> EmptyCosineHistogram(int n_bins) {
  if (n_bins < 1) throw DataError("histogram needs at least one bin");
  std::vector<HistogramBin> bins(n_bins);
  const double width = 2.0 / n_bins;
  for (int b = 0; b < n_bins; ++b) {
    bins[b].lower = -1.0 + b * width;
    bins[b].upper = (b + 1 == n_bins) ? 1.0 : -1.0 + (b + 1) * width;
  }
  return bins;
}

namespace {

// Linear interpolation between order statistics of sorted data.
double Quantile(const std::vector<double> &sorted, double q) {
  const double pos = q * (sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

int CommonLayer(std::span<const FeatureSequence> corpus) {
  const int layer = corpus.front().layer();
  const int64_t dim = corpus.front().Dim();
  for (const FeatureSequence &s : corpus) {
    if (s.layer() != layer)
      throw DataError("corpus mixes layers " + std::to_string(layer) +
                      " and " + std::to_string(s.layer()));
    if (s.Dim() != dim)
      throw DataError("corpus mixes feature dimensions");
  }
  return layer;
}

class PairSampler {
 public:
  PairSampler(std::span<const FeatureSequence> corpus, const PairSamplingPlan &plan)
      : corpus_(corpus), stratum_(plan.stratum) {
    // Substream per stratum so same/different plans sharing a seed are
    // independent.
    std::seed_seq seq{static_cast<uint32_t>(plan.rng_seed),
                      static_cast<uint32_t>(plan.rng_seed >> 32),
                      static_cast<uint32_t>(plan.stratum) + 0x5eedu};
    rng_.seed(seq);

    const int64_t total = std::accumulate(
        corpus.begin(), corpus.end(), int64_t{0},
        [](int64_t acc, const FeatureSequence &s) { return acc + s.NumFrames(); });
    total_ = total;
    std::vector<double> weights;
    bool satisfiable = false;
    for (const FeatureSequence &s : corpus) {
      const double n = static_cast<double>(s.NumFrames());
      switch (stratum_) {
        case PairStratum::kAny:
          weights.push_back(n);
          satisfiable = total >= 2;
          break;
        case PairStratum::kSameRecording:
          weights.push_back(n * (n - 1));
          satisfiable |= s.NumFrames() >= 2;
          break;
        case PairStratum::kDifferentRecording:
          weights.push_back(n * (total - n));
          satisfiable = corpus.size() >= 2;
          break;
      }
    }
    if (!satisfiable)
      throw DataError(std::string("pair stratum '") + PairStratumName(stratum_) +
                      "' is unsatisfiable for this corpus");
    pick_recording_ = std::discrete_distribution<size_t>(weights.begin(), weights.end());
  }

  std::pair<std::span<const float>, std::span<const float>> Next() {
    const size_t r = pick_recording_(rng_);
    const FeatureSequence &rec = corpus_[r];
    const int64_t n = rec.NumFrames();
    switch (stratum_) {
      case PairStratum::kSameRecording: {
        auto [i, j] = DistinctPair(n);
        return {rec.Frame(i), rec.Frame(j)};
      }
      case PairStratum::kDifferentRecording: {
        const int64_t i = Uniform(n);
        return {rec.Frame(i), FrameOutside(r, Uniform(total_ - n))};
      }
      case PairStratum::kAny: {
        // First frame uniform over the corpus (recording chosen by size),
        // second uniform over the remaining total - 1 frames.
        const int64_t i = Uniform(n);
        int64_t j = Uniform(total_ - 1);
        int64_t offset = 0;
        for (size_t q = 0; q < r; ++q) offset += corpus_[q].NumFrames();
        if (j >= offset + i) ++j;
        return {rec.Frame(i), GlobalFrame(j)};
      }
    }
    throw Error("unreachable");
  }

 private:
  int64_t Uniform(int64_t n) {
    return std::uniform_int_distribution<int64_t>(0, n - 1)(rng_);
  }

  std::pair<int64_t, int64_t> DistinctPair(int64_t n) {
    const int64_t i = Uniform(n);
    int64_t j = Uniform(n - 1);
    if (j >= i) ++j;
    return {i, j};
  }

  std::span<const float> GlobalFrame(int64_t g) const {
    for (const FeatureSequence &s : corpus_) {
      if (g < s.NumFrames()) return s.Frame(g);
      g -= s.NumFrames();
    }
    throw Error("frame index out of range");
  }

  // The k-th frame among those not belonging to recording `skip`.
  std::span<const float> FrameOutside(size_t skip, int64_t k) const {
    for (size_t q = 0; q < corpus_.size(); ++q) {
      if (q == skip) continue;
      if (k < corpus_[q].NumFrames()) return corpus_[q].Frame(k);
      k -= corpus_[q].NumFrames();
    }
    throw Error("frame index out of range");
  }

  std::span<const FeatureSequence> corpus_;
  PairStratum stratum_;
  int64_t total_ = 0;
  std::mt19937_64 rng_;
  std::discrete_distribution<size_t> pick_recording_;
};

}  // namespace

AnisotropyReport Anisotropy(std::span<const FeatureSequence> corpus,
                            const PairSamplingPlan &plan, int n_bins) {
  if (plan.n_pairs < 1) throw DataError("n_pairs must be >= 1");
  if (corpus.empty()) throw DataError("anisotropy of an empty corpus");
  AnisotropyReport report;
  report.layer = CommonLayer(corpus);
  report.stratum = plan.stratum;
  report.n_pairs = plan.n_pairs;
  report.histogram = EmptyCosineHistogram(n_bins);

  PairSampler sampler(corpus, plan);
  std::vector<double> cosines;
  cosines.reserve(plan.n_pairs);
  for (int64_t p = 0; p < plan.n_pairs; ++p) {
    auto [a, b] = sampler.Next();
    cosines.push_back(Cosine(a, b));
  }

  double sum = 0.0;
  for (double c : cosines) {
    sum += c;
    int bin = static_cast<int>(std::floor((c + 1.0) / 2.0 * n_bins));
    report.histogram[std::clamp(bin, 0, n_bins - 1)].count++;
  }
  report.expected_cosine = std::clamp(sum / cosines.size(), -1.0, 1.0);
  report.one_minus_expected_cosine = 1.0 - report.expected_cosine;

  std::sort(cosines.begin(), cosines.end());
  report.median_cos = Quantile(cosines, 0.5);
  report.iqr_cos = Quantile(cosines, 0.75) - Quantile(cosines, 0.25);
  return report;
}

std::pair<AnisotropyReport, AnisotropyReport> SimilarityDistribution(
    std::span<const FeatureSequence> corpus, const PairSamplingPlan &plan_same,
    const PairSamplingPlan &plan_diff, int n_bins) {
  PairSamplingPlan same = plan_same, diff = plan_diff;
  same.stratum = PairStratum::kSameRecording;
  diff.stratum = PairStratum::kDifferentRecording;
  return {Anisotropy(corpus, same, n_bins), Anisotropy(corpus, diff, n_bins)};
}

RogueDimensionReport RogueDimensions(std::span<const FeatureSequence> corpus,
                                     int layer) {
  std::vector<const FeatureSequence *> seqs;
  for (const FeatureSequence &s : corpus)
    if (s.layer() == layer) seqs.push_back(&s);
  if (seqs.empty())
    throw DataError("no frames at layer " + std::to_string(layer));
  const int64_t dim = seqs.front()->Dim();
  if (dim < 2)
    throw DataError("rogue-dimension statistics need dim >= 2");

  std::vector<double> sums(dim, 0.0);
  int64_t n_frames = 0;
  for (const FeatureSequence *s : seqs) {
    if (s->Dim() != dim) throw DataError("corpus mixes feature dimensions");
    for (int64_t i = 0; i < s->NumFrames(); ++i) {
      std::span<const float> f = s->Frame(i);
      for (int64_t d = 0; d < dim; ++d) sums[d] += f[d];
    }
    n_frames += s->NumFrames();
  }
  std::vector<double> means(dim);
  for (int64_t d = 0; d < dim; ++d) means[d] = sums[d] / n_frames;

  RogueDimensionReport report;
  report.layer = layer;
  report.argmax_dim = std::max_element(means.begin(), means.end()) - means.begin();
  report.max_mean = means[report.argmax_dim];
  report.second_max_mean = -std::numeric_limits<double>::infinity();
  for (int64_t d = 0; d < dim; ++d)
    if (d != report.argmax_dim)
      report.second_max_mean = std::max(report.second_max_mean, means[d]);

  double ss = 0.0;
  for (const FeatureSequence *s : seqs)
    for (int64_t i = 0; i < s->NumFrames(); ++i) {
      const double dev = s->Frame(i)[report.argmax_dim] - report.max_mean;
      ss += dev * dev;
    }
  report.std_of_max_dim = std::sqrt(ss / n_frames);

  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  report.median_of_means = (dim % 2)
      ? sorted[dim / 2]
      : 0.5 * (sorted[dim / 2 - 1] + sorted[dim / 2]);
  return report;
}

}  // namespace qbe
