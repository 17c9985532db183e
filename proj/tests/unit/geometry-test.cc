// tests/unit/geometry-test.cc

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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "qbe/geometry.h"
#include "qbe/qbe-error.h"
#include "test-util.h"

using namespace qbe;
using qbe::testing::RandomSequence;

namespace {

std::vector<float> V(std::initializer_list<float> x) { return x; }

FeatureSequence Constant(std::initializer_list<float> frame, int64_t n, const std::string &id) {
  FrameMatrix m(n, static_cast<Eigen::Index>(frame.size()));
  for (int64_t i = 0; i < n; ++i) {
    int d = 0;
    for (float v : frame) m(i, d++) = v;
  }
  return FeatureSequence(m, 49.0f, id, 0);
}

int64_t Total(const AnisotropyReport &r) {
  int64_t s = 0;
  for (const HistogramBin &b : r.histogram) s += b.count;
  return s;
}

}  // namespace

TEST_CASE("cosine of hand-worked vectors") {
  auto a = V({1, 2, 3}), b = V({4, 5, 6});
  CHECK(Cosine(a, b) == doctest::Approx(32.0 / (std::sqrt(14.0) * std::sqrt(77.0))).epsilon(1e-12));
  CHECK(Cosine(a, b) == doctest::Approx(0.9746318461970762).epsilon(1e-12));
  auto x = V({1, 0}), y = V({0, 1}), mx = V({-1, 0});
  CHECK(Cosine(x, y) == 0.0);
  CHECK(Cosine(x, mx) == -1.0);
  CHECK(Cosine(x, x) == 1.0);
  auto z = V({0, 0});
  CHECK_THROWS_AS(Cosine(x, z), DataError);
}

TEST_CASE("cosine is symmetric, scale invariant and bounded") {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> g;
  std::uniform_real_distribution<float> s(0.01f, 100.0f);
  for (int t = 0; t < 500; ++t) {
    std::vector<float> a(8), b(8);
    for (float &v : a) v = g(rng);
    for (float &v : b) v = g(rng);
    const double c = Cosine(a, b);
    CHECK(c == Cosine(b, a));
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    const float k = s(rng);
    std::vector<float> ka = a;
    for (float &v : ka) v *= k;
    CHECK(Cosine(ka, b) == doctest::Approx(c).epsilon(1e-6));
  }
}

TEST_CASE("identical frames have anisotropy one") {
  std::vector<FeatureSequence> corpus;
  for (int r = 0; r < 4; ++r) corpus.push_back(Constant({0.3f, -2.0f, 1.0f}, 20, "r" + std::to_string(r)));
  AnisotropyReport rep = Anisotropy(corpus, {1000, PairStratum::kAny, 9});
  CHECK(rep.n_pairs == 1000);
  CHECK(std::abs(rep.expected_cosine - 1.0) <= 1e-6);
  CHECK(rep.one_minus_expected_cosine == 1.0 - rep.expected_cosine);
  CHECK(rep.median_cos == doctest::Approx(1.0));
  CHECK(rep.iqr_cos == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(Total(rep) == 1000);
  CHECK(rep.histogram.back().count == 1000);
}

TEST_CASE("isotropic frames have anisotropy near zero") {
  std::mt19937_64 rng(2);
  std::vector<FeatureSequence> corpus;
  for (int r = 0; r < 20; ++r) corpus.push_back(RandomSequence(rng, 50, 256, "r" + std::to_string(r)));
  AnisotropyReport rep = Anisotropy(corpus, {1000, PairStratum::kAny, 3});
  // Each cosine has std ~ 1/sqrt(256); the mean of 1000 has std ~0.002.
  CHECK(std::abs(rep.expected_cosine) < 0.02);
}

TEST_CASE("shared mean direction makes a corpus anisotropic") {
  std::mt19937_64 rng(3);
  std::vector<FeatureSequence> corpus;
  for (int r = 0; r < 10; ++r) {
    // Noise norm ~0.16 against a unit mean: cos ~ 1 / (1 + 0.16^2).
    FrameMatrix m = qbe::testing::RandomFrames(rng, 30, 64, 0.02);
    m.col(0).array() += 1.0f;
    corpus.emplace_back(m, 49.0f, "r" + std::to_string(r), 0);
  }
  CHECK(Anisotropy(corpus, {1000, PairStratum::kAny, 4}).expected_cosine > 0.9);
}

TEST_CASE("strata separate within- and between-recording pairs") {
  std::vector<FeatureSequence> corpus = {Constant({1, 0}, 10, "a"), Constant({0, 1}, 30, "b")};
  PairSamplingPlan same{500, PairStratum::kSameRecording, 5};
  PairSamplingPlan diff{500, PairStratum::kDifferentRecording, 5};
  auto [s, d] = SimilarityDistribution(corpus, same, diff);
  CHECK(s.stratum == PairStratum::kSameRecording);
  CHECK(s.expected_cosine == doctest::Approx(1.0));
  CHECK(d.stratum == PairStratum::kDifferentRecording);
  CHECK(d.expected_cosine == doctest::Approx(0.0));
  CHECK(Total(s) == 500);
  CHECK(Total(d) == 500);

  // Uniform over all distinct pairs: P(same) = (10*9 + 30*29) / (40*39).
  AnisotropyReport any = Anisotropy(corpus, {20000, PairStratum::kAny, 6});
  const double p_same = (10.0 * 9 + 30.0 * 29) / (40.0 * 39);
  CHECK(any.expected_cosine == doctest::Approx(p_same).epsilon(0.03));
}

TEST_CASE("unsatisfiable strata are reported") {
  std::vector<FeatureSequence> one = {Constant({1, 0}, 10, "a")};
  CHECK_THROWS_AS(Anisotropy(one, {10, PairStratum::kDifferentRecording, 1}), DataError);
  std::vector<FeatureSequence> singles = {Constant({1, 0}, 1, "a"), Constant({0, 1}, 1, "b")};
  CHECK_THROWS_AS(Anisotropy(singles, {10, PairStratum::kSameRecording, 1}), DataError);
  CHECK_NOTHROW(Anisotropy(singles, {10, PairStratum::kAny, 1}));
  std::vector<FeatureSequence> single_frame = {Constant({1, 0}, 1, "a")};
  CHECK_THROWS_AS(Anisotropy(single_frame, {10, PairStratum::kAny, 1}), DataError);
}

TEST_CASE("sampling is deterministic in the seed") {
  std::mt19937_64 rng(7);
  std::vector<FeatureSequence> corpus;
  for (int r = 0; r < 5; ++r) corpus.push_back(RandomSequence(rng, 20, 8, "r" + std::to_string(r)));
  AnisotropyReport a = Anisotropy(corpus, {300, PairStratum::kAny, 11});
  AnisotropyReport b = Anisotropy(corpus, {300, PairStratum::kAny, 11});
  AnisotropyReport c = Anisotropy(corpus, {300, PairStratum::kAny, 12});
  CHECK(a.expected_cosine == b.expected_cosine);
  CHECK(a.median_cos == b.median_cos);
  CHECK(a.expected_cosine != c.expected_cosine);
}

TEST_CASE("histogram covers [-1, 1] in equal bins") {
  std::vector<HistogramBin> h = EmptyCosineHistogram(80);
  REQUIRE(h.size() == 80);
  CHECK(h.front().lower == -1.0);
  CHECK(h.back().upper == 1.0);
  for (size_t i = 0; i < h.size(); ++i) CHECK(h[i].upper - h[i].lower == doctest::Approx(0.025));
}

TEST_CASE("rogue dimension statistics") {
  std::mt19937_64 rng(8);
  std::vector<FeatureSequence> corpus;
  for (int r = 0; r < 6; ++r) {
    FrameMatrix m = qbe::testing::RandomFrames(rng, 100, 3, 0.1);
    m.col(0).array() += 5.0f;
    m.col(1).array() += 1.0f;
    m.col(2).array() += 1.0f;
    corpus.emplace_back(m, 49.0f, "r" + std::to_string(r), 2);
  }
  RogueDimensionReport rep = RogueDimensions(corpus, 2);
  CHECK(rep.layer == 2);
  CHECK(rep.argmax_dim == 0);
  CHECK(rep.max_mean == doctest::Approx(5.0).epsilon(0.01));
  CHECK(rep.second_max_mean == doctest::Approx(1.0).epsilon(0.05));
  CHECK(rep.median_of_means == doctest::Approx(1.0).epsilon(0.05));
  CHECK(rep.std_of_max_dim == doctest::Approx(0.1).epsilon(0.1));

  // Independent of recording order.
  std::vector<FeatureSequence> reversed(corpus.rbegin(), corpus.rend());
  RogueDimensionReport rev = RogueDimensions(reversed, 2);
  CHECK(rev.argmax_dim == rep.argmax_dim);
  CHECK(rev.max_mean == doctest::Approx(rep.max_mean).epsilon(1e-12));
  CHECK(rev.std_of_max_dim == doctest::Approx(rep.std_of_max_dim).epsilon(1e-12));

  std::vector<FeatureSequence> one_dim = {Constant({1}, 4, "a")};
  CHECK_THROWS_AS(RogueDimensions(one_dim, 0), DataError);
}
