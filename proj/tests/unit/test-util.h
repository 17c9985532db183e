// tests/unit/test-util.h

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

#ifndef QBE_TESTS_TEST_UTIL_H_
#define QBE_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <random>
#include <string>

#include "qbe/feature-io.h"

namespace qbe::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("qbe-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline FrameMatrix RandomFrames(std::mt19937_64 &rng, int64_t n, int64_t dim,
                                double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  FrameMatrix m(n, dim);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<float>(g(rng));
  return m;
}

inline FeatureSequence RandomSequence(std::mt19937_64 &rng, int64_t n, int64_t dim,
                                      const std::string &id, int layer = 0,
                                      float rate = 49.0f) {
  return FeatureSequence(RandomFrames(rng, n, dim), rate, id, layer);
}

}  // namespace qbe::testing

#endif  // QBE_TESTS_TEST_UTIL_H_
