// oracle/brute-force-dtw.cc

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

#include "qbe/oracle/brute-force-dtw.h"

#include <cmath>
#include <limits>

namespace qbe::oracle {

namespace {

struct Walker {
  const Eigen::MatrixXd &c;
  int64_t n, m;
  BruteForceResult result;
  Path path;

  void Visit(int64_t i, int64_t j, double cost) {
    path.emplace_back(i, j);
    cost += c(i, j);
    if (j == m - 1) {
      ++result.paths_enumerated;
      if (cost < result.min_cost - 1e-12) {
        result.min_cost = cost;
        result.argmin_paths.clear();
      }
      if (std::abs(cost - result.min_cost) <= 1e-12)
        result.argmin_paths.push_back(path);
    }
    if (i + 1 < n) Visit(i + 1, j, cost);
    if (j + 1 < m) Visit(i, j + 1, cost);
    if (i + 1 < n && j + 1 < m) Visit(i + 1, j + 1, cost);
    path.pop_back();
  }
};

}  // namespace

BruteForceResult BruteForceSubsequenceDtw(const Eigen::MatrixXd &costs) {
  Walker w{costs, costs.rows(), costs.cols(), {}, {}};
  w.result.min_cost = std::numeric_limits<double>::infinity();
  for (int64_t s = 0; s < w.n; ++s) w.Visit(s, 0, 0.0);
  return w.result;
}

bool IsValidSubsequencePath(const Path &path, int64_t n, int64_t m) {
  if (path.empty() || path.front().second != 0 || path.back().second != m - 1)
    return false;
  for (size_t k = 0; k < path.size(); ++k) {
    const auto [i, j] = path[k];
    if (i < 0 || i >= n || j < 0 || j >= m) return false;
    if (k == 0) continue;
    const int64_t di = i - path[k - 1].first, dj = j - path[k - 1].second;
    const bool ok = (di == 1 && dj == 0) || (di == 0 && dj == 1) || (di == 1 && dj == 1);
    if (!ok) return false;
  }
  return true;
}

}  // namespace qbe::oracle
