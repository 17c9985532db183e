// qbe/oracle/brute-force-dtw.h

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

// Reference answers by exhaustive enumeration. Only for tests and selftest;
// exponential in the matrix size.

#ifndef QBE_ORACLE_BRUTE_FORCE_DTW_H_
#define QBE_ORACLE_BRUTE_FORCE_DTW_H_

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qbe::oracle {

using Path = std::vector<std::pair<int64_t, int64_t>>;

struct BruteForceResult {
  double min_cost = 0.0;
  // Every path achieving min_cost (within 1e-12).
  std::vector<Path> argmin_paths;
  int64_t paths_enumerated = 0;
};

/// Minimum over every path that starts at any (s, 0), ends at any
/// (e, m-1), and moves by (1,0), (0,1) or (1,1), of the sum of the visited
/// entries. Rows are target frames, columns query frames.
BruteForceResult BruteForceSubsequenceDtw(const Eigen::MatrixXd &costs);

// True if `path` is such a path for an n x m matrix.
bool IsValidSubsequencePath(const Path &path, int64_t n, int64_t m);

}  // namespace qbe::oracle

#endif  // QBE_ORACLE_BRUTE_FORCE_DTW_H_
