// qbe/subsequence-dtw.h

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

#ifndef QBE_SUBSEQUENCE_DTW_H_
#define QBE_SUBSEQUENCE_DTW_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbe/feature-io.h"

namespace qbe {

// Row i is target frame i, column j is query frame j.
using CostArray =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct CostMatrix {
  // costs(i, j) = 1 - cos(target_i, query_j), in [0, 2].
  CostArray costs;
  std::string recording_id;
  std::string query_id;

  int64_t NumTargetFrames() const { return costs.rows(); }
  int64_t NumQueryFrames() const { return costs.cols(); }
};

/// Unit-normalised copy of a sequence's frames. Building one rejects
/// zero-norm frames (DataError naming the frame), so a corpus can be
/// normalised once and reused against every query.
class NormalizedFrames {
 public:
  explicit NormalizedFrames(const FeatureSequence &seq);

  const FrameMatrix &frames() const { return frames_; }
  const std::string &source_id() const { return source_id_; }
  float frame_rate_hz() const { return frame_rate_hz_; }
  int64_t NumFrames() const { return frames_.rows(); }
  int64_t Dim() const { return frames_.cols(); }

 private:
  FrameMatrix frames_;
  std::string source_id_;
  float frame_rate_hz_;
};

CostMatrix ComputeCostMatrix(const NormalizedFrames &target,
                             const NormalizedFrames &query,
                             const std::string &query_id = "");
CostMatrix ComputeCostMatrix(const FeatureSequence &target,
                             const FeatureSequence &query,
                             const std::string &query_id = "");

struct MatchResult {
  std::string recording_id;
  std::string query_id;
  double raw_cost = 0.0;
  // raw_cost / m.
  double normalized_cost = 0.0;
  // Target frames [match_start, match_end).
  int64_t match_start = 0;
  int64_t match_end = 0;
  // (target, query) cells from (match_start, 0) to (match_end - 1, m - 1).
  // Empty when the match was computed in cost-only mode.
  std::vector<std::pair<int64_t, int64_t>> path;
};

/// Subsequence DTW with steps (1,1), (1,0), (0,1), free start and end on the
/// target axis:
///   D(i,0) = c(i,0)
///   D(0,j) = D(0,j-1) + c(0,j)
///   D(i,j) = c(i,j) + min(D(i-1,j-1), D(i-1,j), D(i,j-1))
/// The match ends at the first i minimising D(i, m-1). Ties between
/// predecessors prefer diagonal, then vertical (target advance), then
/// horizontal. Materialises the n x m accumulated matrix and the path.
MatchResult SubsequenceDtw(const CostMatrix &costs);

/// Same optimum, span and tie-breaking as SubsequenceDtw, without the path.
/// Keeps two rows of the accumulated matrix and carries the start index of
/// each partial alignment forward instead of backtracking.
MatchResult SubsequenceDtwCost(const CostMatrix &costs);

}  // namespace qbe

#endif  // QBE_SUBSEQUENCE_DTW_H_
