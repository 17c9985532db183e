// subsequence-dtw.cc

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

#include "qbe/subsequence-dtw.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qbe/qbe-error.h"

namespace qbe {

NormalizedFrames::NormalizedFrames(const FeatureSequence &seq)
    : frames_(seq.frames()),
      source_id_(seq.source_id()),
      frame_rate_hz_(seq.frame_rate_hz()) {
  for (Eigen::Index i = 0; i < frames_.rows(); ++i) {
    double sq = 0.0;
    for (Eigen::Index d = 0; d < frames_.cols(); ++d)
      sq += double(frames_(i, d)) * frames_(i, d);
    if (sq == 0.0) {
      std::ostringstream msg;
      msg << "'" << source_id_ << "' frame " << i
          << " has zero norm; cosine cost is undefined";
      throw DataError(msg.str());
    }
    frames_.row(i) *= static_cast<float>(1.0 / std::sqrt(sq));
  }
}

CostMatrix ComputeCostMatrix(const NormalizedFrames &target,
                             const NormalizedFrames &query,
                             const std::string &query_id) {
  if (target.Dim() != query.Dim()) {
    std::ostringstream msg;
    msg << "dimension mismatch: target '" << target.source_id() << "' has "
        << target.Dim() << ", query has " << query.Dim();
    throw DataError(msg.str());
  }
  CostMatrix out;
  out.recording_id = target.source_id();
  out.query_id = query_id;
  Eigen::MatrixXf sim = target.frames() * query.frames().transpose();
  out.costs = (1.0 - sim.cast<double>().array()).cwiseMax(0.0).cwiseMin(2.0);
  return out;
}

CostMatrix ComputeCostMatrix(const FeatureSequence &target,
                             const FeatureSequence &query,
                             const std::string &query_id) {
  return ComputeCostMatrix(NormalizedFrames(target), NormalizedFrames(query),
                           query_id);
}

namespace {

enum class Step { kDiagonal, kVertical, kHorizontal };

// Tie order: diagonal, vertical, horizontal.
inline Step Predecessor(double diag, double vert, double horiz, double *best) {
  Step step = Step::kDiagonal;
  *best = diag;
  if (vert < *best) {
    *best = vert;
    step = Step::kVertical;
  }
  if (horiz < *best) {
    *best = horiz;
    step = Step::kHorizontal;
  }
  return step;
}

void CheckShape(const CostMatrix &c) {
  if (c.NumTargetFrames() < 1 || c.NumQueryFrames() < 1)
    throw DataError("subsequence DTW needs a non-empty cost matrix");
}

MatchResult Finish(const CostMatrix &c, double raw, int64_t start, int64_t end) {
  MatchResult r;
  r.recording_id = c.recording_id;
  r.query_id = c.query_id;
  r.raw_cost = raw;
  r.normalized_cost = raw / c.NumQueryFrames();
  r.match_start = start;
  r.match_end = end;
  return r;
}

}  // namespace

MatchResult SubsequenceDtw(const CostMatrix &costs) {
  CheckShape(costs);
  const CostArray &c = costs.costs;
  const int64_t n = c.rows(), m = c.cols();
  CostArray acc(n, m);
  for (int64_t i = 0; i < n; ++i) {
    acc(i, 0) = c(i, 0);
    for (int64_t j = 1; j < m; ++j) {
      if (i == 0) {
        acc(0, j) = acc(0, j - 1) + c(0, j);
      } else {
        double best;
        Predecessor(acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1), &best);
        acc(i, j) = c(i, j) + best;
      }
    }
  }

  int64_t end = 0;
  for (int64_t i = 1; i < n; ++i)
    if (acc(i, m - 1) < acc(end, m - 1)) end = i;

  std::vector<std::pair<int64_t, int64_t>> path;
  int64_t i = end, j = m - 1;
  path.emplace_back(i, j);
  while (j > 0) {
    if (i == 0) {
      --j;
    } else {
      double best;
      switch (Predecessor(acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1), &best)) {
        case Step::kDiagonal: --i; --j; break;
        case Step::kVertical: --i; break;
        case Step::kHorizontal: --j; break;
      }
    }
    path.emplace_back(i, j);
  }
  std::reverse(path.begin(), path.end());

  MatchResult r = Finish(costs, acc(end, m - 1), path.front().first, end + 1);
  r.path = std::move(path);
  return r;
}

MatchResult SubsequenceDtwCost(const CostMatrix &costs) {
  CheckShape(costs);
  const CostArray &c = costs.costs;
  const int64_t n = c.rows(), m = c.cols();
  std::vector<double> prev(m), cur(m);
  std::vector<int64_t> prev_start(m), cur_start(m);

  double best_cost = std::numeric_limits<double>::infinity();
  int64_t best_end = 0, best_start = 0;
  for (int64_t i = 0; i < n; ++i) {
    const double *row = c.data() + i * m;
    cur[0] = row[0];
    cur_start[0] = i;
    if (i == 0) {
      for (int64_t j = 1; j < m; ++j) {
        cur[j] = cur[j - 1] + row[j];
        cur_start[j] = 0;
      }
    } else {
      for (int64_t j = 1; j < m; ++j) {
        double best;
        switch (Predecessor(prev[j - 1], prev[j], cur[j - 1], &best)) {
          case Step::kDiagonal: cur_start[j] = prev_start[j - 1]; break;
          case Step::kVertical: cur_start[j] = prev_start[j]; break;
          case Step::kHorizontal: cur_start[j] = cur_start[j - 1]; break;
        }
        cur[j] = row[j] + best;
      }
    }
    if (cur[m - 1] < best_cost) {
      best_cost = cur[m - 1];
      best_end = i;
      best_start = cur_start[m - 1];
    }
    std::swap(prev, cur);
    std::swap(prev_start, cur_start);
  }
  return Finish(costs, best_cost, best_start, best_end + 1);
}

}  // namespace qbe
