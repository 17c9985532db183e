// report-json.cc

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

#include "qbe/report-json.h"

namespace qbe {

using nlohmann::json;

json ToJson(const AnisotropyReport &r) {
  json bins = json::array();
  for (const HistogramBin &b : r.histogram)
    bins.push_back({b.lower, b.upper, b.count});
  return {{"layer", r.layer},
          {"stratum", PairStratumName(r.stratum)},
          {"n_pairs", r.n_pairs},
          {"expected_cosine", r.expected_cosine},
          {"one_minus_expected_cosine", r.one_minus_expected_cosine},
          {"median_cos", r.median_cos},
          {"iqr_cos", r.iqr_cos},
          {"histogram", std::move(bins)}};
}

json ToJson(const RogueDimensionReport &r) {
  return {{"layer", r.layer},
          {"max_mean", r.max_mean},
          {"argmax_dim", r.argmax_dim},
          {"std_of_max_dim", r.std_of_max_dim},
          {"second_max_mean", r.second_max_mean},
          {"median_of_means", r.median_of_means}};
}

json ToJson(const RetrievalMetrics &m) {
  return {{"layer", m.layer},
          {"k", m.k},
          {"precision_at_k", m.precision_at_k},
          {"recall_at_k", m.recall_at_k},
          {"f1_at_k", m.f1_at_k},
          {"n_queries", m.n_queries}};
}

json SearchLine(const MatchResult &m, int rank, double frame_rate_hz) {
  return {{"query_id", m.query_id},
          {"rank", rank},
          {"recording_id", m.recording_id},
          {"normalized_cost", m.normalized_cost},
          {"match_start_s", m.match_start / frame_rate_hz},
          {"match_end_s", m.match_end / frame_rate_hz}};
}

}  // namespace qbe
