// qbe/retrieval-eval.h

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

#ifndef QBE_RETRIEVAL_EVAL_H_
#define QBE_RETRIEVAL_EVAL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qbe/corpus-manifest.h"
#include "qbe/search.h"

namespace qbe {

// query_id -> ids of recordings whose transcription contains the target.
using RelevanceJudgments = std::map<std::string, std::set<std::string>>;

/// A recording is relevant to a query when its case-folded token sequence
/// contains the case-folded tokens of target_word contiguously (a single
/// token for one-word targets, so "casas" never matches "casa").
RelevanceJudgments Judge(const CorpusManifest &manifest,
                         std::span<const QuerySpec> queries);

struct PrecisionRecall {
  double precision = 0.0;
  // Unset when there is nothing relevant; such queries are left out of macro
  // averages.
  std::optional<double> recall;
  int64_t hits = 0;
  // min(k, ranking size); precision is hits / k_used.
  int64_t k_used = 0;
  bool truncated = false;
};

PrecisionRecall PrecisionRecallAtK(std::span<const std::string> ranking,
                                   const std::set<std::string> &relevant,
                                   int64_t k);

struct RetrievalMetrics {
  int layer = kNoLayer;
  int k = 1;
  double precision_at_k = 0.0;
  double recall_at_k = 0.0;
  // 2PR / (P + R) of the macro P and R, 0 when both are 0.
  double f1_at_k = 0.0;
  int64_t n_queries = 0;
};

double F1(double precision, double recall);

/// Macro-averaged P@k / R@k / F1 for one layer from per-query rankings.
struct LayerEvaluation {
  std::vector<RetrievalMetrics> metrics;  // one per k, in input order
  std::vector<std::string> excluded_queries;  // empty relevant set
  int64_t truncated_rankings = 0;
};

LayerEvaluation EvaluateRankings(
    int layer, const std::map<std::string, std::vector<std::string>> &rankings,
    const RelevanceJudgments &judgments, std::span<const int> ks);

struct EvaluationResult {
  // Layer-major, k-minor.
  std::vector<RetrievalMetrics> grid;
  // k -> layer with the highest F1 (ties to the lower layer).
  std::map<int, int> best_layer;
  // Per k, P/R averaged across layers (F1 recomputed from those means).
  std::vector<RetrievalMetrics> layer_average;
  std::vector<std::string> excluded_queries;
  int64_t truncated_rankings = 0;
};

std::map<int, int> SelectBestLayers(std::span<const RetrievalMetrics> grid);
std::vector<RetrievalMetrics> AverageOverLayers(
    std::span<const RetrievalMetrics> grid);

/// Searches every query at every layer and scores the rankings against
/// transcription-based relevance.
EvaluationResult Evaluate(const CorpusManifest &manifest,
                          std::span<const QuerySpec> queries,
                          std::span<const int> layers, std::span<const int> ks,
                          const SearchOptions &opts = {});

struct ProtocolOptions {
  int n_words = 30;
  int queries_per_word = 10;
  int n_distractors = 700;
  uint64_t rng_seed = 0;
  QueryMode mode = QueryMode::kContextualSlice;
  // Shorter candidate words (mostly function words) are never targets.
  size_t min_word_chars = 3;
};

struct ProtocolCorpus {
  CorpusManifest manifest;
  std::vector<QuerySpec> queries;
  std::vector<std::string> target_words;
};

/// Draws target words and their query sentences from a transcribed,
/// word-aligned sentence pool, plus distractor sentences containing none of
/// the targets. Query sentences are distinct across words and each query's
/// span is the first aligned occurrence of its word in its sentence.
ProtocolCorpus BuildProtocolCorpus(const CorpusManifest &pool,
                                   const ProtocolOptions &opts);

}  // namespace qbe

#endif  // QBE_RETRIEVAL_EVAL_H_
