// retrieval-eval.cc

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

#include "qbe/retrieval-eval.h"

#include <algorithm>

#include "qbe/parallel.h"
#include "qbe/qbe-error.h"
#include "qbe/text-norm.h"

namespace qbe {

namespace {

bool ContainsSequence(const std::vector<std::string> &haystack,
                      const std::vector<std::string> &needle) {
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

}  // namespace

RelevanceJudgments Judge(const CorpusManifest &manifest,
                         std::span<const QuerySpec> queries) {
  std::vector<std::vector<std::string>> transcripts;
  transcripts.reserve(manifest.size());
  for (const ManifestEntry &e : manifest.entries())
    transcripts.push_back(Tokenize(e.transcription));

  RelevanceJudgments out;
  for (const QuerySpec &q : queries) {
    const std::vector<std::string> target = Tokenize(q.target_word);
    if (target.empty())
      throw ManifestError(ManifestError::Kind::kBadQuery,
                          "query '" + q.query_id + "': target word '" +
                              q.target_word + "' is empty after folding",
                          {q.query_id});
    std::set<std::string> &relevant = out[q.query_id];
    for (size_t r = 0; r < transcripts.size(); ++r)
      if (ContainsSequence(transcripts[r], target))
        relevant.insert(manifest.entries()[r].id);
  }
  return out;
}

PrecisionRecall PrecisionRecallAtK(std::span<const std::string> ranking,
                                   const std::set<std::string> &relevant,
                                   int64_t k) {
  if (k < 1) throw DataError("k must be >= 1");
  PrecisionRecall pr;
  pr.k_used = std::min<int64_t>(k, static_cast<int64_t>(ranking.size()));
  pr.truncated = pr.k_used < k;
  for (int64_t i = 0; i < pr.k_used; ++i)
    if (relevant.count(ranking[i])) ++pr.hits;
  pr.precision = pr.k_used > 0 ? double(pr.hits) / pr.k_used : 0.0;
  if (!relevant.empty()) pr.recall = double(pr.hits) / relevant.size();
  return pr;
}

double F1(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall)
                                  : 0.0;
}

LayerEvaluation EvaluateRankings(
    int layer, const std::map<std::string, std::vector<std::string>> &rankings,
    const RelevanceJudgments &judgments, std::span<const int> ks) {
  LayerEvaluation out;
  std::vector<double> p_sum(ks.size(), 0.0), r_sum(ks.size(), 0.0);
  int64_t n = 0;
  for (const auto &[query_id, ranking] : rankings) {
    auto it = judgments.find(query_id);
    if (it == judgments.end())
      throw DataError("no relevance judgments for query '" + query_id + "'");
    if (it->second.empty()) {
      out.excluded_queries.push_back(query_id);
      continue;
    }
    ++n;
    bool truncated = false;
    for (size_t ki = 0; ki < ks.size(); ++ki) {
      PrecisionRecall pr = PrecisionRecallAtK(ranking, it->second, ks[ki]);
      p_sum[ki] += pr.precision;
      r_sum[ki] += *pr.recall;
      truncated |= pr.truncated;
    }
    if (truncated) ++out.truncated_rankings;
  }
  for (size_t ki = 0; ki < ks.size(); ++ki) {
    RetrievalMetrics m;
    m.layer = layer;
    m.k = ks[ki];
    m.n_queries = n;
    if (n > 0) {
      m.precision_at_k = p_sum[ki] / n;
      m.recall_at_k = r_sum[ki] / n;
    }
    m.f1_at_k = F1(m.precision_at_k, m.recall_at_k);
    out.metrics.push_back(m);
  }
  return out;
}

std::map<int, int> SelectBestLayers(std::span<const RetrievalMetrics> grid) {
  std::map<int, const RetrievalMetrics *> best;
  for (const RetrievalMetrics &m : grid) {
    auto [it, inserted] = best.emplace(m.k, &m);
    if (inserted) continue;
    const RetrievalMetrics *cur = it->second;
    if (m.f1_at_k > cur->f1_at_k ||
        (m.f1_at_k == cur->f1_at_k && m.layer < cur->layer))
      it->second = &m;
  }
  std::map<int, int> out;
  for (const auto &[k, m] : best) out[k] = m->layer;
  return out;
}

std::vector<RetrievalMetrics> AverageOverLayers(
    std::span<const RetrievalMetrics> grid) {
  std::map<int, std::vector<const RetrievalMetrics *>> by_k;
  for (const RetrievalMetrics &m : grid) by_k[m.k].push_back(&m);
  std::vector<RetrievalMetrics> out;
  for (const auto &[k, ms] : by_k) {
    RetrievalMetrics avg;
    avg.k = k;
    for (const RetrievalMetrics *m : ms) {
      avg.precision_at_k += m->precision_at_k;
      avg.recall_at_k += m->recall_at_k;
      avg.n_queries = std::max(avg.n_queries, m->n_queries);
    }
    avg.precision_at_k /= ms.size();
    avg.recall_at_k /= ms.size();
    avg.f1_at_k = F1(avg.precision_at_k, avg.recall_at_k);
    out.push_back(avg);
  }
  return out;
}

EvaluationResult Evaluate(const CorpusManifest &manifest,
                          std::span<const QuerySpec> queries,
                          std::span<const int> layers, std::span<const int> ks,
                          const SearchOptions &opts) {
  if (layers.empty() || ks.empty())
    throw DataError("evaluation needs at least one layer and one k");
  for (int k : ks)
    if (k < 1) throw DataError("k must be >= 1");

  const RelevanceJudgments judgments = Judge(manifest, queries);
  EvaluationResult result;
  for (int layer : layers) {
    ValidateQueries(manifest, queries, layer);
    LayerIndex index(manifest, layer, opts.workers);
    std::vector<std::vector<std::string>> ranked(queries.size());
    SearchOptions inner = opts;
    inner.workers = 1;
    inner.top_k_paths = 0;
    ParallelFor(queries.size(), opts.workers, [&](size_t qi) {
      const QuerySpec &q = queries[qi];
      FeatureSequence seq = ResolveQuery(manifest, q, layer);
      std::vector<MatchResult> matches = Search(index, seq, q.query_id, inner);
      ranked[qi].reserve(matches.size());
      for (MatchResult &m : matches) ranked[qi].push_back(std::move(m.recording_id));
    });
    std::map<std::string, std::vector<std::string>> rankings;
    for (size_t qi = 0; qi < queries.size(); ++qi)
      rankings.emplace(queries[qi].query_id, std::move(ranked[qi]));

    LayerEvaluation le = EvaluateRankings(layer, rankings, judgments, ks);
    result.grid.insert(result.grid.end(), le.metrics.begin(), le.metrics.end());
    result.excluded_queries = std::move(le.excluded_queries);
    result.truncated_rankings = std::max(result.truncated_rankings, le.truncated_rankings);
  }
  result.best_layer = SelectBestLayers(result.grid);
  result.layer_average = AverageOverLayers(result.grid);
  return result;
}

}  // namespace qbe
