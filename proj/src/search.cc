// search.cc

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

#include "qbe/search.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "qbe/parallel.h"
#include "qbe/qbe-error.h"

namespace qbe {

LayerIndex::LayerIndex(const CorpusManifest &manifest, int layer, int workers)
    : layer_(layer) {
  std::vector<std::string> missing = manifest.MissingLayer(layer);
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << missing.size() << " recording(s) have no features for layer "
        << layer << ":";
    for (size_t i = 0; i < missing.size() && i < 20; ++i) msg << ' ' << missing[i];
    if (missing.size() > 20) msg << " ...";
    throw ManifestError(ManifestError::Kind::kMissingLayer, msg.str(), missing);
  }
  const auto &entries = manifest.entries();
  std::vector<std::optional<NormalizedFrames>> loaded(entries.size());
  ParallelFor(entries.size(), workers, [&](size_t i) {
    loaded[i].emplace(manifest.LoadFeatures(entries[i].id, layer));
  });
  recordings_.reserve(entries.size());
  for (auto &r : loaded) recordings_.push_back(std::move(*r));
}

LayerIndex::LayerIndex(std::span<const FeatureSequence> recordings)
    : layer_(recordings.empty() ? kNoLayer : recordings.front().layer()) {
  std::set<std::string> ids;
  for (const FeatureSequence &s : recordings) {
    if (!ids.insert(s.source_id()).second)
      throw ManifestError(ManifestError::Kind::kDuplicateId,
                          "duplicate recording id '" + s.source_id() + "'",
                          {s.source_id()});
    recordings_.emplace_back(s);
  }
}

FeatureSequence ResolveQuery(const CorpusManifest &manifest,
                             const QuerySpec &query, int layer,
                             const MfccConfig &mfcc) {
  auto missing = [&](const std::string &why) {
    return ManifestError(ManifestError::Kind::kMissingLayer,
                         "query '" + query.query_id + "': " + why,
                         {query.query_id});
  };
  switch (query.mode) {
    case QueryMode::kStandaloneFile:
    case QueryMode::kWordSegment: {
      auto it = query.files.find(layer);
      if (it != query.files.end()) return ReadFeatureFile(it->second);
      if (query.file) return ReadFeatureFile(*query.file);
      if (query.mode == QueryMode::kWordSegment && layer == kNoLayer) {
        const ManifestEntry &src = manifest.At(query.recording_id);
        if (src.audio) {
          ValidateSpans(query.recording_id, std::span(&query.span, 1));
          AudioBuffer audio = ReadWav(*src.audio);
          if (query.span.end_s > audio.DurationSeconds() + 1e-9)
            throw DataError("query '" + query.query_id +
                            "': span ends beyond the source audio");
          return ComputeMfcc(SliceAudio(audio, query.span.start_s, query.span.end_s),
                             mfcc, query.query_id);
        }
      }
      throw missing("no feature file for layer " + std::to_string(layer));
    }
    case QueryMode::kContextualSlice: {
      FeatureSequence full = manifest.LoadFeatures(query.recording_id, layer);
      return SliceBySpan(full, query.span);
    }
  }
  throw Error("unreachable");
}

std::vector<MatchResult> Search(const LayerIndex &index,
                                const FeatureSequence &query,
                                const std::string &query_id,
                                const SearchOptions &opts) {
  const NormalizedFrames q(query);
  std::vector<MatchResult> results(index.size());
  ParallelFor(index.size(), opts.workers, [&](size_t i) {
    const NormalizedFrames &target = index.recording(i);
    if (std::abs(target.frame_rate_hz() - q.frame_rate_hz()) >
        1e-3f * target.frame_rate_hz()) {
      std::ostringstream msg;
      msg << "query '" << query_id << "' has frame rate " << q.frame_rate_hz()
          << " Hz but recording '" << target.source_id() << "' has "
          << target.frame_rate_hz() << " Hz";
      throw DataError(msg.str());
    }
    results[i] = SubsequenceDtwCost(ComputeCostMatrix(target, q, query_id));
  });

  std::sort(results.begin(), results.end(),
            [](const MatchResult &a, const MatchResult &b) {
              if (a.normalized_cost != b.normalized_cost)
                return a.normalized_cost < b.normalized_cost;
              return a.recording_id < b.recording_id;
            });

  const size_t n_paths = std::min<size_t>(std::max(opts.top_k_paths, 0), results.size());
  if (n_paths > 0) {
    std::unordered_map<std::string, size_t> by_id;
    for (size_t i = 0; i < index.size(); ++i) by_id[index.recording(i).source_id()] = i;
    ParallelFor(n_paths, opts.workers, [&](size_t r) {
      const NormalizedFrames &target = index.recording(by_id.at(results[r].recording_id));
      results[r] = SubsequenceDtw(ComputeCostMatrix(target, q, query_id));
    });
  }
  return results;
}

std::vector<MatchResult> Search(const CorpusManifest &manifest,
                                const QuerySpec &query, int layer,
                                const SearchOptions &opts) {
  FeatureSequence q = ResolveQuery(manifest, query, layer);
  LayerIndex index(manifest, layer, opts.workers);
  return Search(index, q, query.query_id, opts);
}

}  // namespace qbe
