// qbe/search.h

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

#ifndef QBE_SEARCH_H_
#define QBE_SEARCH_H_

#include <span>
#include <string>
#include <vector>

#include "qbe/corpus-manifest.h"
#include "qbe/mfcc.h"
#include "qbe/subsequence-dtw.h"

namespace qbe {

struct SearchOptions {
  int workers = 1;
  // Results ranked < top_k_paths also get their full alignment path.
  int top_k_paths = 0;
};

/// Every recording of a manifest at one layer, loaded and unit-normalised
/// once so many queries can be searched against it. Read-only after
/// construction.
class LayerIndex {
 public:
  /// Throws ManifestError(kMissingLayer) listing every recording without
  /// features at `layer`.
  LayerIndex(const CorpusManifest &manifest, int layer, int workers = 1);
  // In-memory recordings; ids are their source_ids and must be unique.
  explicit LayerIndex(std::span<const FeatureSequence> recordings);

  int layer() const { return layer_; }
  size_t size() const { return recordings_.size(); }
  const NormalizedFrames &recording(size_t i) const { return recordings_[i]; }

 private:
  int layer_;
  std::vector<NormalizedFrames> recordings_;
};

/// The query's frames at `layer`:
///  - standalone_file / word_segment: the query's own feature file; for
///    word_segment at kNoLayer without a file, MFCCs of the excised audio.
///  - contextual_slice: the span sliced out of the source recording.
FeatureSequence ResolveQuery(const CorpusManifest &manifest,
                             const QuerySpec &query, int layer,
                             const MfccConfig &mfcc = {});

/// One MatchResult per recording, ascending by normalized_cost, ties by
/// recording id. Deterministic for any worker count.
std::vector<MatchResult> Search(const LayerIndex &index,
                                const FeatureSequence &query,
                                const std::string &query_id,
                                const SearchOptions &opts = {});

std::vector<MatchResult> Search(const CorpusManifest &manifest,
                                const QuerySpec &query, int layer,
                                const SearchOptions &opts = {});

}  // namespace qbe

#endif  // QBE_SEARCH_H_
