// qbe/synthetic-corpus.h

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

#ifndef QBE_SYNTHETIC_CORPUS_H_
#define QBE_SYNTHETIC_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qbe/corpus-manifest.h"
#include "qbe/feature-io.h"

namespace qbe {

/// Planted-word corpus: i.i.d. Gaussian recordings, some of which carry a
/// copy of a fixed per-word template (plus noise) at a random position.
struct PlantedCorpusConfig {
  int n_recordings = 1000;
  int dim = 16;
  int min_frames = 50;
  int max_frames = 200;
  int n_words = 30;
  int recordings_per_word = 10;
  int template_frames = 10;
  // Per-dimension std of background and template frames; 0 means
  // 1/sqrt(dim), i.e. unit expected norm.
  double frame_scale = 0.0;
  // Per-dimension std of the noise added to each planted copy.
  double planted_noise = 0.01;
  float frame_rate_hz = 49.0f;
  uint64_t seed = 1;
};

struct PlantedCorpus {
  std::vector<std::string> words;
  // Manifest entries without feature paths (transcription + the planted
  // word's span); index-aligned with `recordings`.
  std::vector<ManifestEntry> entries;
  std::vector<FeatureSequence> recordings;
  // One contextual_slice query per planted recording.
  std::vector<QuerySpec> queries;
};

/// Everything except the planted noise is drawn from a stream that depends
/// only on `seed`, so corpora differing in planted_noise or layer share
/// recordings, templates and positions. Noise depends on (seed, layer).
PlantedCorpus GeneratePlantedCorpus(const PlantedCorpusConfig &config,
                                    int layer = 0);

/// Writes <dir>/features/<id>.L<layer>.qbef for each layer, plus
/// <dir>/manifest.json and <dir>/queries.json.
void WritePlantedCorpus(const PlantedCorpusConfig &config,
                        std::span<const int> layers,
                        const std::filesystem::path &dir);

}  // namespace qbe

#endif  // QBE_SYNTHETIC_CORPUS_H_
