// synthetic-corpus.cc

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

#include "qbe/synthetic-corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "qbe/qbe-error.h"

namespace qbe {

namespace fs = std::filesystem;

namespace {

std::string RecordingId(int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "rec%05d", i);
  return buf;
}

std::string WordName(int w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "word%02d", w);
  return buf;
}

}  // namespace

PlantedCorpus GeneratePlantedCorpus(const PlantedCorpusConfig &cfg, int layer) {
  if (cfg.n_recordings < 1 || cfg.dim < 1 || cfg.template_frames < 1 ||
      cfg.min_frames < cfg.template_frames || cfg.max_frames < cfg.min_frames)
    throw DataError("invalid planted-corpus shape");
  if (int64_t(cfg.n_words) * cfg.recordings_per_word > cfg.n_recordings)
    throw DataError("more planted recordings requested than recordings");
  if (cfg.planted_noise < 0.0 || cfg.frame_scale < 0.0)
    throw DataError("noise and frame scale must be non-negative");

  const double scale = cfg.frame_scale > 0.0 ? cfg.frame_scale : 1.0 / std::sqrt(cfg.dim);
  const auto lo = static_cast<uint32_t>(cfg.seed);
  const auto hi = static_cast<uint32_t>(cfg.seed >> 32);
  std::seed_seq structure_seed{lo, hi};
  std::mt19937_64 rng(structure_seed);
  std::seed_seq noise_seed{lo, hi, static_cast<uint32_t>(layer + 0x10000), 0x0015eu};
  std::mt19937_64 noise_rng(noise_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::uniform_int_distribution<int> length(cfg.min_frames, cfg.max_frames);
  std::vector<int> lengths(cfg.n_recordings);
  for (int &n : lengths) n = length(rng);

  std::vector<FrameMatrix> frames(cfg.n_recordings);
  for (int r = 0; r < cfg.n_recordings; ++r) {
    frames[r].resize(lengths[r], cfg.dim);
    for (Eigen::Index i = 0; i < frames[r].size(); ++i)
      frames[r].data()[i] = static_cast<float>(scale * gauss(rng));
  }

  std::vector<Eigen::MatrixXd> templates(cfg.n_words);
  for (Eigen::MatrixXd &t : templates) {
    t.resize(cfg.template_frames, cfg.dim);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = scale * gauss(rng);
  }

  std::vector<int> order(cfg.n_recordings);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  PlantedCorpus out;
  for (int w = 0; w < cfg.n_words; ++w) out.words.push_back(WordName(w));
  out.entries.resize(cfg.n_recordings);
  for (int r = 0; r < cfg.n_recordings; ++r) {
    out.entries[r].id = RecordingId(r);
    out.entries[r].transcription = "lorem ipsum";
  }

  const double rate = cfg.frame_rate_hz;
  for (int w = 0; w < cfg.n_words; ++w) {
    for (int q = 0; q < cfg.recordings_per_word; ++q) {
      const int r = order[w * cfg.recordings_per_word + q];
      std::uniform_int_distribution<int> where(0, lengths[r] - cfg.template_frames);
      const int pos = where(rng);
      for (int i = 0; i < cfg.template_frames; ++i)
        for (int d = 0; d < cfg.dim; ++d)
          frames[r](pos + i, d) = static_cast<float>(
              templates[w](i, d) + cfg.planted_noise * gauss(noise_rng));

      // Quarter-frame inset keeps the span's frame range exact under
      // floating-point rounding.
      WordSpan span{out.words[w], (pos + 0.25) / rate,
                    (pos + cfg.template_frames - 0.25) / rate};
      ManifestEntry &e = out.entries[r];
      e.transcription = "lorem " + out.words[w] + " ipsum";
      e.alignments = {span};

      QuerySpec query;
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), "-%02d", q);
      query.query_id = out.words[w] + suffix;
      query.target_word = out.words[w];
      query.mode = QueryMode::kContextualSlice;
      query.recording_id = e.id;
      query.span = span;
      out.queries.push_back(std::move(query));
    }
  }

  out.recordings.reserve(cfg.n_recordings);
  for (int r = 0; r < cfg.n_recordings; ++r)
    out.recordings.emplace_back(std::move(frames[r]), cfg.frame_rate_hz,
                                out.entries[r].id, layer);
  return out;
}

void WritePlantedCorpus(const PlantedCorpusConfig &config,
                        std::span<const int> layers, const fs::path &dir) {
  if (layers.empty()) throw DataError("no layers requested");
  fs::create_directories(dir / "features");
  std::vector<ManifestEntry> entries;
  std::vector<QuerySpec> queries;
  for (int layer : layers) {
    PlantedCorpus corpus = GeneratePlantedCorpus(config, layer);
    if (entries.empty()) {
      entries = corpus.entries;
      queries = corpus.queries;
    }
    for (size_t r = 0; r < corpus.recordings.size(); ++r) {
      fs::path path = dir / "features" /
                      (entries[r].id + ".L" + std::to_string(layer) + ".qbef");
      WriteFeatureFile(corpus.recordings[r], path);
      entries[r].features[layer] = path;
    }
  }
  CorpusManifest(std::move(entries)).Save(dir / "manifest.json");
  SaveQuerySet(queries, dir / "queries.json");
}

}  // namespace qbe
