// qbe/corpus-manifest.h

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

#ifndef QBE_CORPUS_MANIFEST_H_
#define QBE_CORPUS_MANIFEST_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qbe/feature-io.h"

namespace qbe {

struct ManifestEntry {
  std::string id;
  std::string transcription;
  // layer -> feature file; kNoLayer holds MFCC features. Paths are resolved
  // against the manifest directory at load time.
  std::map<int, std::filesystem::path> features;
  // Sorted by start_s and non-overlapping.
  std::vector<WordSpan> alignments;
  // Source WAV, used by MFCC extraction.
  std::optional<std::filesystem::path> audio;
};

/// Index of the recordings in a corpus. Entry-level invariants (unique ids,
/// ordered non-overlapping spans) are checked at construction; feature files
/// are only opened when requested, unless ValidateFeatures() is called.
class CorpusManifest {
 public:
  CorpusManifest() = default;
  explicit CorpusManifest(std::vector<ManifestEntry> entries);

  const std::vector<ManifestEntry> &entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

  // nullptr if the id is unknown.
  const ManifestEntry *Find(const std::string &id) const;
  const ManifestEntry &At(const std::string &id) const;

  /// Reads the feature file for (id, layer) and checks that it belongs to
  /// that recording and layer.
  FeatureSequence LoadFeatures(const std::string &id, int layer) const;

  // Ids of entries that have no feature file for `layer`.
  std::vector<std::string> MissingLayer(int layer) const;
  // Layers present in every entry, ascending.
  std::vector<int> CommonLayers() const;

  /// Opens and validates every referenced feature file. Throws ManifestError
  /// (kUnresolvedPath / kSourceMismatch) listing every offending recording.
  void ValidateFeatures() const;

  /// Writes the manifest as JSON, with paths relative to the file's directory.
  void Save(const std::filesystem::path &path) const;

 private:
  std::vector<ManifestEntry> entries_;
  std::unordered_map<std::string, size_t> index_;
};

struct ManifestOptions {
  bool strict = false;
};

CorpusManifest LoadManifest(const std::filesystem::path &path,
                            const ManifestOptions &opts = {});

// Throws ManifestError if spans are unordered, overlapping or malformed.
void ValidateSpans(const std::string &recording_id,
                   std::span<const WordSpan> spans);

enum class QueryMode { kStandaloneFile, kWordSegment, kContextualSlice };

const char *QueryModeName(QueryMode mode);
QueryMode ParseQueryMode(const std::string &name);

/// A target word and the place its frames come from.
///  - kStandaloneFile: `file` (any layer) or per-layer `files`.
///  - kWordSegment: features of the excised word audio, per layer in `files`;
///    `recording_id` and `span` locate the word in its source recording.
///  - kContextualSlice: frames are sliced from the recording's own features.
struct QuerySpec {
  std::string query_id;
  std::string target_word;
  QueryMode mode = QueryMode::kContextualSlice;
  std::optional<std::filesystem::path> file;
  std::map<int, std::filesystem::path> files;
  std::string recording_id;
  WordSpan span;
};

std::vector<QuerySpec> LoadQuerySet(const std::filesystem::path &path);
void SaveQuerySet(std::span<const QuerySpec> queries,
                  const std::filesystem::path &path);

/// Checks query ids are unique and, for the given layer, that every query
/// referencing a recording can be resolved against `manifest`.
void ValidateQueries(const CorpusManifest &manifest,
                     std::span<const QuerySpec> queries, int layer);

}  // namespace qbe

#endif  // QBE_CORPUS_MANIFEST_H_
