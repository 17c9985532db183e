// corpus-manifest.cc

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

#include "qbe/corpus-manifest.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qbe/qbe-error.h"

namespace qbe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string JoinIds(const std::vector<std::string> &ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i == 8) {
      out += ", ... (" + std::to_string(ids.size()) + " total)";
      break;
    }
    if (i) out += ", ";
    out += ids[i];
  }
  return out;
}

int ParseLayerKey(const std::string &key, const std::string &owner) {
  if (key == "none" || key == "mfcc") return kNoLayer;
  size_t used = 0;
  int layer = 0;
  try {
    layer = std::stoi(key, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != key.size() || key.empty() || layer < kNoLayer)
    throw ManifestError(ManifestError::Kind::kParse,
                        "invalid layer key '" + key + "' in " + owner);
  return layer;
}

fs::path Resolve(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string RelativeTo(const fs::path &p, const fs::path &dir) {
  fs::path abs_p = fs::absolute(p).lexically_normal();
  fs::path abs_dir = fs::absolute(dir).lexically_normal();
  fs::path rel = abs_p.lexically_relative(abs_dir);
  return (rel.empty() ? abs_p : rel).generic_string();
}

json ReadJson(const fs::path &path, const char *what) {
  std::ifstream in(path);
  if (!in)
    throw ManifestError(ManifestError::Kind::kMissingFile,
                        std::string("cannot open ") + what + " " +
                            path.string());
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw ManifestError(ManifestError::Kind::kParse,
                        path.string() + ": " + e.what());
  }
}

void WriteJson(const json &doc, const fs::path &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

std::map<int, fs::path> ParseFeatureMap(const json &obj, const fs::path &base,
                                        const std::string &owner) {
  std::map<int, fs::path> out;
  if (!obj.is_object())
    throw ManifestError(ManifestError::Kind::kParse,
                        "'features' of " + owner + " must be an object");
  for (const auto &[key, value] : obj.items()) {
    int layer = ParseLayerKey(key, owner);
    if (!out.emplace(layer, Resolve(base, value.get<std::string>())).second)
      throw ManifestError(ManifestError::Kind::kParse,
                          "layer " + key + " listed twice in " + owner);
  }
  return out;
}

json FeatureMapToJson(const std::map<int, fs::path> &features,
                      const fs::path &dir) {
  json obj = json::object();
  for (const auto &[layer, path] : features)
    obj[std::to_string(layer)] = RelativeTo(path, dir);
  return obj;
}

}  // namespace

void ValidateSpans(const std::string &recording_id,
                   std::span<const WordSpan> spans) {
  for (size_t i = 0; i < spans.size(); ++i) {
    const WordSpan &s = spans[i];
    if (!(s.start_s >= 0.0) || !(s.end_s > s.start_s)) {
      std::ostringstream msg;
      msg << "recording '" << recording_id << "': span '" << s.word << "' ["
          << s.start_s << ", " << s.end_s << ") is not a valid interval";
      throw ManifestError(ManifestError::Kind::kBadSpan, msg.str(),
                          {recording_id});
    }
    if (i > 0 && s.start_s < spans[i - 1].end_s) {
      std::ostringstream msg;
      msg << "recording '" << recording_id << "': span '" << s.word
          << "' starting at " << s.start_s << " s overlaps or precedes '"
          << spans[i - 1].word << "' ending at " << spans[i - 1].end_s << " s";
      throw ManifestError(ManifestError::Kind::kOverlappingSpans, msg.str(),
                          {recording_id});
    }
  }
}

CorpusManifest::CorpusManifest(std::vector<ManifestEntry> entries)
    : entries_(std::move(entries)) {
  std::vector<std::string> dups;
  for (size_t i = 0; i < entries_.size(); ++i) {
    const ManifestEntry &e = entries_[i];
    if (e.id.empty())
      throw ManifestError(ManifestError::Kind::kParse,
                          "recording with empty id at position " +
                              std::to_string(i));
    if (!index_.emplace(e.id, i).second) dups.push_back(e.id);
    ValidateSpans(e.id, e.alignments);
  }
  if (!dups.empty())
    throw ManifestError(ManifestError::Kind::kDuplicateId,
                        "duplicate recording id(s): " + JoinIds(dups), dups);
}

const ManifestEntry *CorpusManifest::Find(const std::string &id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const ManifestEntry &CorpusManifest::At(const std::string &id) const {
  const ManifestEntry *e = Find(id);
  if (!e)
    throw ManifestError(ManifestError::Kind::kUnknownRecording,
                        "unknown recording '" + id + "'", {id});
  return *e;
}

FeatureSequence CorpusManifest::LoadFeatures(const std::string &id,
                                             int layer) const {
  const ManifestEntry &e = At(id);
  auto it = e.features.find(layer);
  if (it == e.features.end())
    throw ManifestError(ManifestError::Kind::kMissingLayer,
                        "recording '" + id + "' has no features for layer " +
                            std::to_string(layer),
                        {id});
  FeatureSequence seq = ReadFeatureFile(it->second);
  if (seq.source_id() != id || seq.layer() != layer) {
    std::ostringstream msg;
    msg << it->second.string() << " holds source '" << seq.source_id()
        << "' layer " << seq.layer() << ", manifest expects '" << id
        << "' layer " << layer;
    throw ManifestError(ManifestError::Kind::kSourceMismatch, msg.str(), {id});
  }
  return seq;
}

std::vector<std::string> CorpusManifest::MissingLayer(int layer) const {
  std::vector<std::string> ids;
  for (const ManifestEntry &e : entries_)
    if (!e.features.count(layer)) ids.push_back(e.id);
  return ids;
}

std::vector<int> CorpusManifest::CommonLayers() const {
  std::vector<int> layers;
  if (entries_.empty()) return layers;
  for (const auto &[layer, path] : entries_.front().features) {
    bool everywhere = std::all_of(
        entries_.begin(), entries_.end(),
        [layer = layer](const ManifestEntry &e) { return e.features.count(layer); });
    if (everywhere) layers.push_back(layer);
  }
  return layers;
}

void CorpusManifest::ValidateFeatures() const {
  std::vector<std::string> unresolved, mismatched;
  std::string first_error;
  for (const ManifestEntry &e : entries_) {
    for (const auto &[layer, path] : e.features) {
      try {
        LoadFeatures(e.id, layer);
      } catch (const ManifestError &err) {
        if (first_error.empty()) first_error = err.what();
        mismatched.push_back(e.id);
        break;
      } catch (const FeatureFileError &err) {
        if (first_error.empty()) first_error = err.what();
        unresolved.push_back(e.id);
        break;
      }
    }
  }
  if (!unresolved.empty())
    throw ManifestError(ManifestError::Kind::kUnresolvedPath,
                        "unreadable feature files for " + JoinIds(unresolved) +
                            " (first: " + first_error + ")",
                        unresolved);
  if (!mismatched.empty())
    throw ManifestError(ManifestError::Kind::kSourceMismatch,
                        "feature files do not match their recordings: " +
                            JoinIds(mismatched) + " (first: " + first_error +
                            ")",
                        mismatched);
}

void CorpusManifest::Save(const fs::path &path) const {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : ".";
  json recs = json::array();
  for (const ManifestEntry &e : entries_) {
    json r;
    r["id"] = e.id;
    r["transcription"] = e.transcription;
    r["features"] = FeatureMapToJson(e.features, dir);
    json spans = json::array();
    for (const WordSpan &s : e.alignments)
      spans.push_back({{"word", s.word}, {"start_s", s.start_s}, {"end_s", s.end_s}});
    r["alignments"] = std::move(spans);
    if (e.audio) r["audio"] = RelativeTo(*e.audio, dir);
    recs.push_back(std::move(r));
  }
  WriteJson(json{{"recordings", std::move(recs)}}, path);
}

CorpusManifest LoadManifest(const fs::path &path, const ManifestOptions &opts) {
  json doc = ReadJson(path, "manifest");
  const fs::path base = path.has_parent_path() ? path.parent_path() : ".";
  std::vector<ManifestEntry> entries;
  try {
    if (!doc.is_object() || !doc.contains("recordings") ||
        !doc["recordings"].is_array())
      throw ManifestError(ManifestError::Kind::kParse,
                          path.string() + ": expected {\"recordings\": [...]}");
    for (const json &r : doc["recordings"]) {
      ManifestEntry e;
      e.id = r.at("id").get<std::string>();
      e.transcription = r.value("transcription", std::string());
      if (r.contains("features"))
        e.features = ParseFeatureMap(r["features"], base, "recording '" + e.id + "'");
      if (r.contains("alignments")) {
        for (const json &s : r["alignments"])
          e.alignments.push_back({s.at("word").get<std::string>(),
                                  s.at("start_s").get<double>(),
                                  s.at("end_s").get<double>()});
      }
      if (r.contains("audio"))
        e.audio = Resolve(base, r["audio"].get<std::string>());
      entries.push_back(std::move(e));
    }
  } catch (const json::exception &e) {
    throw ManifestError(ManifestError::Kind::kParse,
                        path.string() + ": " + e.what());
  }
  CorpusManifest manifest(std::move(entries));
  if (opts.strict) manifest.ValidateFeatures();
  return manifest;
}

const char *QueryModeName(QueryMode mode) {
  switch (mode) {
    case QueryMode::kStandaloneFile: return "standalone_file";
    case QueryMode::kWordSegment: return "word_segment";
    case QueryMode::kContextualSlice: return "contextual_slice";
  }
  return "?";
}

QueryMode ParseQueryMode(const std::string &name) {
  if (name == "standalone_file") return QueryMode::kStandaloneFile;
  if (name == "word_segment") return QueryMode::kWordSegment;
  if (name == "contextual_slice") return QueryMode::kContextualSlice;
  throw ManifestError(ManifestError::Kind::kBadQuery,
                      "unknown query mode '" + name + "'");
}

std::vector<QuerySpec> LoadQuerySet(const fs::path &path) {
  json doc = ReadJson(path, "query set");
  const fs::path base = path.has_parent_path() ? path.parent_path() : ".";
  if (!doc.is_array())
    throw ManifestError(ManifestError::Kind::kParse,
                        path.string() + ": query set must be a JSON list");
  std::vector<QuerySpec> queries;
  try {
    for (const json &q : doc) {
      QuerySpec spec;
      spec.query_id = q.at("query_id").get<std::string>();
      spec.target_word = q.at("target_word").get<std::string>();
      spec.mode = ParseQueryMode(q.at("mode").get<std::string>());
      const json &src = q.at("source");
      const std::string owner = "query '" + spec.query_id + "'";
      if (src.is_string()) {
        if (spec.mode != QueryMode::kStandaloneFile)
          throw ManifestError(ManifestError::Kind::kBadQuery,
                              owner + ": a path source requires standalone_file",
                              {spec.query_id});
        spec.file = Resolve(base, src.get<std::string>());
      } else {
        if (src.contains("file"))
          spec.file = Resolve(base, src["file"].get<std::string>());
        if (src.contains("features"))
          spec.files = ParseFeatureMap(src["features"], base, owner);
        if (spec.mode != QueryMode::kStandaloneFile) {
          spec.recording_id = src.at("recording_id").get<std::string>();
          spec.span = {src.value("word", spec.target_word),
                       src.at("start_s").get<double>(),
                       src.at("end_s").get<double>()};
        }
      }
      queries.push_back(std::move(spec));
    }
  } catch (const json::exception &e) {
    throw ManifestError(ManifestError::Kind::kParse,
                        path.string() + ": " + e.what());
  }
  return queries;
}

void SaveQuerySet(std::span<const QuerySpec> queries, const fs::path &path) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : ".";
  json doc = json::array();
  for (const QuerySpec &q : queries) {
    json src = json::object();
    if (q.mode == QueryMode::kStandaloneFile && q.file && q.files.empty()) {
      src = RelativeTo(*q.file, dir);
    } else {
      if (q.file) src["file"] = RelativeTo(*q.file, dir);
      if (!q.files.empty()) src["features"] = FeatureMapToJson(q.files, dir);
      if (q.mode != QueryMode::kStandaloneFile) {
        src["recording_id"] = q.recording_id;
        src["start_s"] = q.span.start_s;
        src["end_s"] = q.span.end_s;
      }
    }
    doc.push_back({{"query_id", q.query_id},
                   {"target_word", q.target_word},
                   {"mode", QueryModeName(q.mode)},
                   {"source", std::move(src)}});
  }
  WriteJson(doc, path);
}

void ValidateQueries(const CorpusManifest &manifest,
                     std::span<const QuerySpec> queries, int layer) {
  std::set<std::string> seen;
  for (const QuerySpec &q : queries) {
    auto bad = [&q](ManifestError::Kind kind, const std::string &why) {
      return ManifestError(kind, "query '" + q.query_id + "': " + why,
                           {q.query_id});
    };
    if (q.query_id.empty())
      throw ManifestError(ManifestError::Kind::kBadQuery, "query with empty id");
    if (!seen.insert(q.query_id).second)
      throw bad(ManifestError::Kind::kDuplicateId, "duplicate query id");
    if (q.target_word.empty())
      throw bad(ManifestError::Kind::kBadQuery, "empty target word");
    switch (q.mode) {
      case QueryMode::kStandaloneFile:
        if (!q.file && !q.files.count(layer))
          throw bad(ManifestError::Kind::kMissingLayer,
                    "no query file for layer " + std::to_string(layer));
        break;
      case QueryMode::kWordSegment: {
        const ManifestEntry *e = manifest.Find(q.recording_id);
        if (!e)
          throw bad(ManifestError::Kind::kUnknownRecording,
                    "source recording '" + q.recording_id + "' not in manifest");
        if (!q.file && !q.files.count(layer) &&
            !(layer == kNoLayer && e->audio))
          throw bad(ManifestError::Kind::kMissingLayer,
                    "no word-segment features for layer " +
                        std::to_string(layer));
        ValidateSpans(q.recording_id, std::span(&q.span, 1));
        break;
      }
      case QueryMode::kContextualSlice: {
        const ManifestEntry *e = manifest.Find(q.recording_id);
        if (!e)
          throw bad(ManifestError::Kind::kUnknownRecording,
                    "source recording '" + q.recording_id + "' not in manifest");
        if (!e->features.count(layer))
          throw bad(ManifestError::Kind::kMissingLayer,
                    "source recording '" + q.recording_id +
                        "' has no features for layer " + std::to_string(layer));
        ValidateSpans(q.recording_id, std::span(&q.span, 1));
        break;
      }
    }
  }
}

}  // namespace qbe
