// tests/unit/corpus-manifest-test.cc

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

#include <fstream>

#include <doctest.h>
#include <json.hpp>

#include "qbe/corpus-manifest.h"
#include "qbe/qbe-error.h"
#include "test-util.h"

using namespace qbe;
using qbe::testing::RandomSequence;
using qbe::testing::TempDir;
using nlohmann::json;

namespace {

void WriteJsonFile(const std::filesystem::path &p, const json &j) {
  std::ofstream(p) << j.dump(2);
}

ManifestError::Kind LoadErrorKind(const std::filesystem::path &p, bool strict = false) {
  try {
    LoadManifest(p, {strict});
  } catch (const ManifestError &e) {
    return e.kind();
  }
  FAIL("manifest unexpectedly loaded");
  return ManifestError::Kind::kParse;
}

}  // namespace

TEST_CASE("manifest loads with paths relative to its directory") {
  TempDir dir("man");
  std::mt19937_64 rng(1);
  std::filesystem::create_directories(dir / "feats");
  WriteFeatureFile(RandomSequence(rng, 10, 3, "a", 0), dir / "feats/a.qbef");
  WriteFeatureFile(RandomSequence(rng, 10, 3, "a", kNoLayer), dir / "feats/a.mfcc.qbef");
  WriteJsonFile(dir / "m.json",
                {{"recordings",
                  {{{"id", "a"},
                    {"transcription", "hola casa"},
                    {"features", {{"0", "feats/a.qbef"}, {"mfcc", "feats/a.mfcc.qbef"}}},
                    {"alignments",
                     {{{"word", "hola"}, {"start_s", 0.0}, {"end_s", 0.1}},
                      {{"word", "casa"}, {"start_s", 0.1}, {"end_s", 0.2}}}}}}}});
  CorpusManifest m = LoadManifest(dir / "m.json", {true});
  REQUIRE(m.size() == 1);
  CHECK(m.At("a").alignments.size() == 2);
  CHECK(m.LoadFeatures("a", 0).NumFrames() == 10);
  CHECK(m.LoadFeatures("a", kNoLayer).layer() == kNoLayer);
  CHECK(m.CommonLayers() == std::vector<int>{kNoLayer, 0});
  CHECK(m.MissingLayer(3) == std::vector<std::string>{"a"});

  // Save + reload keeps everything.
  std::filesystem::create_directories(dir / "copy");
  m.Save(dir / "copy/m.json");
  CorpusManifest again = LoadManifest(dir / "copy/m.json", {true});
  CHECK(again.LoadFeatures("a", 0) == m.LoadFeatures("a", 0));
}

TEST_CASE("manifest errors") {
  TempDir dir("manerr");
  auto rec = [](const std::string &id, json alignments = json::array()) {
    return json{{"id", id}, {"transcription", "x"}, {"features", json::object()},
                {"alignments", alignments}};
  };
  using K = ManifestError::Kind;

  SUBCASE("missing file") { CHECK(LoadErrorKind(dir / "none.json") == K::kMissingFile); }
  SUBCASE("not json") {
    std::ofstream(dir / "m.json") << "{not json";
    CHECK(LoadErrorKind(dir / "m.json") == K::kParse);
  }
  SUBCASE("duplicate id lists the ids") {
    WriteJsonFile(dir / "m.json", {{"recordings", {rec("a"), rec("b"), rec("a")}}});
    try {
      LoadManifest(dir / "m.json");
      FAIL("expected duplicate id");
    } catch (const ManifestError &e) {
      CHECK(e.kind() == K::kDuplicateId);
      CHECK(e.ids() == std::vector<std::string>{"a"});
    }
  }
  SUBCASE("inverted span") {
    WriteJsonFile(dir / "m.json",
                  {{"recordings",
                    {rec("a", {{{"word", "w"}, {"start_s", 0.5}, {"end_s", 0.4}}})}}});
    CHECK(LoadErrorKind(dir / "m.json") == K::kBadSpan);
  }
  SUBCASE("overlapping spans") {
    WriteJsonFile(dir / "m.json",
                  {{"recordings",
                    {rec("a", {{{"word", "w"}, {"start_s", 0.0}, {"end_s", 0.4}},
                               {{"word", "v"}, {"start_s", 0.3}, {"end_s", 0.6}}})}}});
    CHECK(LoadErrorKind(dir / "m.json") == K::kOverlappingSpans);
  }
  SUBCASE("strict mode checks feature files") {
    json r = rec("a");
    r["features"] = {{"0", "missing.qbef"}};
    WriteJsonFile(dir / "m.json", {{"recordings", {r}}});
    CHECK_NOTHROW(LoadManifest(dir / "m.json", {false}));
    CHECK(LoadErrorKind(dir / "m.json", true) == K::kUnresolvedPath);
  }
  SUBCASE("strict mode checks source ids") {
    std::mt19937_64 rng(2);
    WriteFeatureFile(RandomSequence(rng, 3, 2, "other", 0), dir / "f.qbef");
    json r = rec("a");
    r["features"] = {{"0", "f.qbef"}};
    WriteJsonFile(dir / "m.json", {{"recordings", {r}}});
    CHECK(LoadErrorKind(dir / "m.json", true) == K::kSourceMismatch);
  }
}

TEST_CASE("query sets round-trip through JSON") {
  TempDir dir("qs");
  std::vector<QuerySpec> qs(3);
  qs[0] = {"q0", "casa", QueryMode::kContextualSlice, std::nullopt, {}, "a", {"casa", 0.1, 0.2}};
  qs[1] = {"q1", "hola", QueryMode::kStandaloneFile, dir / "q1.qbef", {}, "", {}};
  qs[2] = {"q2", "perro", QueryMode::kWordSegment, std::nullopt, {{0, dir / "q2.L0.qbef"}}, "", {}};
  SaveQuerySet(qs, dir / "q.json");
  std::vector<QuerySpec> back = LoadQuerySet(dir / "q.json");
  REQUIRE(back.size() == 3);
  CHECK(back[0].mode == QueryMode::kContextualSlice);
  CHECK(back[0].recording_id == "a");
  CHECK(back[0].span.end_s == 0.2);
  CHECK(back[1].file == dir / "q1.qbef");
  CHECK(back[2].files.at(0) == dir / "q2.L0.qbef");
  CHECK(ParseQueryMode(QueryModeName(QueryMode::kWordSegment)) == QueryMode::kWordSegment);
  CHECK_THROWS_AS(ParseQueryMode("nonsense"), ManifestError);
}

TEST_CASE("query validation") {
  CorpusManifest m({{"a", "hola", {{0, "a.qbef"}}, {}, std::nullopt}});
  std::vector<QuerySpec> qs(1);
  qs[0] = {"q0", "hola", QueryMode::kContextualSlice, std::nullopt, {}, "zzz", {"hola", 0, 1}};
  CHECK_THROWS_AS(ValidateQueries(m, qs, 0), ManifestError);
  qs[0].recording_id = "a";
  CHECK_NOTHROW(ValidateQueries(m, qs, 0));
  CHECK_THROWS_AS(ValidateQueries(m, qs, 4), ManifestError);
}
