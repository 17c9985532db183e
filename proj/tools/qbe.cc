// tools/qbe.cc

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

// Command-line driver: MFCC extraction, representation geometry, search,
// retrieval evaluation, protocol corpus construction and a self test.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbe/corpus-manifest.h"
#include "qbe/feature-io.h"
#include "qbe/geometry.h"
#include "qbe/mfcc.h"
#include "qbe/oracle/brute-force-dtw.h"
#include "qbe/parallel.h"
#include "qbe/qbe-error.h"
#include "qbe/report-json.h"
#include "qbe/retrieval-eval.h"
#include "qbe/search.h"
#include "qbe/subsequence-dtw.h"
#include "qbe/synthetic-corpus.h"
#include "qbe/wav-io.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qbe;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct RunConfig {
  std::string subcommand;
  std::string manifest;
  std::string queries;
  std::string out;
  std::vector<int> layers;
  std::vector<int> ks{1, 2, 3, 5, 10, 20, 50, 100};
  uint64_t seed = 0;
  std::optional<int> workers;
  bool strict = false;

  // analyze
  int64_t pairs = 1000;
  int bins = kDefaultHistogramBins;
  bool histogram_csv = false;
  // search
  int layer = 0;
  int top_k = 10;
  bool emit_paths = false;
  // evaluate
  bool fig2_grid = false;
  bool layer_average = false;
  // make-protocol
  std::string pool;
  bool synthetic = false;
  int words = 30;
  int per_word = 10;
  int distractors = 700;
  std::string mode = "contextual_slice";
  size_t min_word_chars = 3;
  int dim = 16;
  double noise = 0.01;
  double frame_scale = 0.0;
  // extract-mfcc
  int sample_rate = 16000;
  // selftest
  int selftest_cases = 1000;
};

void Log(const std::string &msg) { std::cerr << "qbe: " << msg << '\n'; }

int Workers(const RunConfig &cfg) {
  if (cfg.workers) return std::max(1, *cfg.workers);
  if (const char *env = std::getenv("QBE_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception &) {
      Log(std::string("ignoring unparsable QBE_WORKERS='") + env + "'");
    }
  }
  return DefaultWorkerCount();
}

// Deterministic per-layer substream seed.
uint64_t LayerSeed(uint64_t seed, int layer) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * static_cast<uint64_t>(layer + 2);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string Sha256File(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  EVP_MD_CTX *ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

std::string Timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

std::string Csv(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::vector<int> LayersOrCommon(const RunConfig &cfg, const CorpusManifest &m) {
  if (!cfg.layers.empty()) return cfg.layers;
  std::vector<int> common = m.CommonLayers();
  if (common.empty()) throw DataError("manifest has no layer shared by every recording");
  return common;
}

std::vector<FeatureSequence> LoadLayer(const CorpusManifest &m, int layer, int workers) {
  std::vector<std::string> missing = m.MissingLayer(layer);
  if (!missing.empty())
    throw ManifestError(ManifestError::Kind::kMissingLayer,
                        std::to_string(missing.size()) +
                            " recording(s) lack layer " + std::to_string(layer) +
                            ", first: " + missing.front(),
                        missing);
  std::vector<std::optional<FeatureSequence>> loaded(m.size());
  ParallelFor(m.size(), workers, [&](size_t i) {
    loaded[i].emplace(m.LoadFeatures(m.entries()[i].id, layer));
  });
  std::vector<FeatureSequence> out;
  out.reserve(m.size());
  for (auto &s : loaded) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------

int RunExtractMfcc(const RunConfig &cfg, const fs::path &out) {
  CorpusManifest manifest = LoadManifest(cfg.manifest, {cfg.strict});
  std::vector<std::string> no_audio;
  for (const ManifestEntry &e : manifest.entries())
    if (!e.audio) no_audio.push_back(e.id);
  if (!no_audio.empty())
    throw ManifestError(ManifestError::Kind::kUnresolvedPath,
                        std::to_string(no_audio.size()) +
                            " recording(s) have no 'audio' path, first: " +
                            no_audio.front(),
                        no_audio);
  fs::create_directories(out / "features");
  MfccConfig mfcc;
  mfcc.expected_sample_rate_hz = cfg.sample_rate;

  std::vector<ManifestEntry> entries = manifest.entries();
  ParallelFor(entries.size(), Workers(cfg), [&](size_t i) {
    ManifestEntry &e = entries[i];
    std::string stem;
    for (char c : e.id)
      stem += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
    if (stem != e.id) stem += "-" + std::to_string(i);
    const fs::path path = out / "features" / (stem + ".mfcc.qbef");
    WriteFeatureFile(ComputeMfcc(ReadWav(*e.audio), mfcc, e.id), path);
    e.features[kNoLayer] = path;
  });
  CorpusManifest(std::move(entries)).Save(out / "manifest.json");
  Log("wrote MFCC features for " + std::to_string(manifest.size()) + " recordings");
  return kExitOk;
}

int RunAnalyze(const RunConfig &cfg, const fs::path &out) {
  CorpusManifest manifest = LoadManifest(cfg.manifest, {cfg.strict});
  const int workers = Workers(cfg);
  std::map<std::string, std::string> csv;
  for (const char *s : {"any", "same_recording", "different_recording"})
    csv[s] = "layer,bin_lower,bin_upper,count\n";

  for (int layer : LayersOrCommon(cfg, manifest)) {
    std::vector<FeatureSequence> corpus = LoadLayer(manifest, layer, workers);
    PairSamplingPlan plan{cfg.pairs, PairStratum::kAny, LayerSeed(cfg.seed, layer)};
    json doc;
    doc["layer"] = layer;
    for (PairStratum stratum : {PairStratum::kAny, PairStratum::kSameRecording,
                                PairStratum::kDifferentRecording}) {
      plan.stratum = stratum;
      const std::string name = PairStratumName(stratum);
      try {
        AnisotropyReport r = Anisotropy(corpus, plan, cfg.bins);
        if (stratum == PairStratum::kAny) doc["anisotropy"] = r.expected_cosine;
        doc[name] = ToJson(r);
        for (const HistogramBin &b : r.histogram)
          csv[name] += std::to_string(layer) + "," + Csv(b.lower) + "," +
                       Csv(b.upper) + "," + std::to_string(b.count) + "\n";
      } catch (const DataError &e) {
        if (stratum == PairStratum::kAny) throw;
        Log("layer " + std::to_string(layer) + ": " + e.what());
        doc[name] = nullptr;
      }
    }
    WriteText(out / ("analyze_layer" + std::to_string(layer) + ".json"), doc.dump(2) + "\n");
    Log("layer " + std::to_string(layer) + ": anisotropy " +
        Csv(doc["anisotropy"].get<double>()));
  }
  if (cfg.histogram_csv)
    for (const auto &[name, text] : csv) WriteText(out / ("histogram_" + name + ".csv"), text);
  return kExitOk;
}

int RunRogueDims(const RunConfig &cfg, const fs::path &out) {
  CorpusManifest manifest = LoadManifest(cfg.manifest, {cfg.strict});
  json reports = json::array();
  std::string csv = "layer,max_mean,argmax_dim,std_of_max_dim,second_max_mean,median_of_means\n";
  for (int layer : LayersOrCommon(cfg, manifest)) {
    std::vector<FeatureSequence> corpus = LoadLayer(manifest, layer, Workers(cfg));
    RogueDimensionReport r = RogueDimensions(corpus, layer);
    reports.push_back(ToJson(r));
    csv += std::to_string(layer) + "," + Csv(r.max_mean) + "," + std::to_string(r.argmax_dim) +
           "," + Csv(r.std_of_max_dim) + "," + Csv(r.second_max_mean) + "," +
           Csv(r.median_of_means) + "\n";
  }
  WriteText(out / "rogue_dims.json", reports.dump(2) + "\n");
  WriteText(out / "rogue_dims.csv", csv);
  return kExitOk;
}

int RunSearch(const RunConfig &cfg, const fs::path &out) {
  if (cfg.queries.empty()) throw CLI::ValidationError("--queries is required for search");
  if (cfg.top_k < 1) throw CLI::ValidationError("--top-k must be >= 1");
  CorpusManifest manifest = LoadManifest(cfg.manifest, {cfg.strict});
  std::vector<QuerySpec> queries = LoadQuerySet(cfg.queries);
  ValidateQueries(manifest, queries, cfg.layer);
  SearchOptions opts;
  opts.workers = Workers(cfg);
  opts.top_k_paths = cfg.top_k;
  LayerIndex index(manifest, cfg.layer, opts.workers);

  std::ostringstream lines;
  for (const QuerySpec &q : queries) {
    FeatureSequence seq = ResolveQuery(manifest, q, cfg.layer);
    std::vector<MatchResult> results = Search(index, seq, q.query_id, opts);
    const int n = std::min<int>(cfg.top_k, static_cast<int>(results.size()));
    for (int r = 0; r < n; ++r) {
      json line = SearchLine(results[r], r + 1, seq.frame_rate_hz());
      if (cfg.emit_paths) line["path"] = results[r].path;
      lines << line.dump() << '\n';
    }
  }
  WriteText(out / "search.jsonl", lines.str());
  Log("searched " + std::to_string(queries.size()) + " queries against " +
      std::to_string(index.size()) + " recordings");
  return kExitOk;
}

int RunEvaluate(const RunConfig &cfg, const fs::path &out) {
  if (cfg.queries.empty()) throw CLI::ValidationError("--queries is required for evaluate");
  CorpusManifest manifest = LoadManifest(cfg.manifest, {cfg.strict});
  std::vector<QuerySpec> queries = LoadQuerySet(cfg.queries);
  const std::vector<int> layers = LayersOrCommon(cfg, manifest);
  SearchOptions opts;
  opts.workers = Workers(cfg);
  EvaluationResult result = Evaluate(manifest, queries, layers, cfg.ks, opts);

  std::string csv = "layer,k,precision,recall,f1,n_queries\n";
  for (const RetrievalMetrics &m : result.grid)
    csv += std::to_string(m.layer) + "," + std::to_string(m.k) + "," +
           Csv(m.precision_at_k) + "," + Csv(m.recall_at_k) + "," + Csv(m.f1_at_k) +
           "," + std::to_string(m.n_queries) + "\n";
  WriteText(out / "metrics.csv", csv);

  json best = json::array();
  for (const auto &[k, layer] : result.best_layer) {
    for (const RetrievalMetrics &m : result.grid)
      if (m.k == k && m.layer == layer) best.push_back(ToJson(m));
  }
  json summary = {{"layers", layers},
                  {"ks", cfg.ks},
                  {"n_queries", queries.size()},
                  {"best_layer_per_k", std::move(best)},
                  {"excluded_queries", result.excluded_queries},
                  {"truncated_rankings", result.truncated_rankings}};
  if (cfg.layer_average) {
    json avg = json::array();
    for (const RetrievalMetrics &m : result.layer_average) {
      json j = ToJson(m);
      j.erase("layer");
      avg.push_back(std::move(j));
    }
    summary["layer_average"] = std::move(avg);
  }
  WriteText(out / "summary.json", summary.dump(2) + "\n");

  if (cfg.fig2_grid) {
    std::string grid = "layer,k,precision\n";
    for (const RetrievalMetrics &m : result.grid)
      grid += std::to_string(m.layer) + "," + std::to_string(m.k) + "," +
              Csv(m.precision_at_k) + "\n";
    WriteText(out / "fig2_grid.csv", grid);
  }
  for (const auto &[k, layer] : result.best_layer)
    for (const RetrievalMetrics &m : result.grid)
      if (m.k == k && m.layer == layer)
        Log("k=" + std::to_string(k) + " best layer " + std::to_string(layer) +
            ": P=" + Csv(m.precision_at_k) + " R=" + Csv(m.recall_at_k));
  return kExitOk;
}

int RunMakeProtocol(const RunConfig &cfg, const fs::path &out) {
  if (cfg.synthetic) {
    PlantedCorpusConfig pc;
    pc.n_words = cfg.words;
    pc.recordings_per_word = cfg.per_word;
    pc.n_recordings = cfg.words * cfg.per_word + cfg.distractors;
    pc.dim = cfg.dim;
    pc.planted_noise = cfg.noise;
    pc.frame_scale = cfg.frame_scale;
    pc.seed = cfg.seed;
    std::vector<int> layers = cfg.layers.empty() ? std::vector<int>{0} : cfg.layers;
    WritePlantedCorpus(pc, layers, out);
    Log("wrote synthetic corpus of " + std::to_string(pc.n_recordings) + " recordings");
    return kExitOk;
  }
  if (cfg.pool.empty()) throw CLI::ValidationError("make-protocol needs --pool or --synthetic");
  CorpusManifest pool = LoadManifest(cfg.pool, {cfg.strict});
  ProtocolOptions opts;
  opts.n_words = cfg.words;
  opts.queries_per_word = cfg.per_word;
  opts.n_distractors = cfg.distractors;
  opts.rng_seed = cfg.seed;
  opts.mode = ParseQueryMode(cfg.mode);
  opts.min_word_chars = cfg.min_word_chars;
  ProtocolCorpus pc = BuildProtocolCorpus(pool, opts);
  pc.manifest.Save(out / "manifest.json");
  SaveQuerySet(pc.queries, out / "queries.json");
  WriteText(out / "protocol.json",
            json{{"target_words", pc.target_words},
                 {"n_recordings", pc.manifest.size()},
                 {"n_queries", pc.queries.size()}}
                    .dump(2) + "\n");
  Log("protocol corpus: " + std::to_string(pc.manifest.size()) + " recordings, " +
      std::to_string(pc.queries.size()) + " queries");
  return kExitOk;
}

int RunSelftest(const RunConfig &cfg, const fs::path &out) {
  json checks = json::array();
  bool all_ok = true;
  auto record = [&](const std::string &name, bool ok, const std::string &detail) {
    all_ok &= ok;
    checks.push_back({{"check", name}, {"pass", ok}, {"detail", detail}});
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << '\n';
  };

  std::mt19937_64 rng(cfg.seed);
  {
    std::uniform_int_distribution<int> rows(1, 8), cols(1, 5);
    std::uniform_real_distribution<double> entry(0.0, 2.0);
    double worst = 0.0;
    int invalid = 0;
    for (int t = 0; t < cfg.selftest_cases; ++t) {
      CostMatrix c;
      c.costs.resize(rows(rng), cols(rng));
      for (Eigen::Index i = 0; i < c.costs.size(); ++i) c.costs.data()[i] = entry(rng);
      MatchResult r = SubsequenceDtw(c);
      oracle::BruteForceResult bf = oracle::BruteForceSubsequenceDtw(c.costs);
      worst = std::max(worst, std::abs(r.raw_cost - bf.min_cost));
      if (!oracle::IsValidSubsequencePath(r.path, c.NumTargetFrames(), c.NumQueryFrames()))
        ++invalid;
    }
    record("dtw-oracle", worst < 1e-9 && invalid == 0,
           std::to_string(cfg.selftest_cases) + " matrices, max |delta| " + Csv(worst) +
               ", invalid paths " + std::to_string(invalid));
  }
  {
    FrameMatrix v(1, 3);
    v << 1, 2, 3;
    FrameMatrix w(1, 3);
    w << 4, 5, 6;
    FeatureSequence a(v, 49, "a"), b(w, 49, "b");
    const double c = Cosine(a.Frame(0), b.Frame(0));
    const double expect = 32.0 / (std::sqrt(14.0) * std::sqrt(77.0));
    record("cosine", std::abs(c - expect) < 1e-12, "cos((1,2,3),(4,5,6)) = " + Csv(c));

    std::vector<FeatureSequence> copies(3, FeatureSequence(FrameMatrix(v.replicate(5, 1)), 49, "c"));
    AnisotropyReport rep = Anisotropy(copies, {1000, PairStratum::kAny, cfg.seed});
    record("anisotropy-copies",
           std::abs(rep.expected_cosine - 1.0) < 1e-6 &&
               rep.one_minus_expected_cosine == 1.0 - rep.expected_cosine,
           "expected_cosine " + Csv(rep.expected_cosine));
  }
  {
    MfccComputer mfcc(MfccConfig{}, 16000);
    record("mfcc-frame-count", mfcc.NumFrames(16000) == 98,
           "1 s at 16 kHz -> " + std::to_string(mfcc.NumFrames(16000)) + " frames");
  }
  WriteText(out / "selftest.json", json{{"pass", all_ok}, {"checks", checks}}.dump(2) + "\n");
  return all_ok ? kExitOk : kExitRuntime;
}

int Dispatch(const RunConfig &cfg) {
  const fs::path out(cfg.out);
  fs::create_directories(out);
  if (cfg.subcommand == "extract-mfcc") return RunExtractMfcc(cfg, out);
  if (cfg.subcommand == "analyze") return RunAnalyze(cfg, out);
  if (cfg.subcommand == "rogue-dims") return RunRogueDims(cfg, out);
  if (cfg.subcommand == "search") return RunSearch(cfg, out);
  if (cfg.subcommand == "evaluate") return RunEvaluate(cfg, out);
  if (cfg.subcommand == "make-protocol") return RunMakeProtocol(cfg, out);
  if (cfg.subcommand == "selftest") return RunSelftest(cfg, out);
  throw CLI::ValidationError("unknown subcommand " + cfg.subcommand);
}

void WriteRunRecord(const RunConfig &cfg, int status, const std::string &started,
                    const std::string &error) {
  json inputs = json::object();
  for (const std::string &p : {cfg.manifest, cfg.queries, cfg.pool})
    if (!p.empty()) inputs[p] = Sha256File(p);
  json record = {
      {"subcommand", cfg.subcommand},
      {"version", QBE_VERSION},
      {"config",
       {{"manifest", cfg.manifest}, {"queries", cfg.queries}, {"pool", cfg.pool},
        {"out", cfg.out}, {"layers", cfg.layers}, {"ks", cfg.ks},
        {"seed", cfg.seed}, {"workers", Workers(cfg)}, {"strict", cfg.strict},
        {"pairs", cfg.pairs}, {"bins", cfg.bins}, {"layer", cfg.layer},
        {"top_k", cfg.top_k}, {"synthetic", cfg.synthetic}, {"words", cfg.words},
        {"per_word", cfg.per_word}, {"distractors", cfg.distractors},
        {"mode", cfg.mode}, {"noise", cfg.noise}, {"dim", cfg.dim}}},
      {"inputs", std::move(inputs)},
      {"started_at", started},
      {"finished_at", Timestamp()},
      {"exit_status", status}};
  if (!error.empty()) record["error"] = error;
  try {
    fs::create_directories(cfg.out);
    WriteText(fs::path(cfg.out) / "run.json", record.dump(2) + "\n");
  } catch (const std::exception &e) {
    Log(std::string("could not write run.json: ") + e.what());
  }
}

}  // namespace

int main(int argc, char **argv) {
  RunConfig cfg;
  CLI::App app{"Query-by-example spoken term detection with subsequence DTW"};
  app.set_version_flag("--version", QBE_VERSION);
  app.require_subcommand(1);

  auto common = [&cfg](CLI::App *sub, bool needs_manifest) {
    auto *m = sub->add_option("--manifest", cfg.manifest, "Corpus manifest (JSON)");
    if (needs_manifest) m->required()->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.out, "Output directory")->required();
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--workers", cfg.workers,
                    "Worker threads (default: $QBE_WORKERS, else all cores)");
    sub->add_flag("--strict", cfg.strict, "Validate every feature file upfront");
  };
  auto layers = [&cfg](CLI::App *sub) {
    sub->add_option("--layers", cfg.layers, "Comma-separated layer list (default: all)")
        ->delimiter(',');
  };

  CLI::App *extract = app.add_subcommand("extract-mfcc", "Compute 13-dim MFCC feature files");
  common(extract, true);
  extract->add_option("--sample-rate", cfg.sample_rate, "Required audio sample rate (0: any)");

  CLI::App *analyze = app.add_subcommand("analyze", "Anisotropy and similarity distributions");
  common(analyze, true);
  layers(analyze);
  analyze->add_option("--pairs", cfg.pairs, "Frame pairs sampled per stratum")->check(CLI::PositiveNumber);
  analyze->add_option("--bins", cfg.bins, "Histogram bins over [-1, 1]")->check(CLI::PositiveNumber);
  analyze->add_flag("--histogram-csv", cfg.histogram_csv, "Also write histogram CSVs");

  CLI::App *rogue = app.add_subcommand("rogue-dims", "Rogue-dimension statistics per layer");
  common(rogue, true);
  layers(rogue);

  CLI::App *search = app.add_subcommand("search", "Rank recordings for each query");
  common(search, true);
  search->add_option("--queries", cfg.queries, "Query set (JSON)")->required()->check(CLI::ExistingFile);
  search->add_option("--layer", cfg.layer, "Feature layer (-1 for MFCC)");
  search->add_option("--top-k", cfg.top_k, "Results per query");
  search->add_flag("--emit-paths", cfg.emit_paths, "Include alignment paths");

  CLI::App *evaluate = app.add_subcommand("evaluate", "Precision@k / Recall@k per layer");
  common(evaluate, true);
  layers(evaluate);
  evaluate->add_option("--queries", cfg.queries, "Query set (JSON)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--k", cfg.ks, "Comma-separated k list")->delimiter(',');
  evaluate->add_flag("--fig2-grid", cfg.fig2_grid, "Dump the layer x k precision grid");
  evaluate->add_flag("--layer-average", cfg.layer_average, "Add metrics averaged over layers");

  CLI::App *protocol = app.add_subcommand("make-protocol", "Build an evaluation corpus and query set");
  common(protocol, false);
  layers(protocol);
  protocol->add_option("--pool", cfg.pool, "Transcribed, aligned sentence pool (manifest)")
      ->check(CLI::ExistingFile);
  protocol->add_flag("--synthetic", cfg.synthetic, "Generate a planted synthetic corpus instead");
  protocol->add_option("--words", cfg.words, "Target words");
  protocol->add_option("--per-word", cfg.per_word, "Query sentences per word");
  protocol->add_option("--distractors", cfg.distractors, "Sentences without any target word");
  protocol->add_option("--mode", cfg.mode, "Query mode")
      ->check(CLI::IsMember({"contextual_slice", "word_segment"}));
  protocol->add_option("--min-word-chars", cfg.min_word_chars, "Shortest eligible target word");
  protocol->add_option("--dim", cfg.dim, "Synthetic feature dimension");
  protocol->add_option("--noise", cfg.noise, "Synthetic planted-copy noise std");
  protocol->add_option("--frame-scale", cfg.frame_scale, "Synthetic frame std (0: 1/sqrt(dim))");

  CLI::App *selftest = app.add_subcommand("selftest", "DTW oracle and geometry sanity checks");
  common(selftest, false);
  selftest->add_option("--cases", cfg.selftest_cases, "Random DTW oracle cases");

  const std::string started = Timestamp();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  int status = kExitRuntime;
  std::string error;
  try {
    status = Dispatch(cfg);
  } catch (const CLI::Error &e) {
    error = e.what();
    status = kExitUsage;
  } catch (const DataError &e) {
    error = e.what();
    status = kExitData;
  } catch (const std::exception &e) {
    error = e.what();
    status = kExitRuntime;
  }
  if (!error.empty()) Log("error: " + error);
  WriteRunRecord(cfg, status, started, error);
  return status;
}
