// protocol-corpus.cc

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

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include <unicode/unistr.h>

#include "qbe/qbe-error.h"
#include "qbe/retrieval-eval.h"
#include "qbe/text-norm.h"

namespace qbe {

namespace {

size_t CodePoints(const std::string &utf8) {
  return static_cast<size_t>(icu::UnicodeString::fromUTF8(utf8).countChar32());
}

// First alignment span of `word` (folded) in an entry, if any.
const WordSpan *FindAligned(const ManifestEntry &e, const std::string &word) {
  for (const WordSpan &s : e.alignments) {
    std::vector<std::string> t = Tokenize(s.word);
    if (t.size() == 1 && t[0] == word) return &s;
  }
  return nullptr;
}

}  // namespace

ProtocolCorpus BuildProtocolCorpus(const CorpusManifest &pool,
                                   const ProtocolOptions &opts) {
  if (opts.n_words < 1 || opts.queries_per_word < 1 || opts.n_distractors < 0)
    throw DataError("protocol needs n_words >= 1, queries_per_word >= 1, "
                    "n_distractors >= 0");
  const auto &entries = pool.entries();

  // Which sentences contain each token, and which of those have it aligned.
  std::vector<std::set<std::string>> tokens(entries.size());
  std::map<std::string, std::vector<size_t>> aligned_in;
  for (size_t r = 0; r < entries.size(); ++r) {
    std::vector<std::string> t = Tokenize(entries[r].transcription);
    tokens[r].insert(t.begin(), t.end());
    std::set<std::string> seen;
    for (const WordSpan &s : entries[r].alignments) {
      std::vector<std::string> w = Tokenize(s.word);
      if (w.size() == 1 && tokens[r].count(w[0]) && seen.insert(w[0]).second)
        aligned_in[w[0]].push_back(r);
    }
  }

  std::vector<std::string> candidates;
  for (const auto &[word, rs] : aligned_in)
    if (static_cast<int>(rs.size()) >= opts.queries_per_word &&
        CodePoints(word) >= opts.min_word_chars)
      candidates.push_back(word);

  std::mt19937_64 rng(opts.rng_seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);

  ProtocolCorpus out;
  std::vector<bool> used(entries.size(), false);
  std::vector<std::pair<std::string, std::vector<size_t>>> picks;
  for (const std::string &word : candidates) {
    if (static_cast<int>(picks.size()) == opts.n_words) break;
    std::vector<size_t> avail;
    for (size_t r : aligned_in[word])
      if (!used[r]) avail.push_back(r);
    if (static_cast<int>(avail.size()) < opts.queries_per_word) continue;
    std::shuffle(avail.begin(), avail.end(), rng);
    avail.resize(opts.queries_per_word);
    std::sort(avail.begin(), avail.end());
    for (size_t r : avail) used[r] = true;
    picks.emplace_back(word, std::move(avail));
  }
  if (static_cast<int>(picks.size()) < opts.n_words) {
    std::ostringstream msg;
    msg << "sentence pool supports only " << picks.size() << " target words with "
        << opts.queries_per_word << " aligned sentences each; "
        << opts.n_words << " requested";
    throw DataError(msg.str());
  }

  std::vector<size_t> distractors;
  for (size_t r = 0; r < entries.size(); ++r) {
    if (used[r]) continue;
    bool clean = std::none_of(picks.begin(), picks.end(), [&](const auto &p) {
      return tokens[r].count(p.first) > 0;
    });
    if (clean) distractors.push_back(r);
  }
  if (static_cast<int>(distractors.size()) < opts.n_distractors) {
    std::ostringstream msg;
    msg << "sentence pool has " << distractors.size()
        << " sentences free of the target words; " << opts.n_distractors
        << " distractors requested";
    throw DataError(msg.str());
  }
  std::shuffle(distractors.begin(), distractors.end(), rng);
  distractors.resize(opts.n_distractors);
  for (size_t r : distractors) used[r] = true;

  std::vector<ManifestEntry> selected;
  for (size_t r = 0; r < entries.size(); ++r)
    if (used[r]) selected.push_back(entries[r]);
  out.manifest = CorpusManifest(std::move(selected));

  for (const auto &[word, rs] : picks) {
    out.target_words.push_back(word);
    for (size_t qi = 0; qi < rs.size(); ++qi) {
      const ManifestEntry &e = entries[rs[qi]];
      QuerySpec q;
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), "-%02zu", qi);
      q.query_id = word + suffix;
      q.target_word = word;
      q.mode = opts.mode;
      q.recording_id = e.id;
      q.span = *FindAligned(e, word);
      out.queries.push_back(std::move(q));
    }
  }
  return out;
}

}  // namespace qbe
