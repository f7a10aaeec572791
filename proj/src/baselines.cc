// Copyright 2026 The iraug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iraug/baselines.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "iraug/error.h"
#include "iraug/random.h"

namespace iraug {

SynonymTable ParseSynonyms(std::istream& in) {
  SynonymTable table;
  std::string line;
  while (std::getline(in, line)) {
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) continue;
    const WordList head = Normalize(line.substr(0, tab));
    if (head.size() != 1) continue;
    std::stringstream ss(line.substr(tab + 1));
    std::string item;
    auto& syns = table[head[0]];
    while (std::getline(ss, item, ',')) {
      const WordList w = Normalize(item);
      if (w.size() != 1 || w[0] == head[0]) continue;
      if (std::find(syns.begin(), syns.end(), w[0]) == syns.end()) syns.push_back(w[0]);
    }
    if (syns.empty()) table.erase(head[0]);
  }
  return table;
}

SynonymTable LoadSynonyms(const std::string& path) {
  std::ifstream in(path);
  if (!in) DataError("cannot open synonym file '" + path + "'");
  return ParseSynonyms(in);
}

std::set<std::string> DefaultStopwords() {
  return {"a",     "an",    "the",   "and",   "or",    "but",   "if",
          "of",    "at",    "by",    "for",   "with",  "about", "to",
          "from",  "in",    "on",    "off",   "up",    "down",  "out",
          "over",  "under", "again", "then",  "once",  "here",  "there",
          "when",  "where", "why",   "how",   "all",   "any",   "both",
          "each",  "few",   "more",  "most",  "other", "some",  "such",
          "no",    "nor",   "not",   "only",  "own",   "same",  "so",
          "than",  "too",   "very",  "can",   "will",  "just",  "should",
          "now",   "i",     "me",    "my",    "we",    "our",   "you",
          "your",  "he",    "him",   "his",   "she",   "her",   "it",
          "its",   "they",  "them",  "their", "what",  "which", "who",
          "whom",  "this",  "that",  "these", "those", "am",    "is",
          "are",   "was",   "were",  "be",    "been",  "being", "have",
          "has",   "had",   "do",    "does",  "did",   "doing", "would",
          "could", "please"};
}

std::set<std::string> LoadStopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) DataError("cannot open stopword file '" + path + "'");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (std::string& w : Normalize(line)) words.insert(std::move(w));
  }
  return words;
}

unsigned ParseEdaOps(const std::string& spec) {
  unsigned ops = 0;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "sr") {
      ops |= kSynonymReplace;
    } else if (item == "ri") {
      ops |= kRandomInsert;
    } else if (item == "rs") {
      ops |= kRandomSwap;
    } else if (item == "rd") {
      ops |= kRandomDelete;
    } else if (!item.empty()) {
      UsageError("unknown EDA operation '" + item + "' (expected sr, ri, rs, rd)");
    }
  }
  return ops;
}

Utterance Eda(const Utterance& utterance, const EdaOptions& options,
              const SynonymTable& synonyms,
              const std::set<std::string>& stopwords, uint64_t seed) {
  if (utterance.words.empty()) UsageError("eda: empty utterance");
  if ((options.ops & (kSynonymReplace | kRandomInsert)) && synonyms.empty()) {
    UsageError("eda: synonym replacement / insertion need a synonym table");
  }
  if (!(options.alpha >= 0.0 && options.alpha <= 1.0)) {
    UsageError("eda: alpha must be in [0,1]");
  }
  Rng rng(seed);
  Utterance out = utterance;
  WordList& w = out.words;
  auto edits = [&] {
    return static_cast<size_t>(std::ceil(options.alpha * static_cast<double>(w.size())));
  };

  if (options.ops & kSynonymReplace) {
    std::vector<size_t> slots;
    for (size_t i = 0; i < w.size(); ++i) {
      if (!stopwords.count(w[i]) && synonyms.count(w[i])) slots.push_back(i);
    }
    Shuffle(slots, rng);
    const size_t n = std::min(edits(), slots.size());
    for (size_t k = 0; k < n; ++k) {
      const auto& syns = synonyms.at(w[slots[k]]);
      w[slots[k]] = syns[UniformIndex(rng, syns.size())];
    }
  }
  if (options.ops & kRandomInsert) {
    const size_t n = edits();
    for (size_t k = 0; k < n; ++k) {
      std::vector<size_t> slots;
      for (size_t i = 0; i < w.size(); ++i) {
        if (synonyms.count(w[i])) slots.push_back(i);
      }
      if (slots.empty()) break;
      const auto& syns = synonyms.at(w[slots[UniformIndex(rng, slots.size())]]);
      const std::string word = syns[UniformIndex(rng, syns.size())];
      w.insert(w.begin() + static_cast<long>(UniformIndex(rng, w.size() + 1)), word);
    }
  }
  if ((options.ops & kRandomSwap) && w.size() >= 2) {
    const size_t n = edits();
    for (size_t k = 0; k < n; ++k) {
      const size_t a = UniformIndex(rng, w.size());
      size_t b = UniformIndex(rng, w.size() - 1);
      if (b >= a) ++b;
      std::swap(w[a], w[b]);
    }
  }
  if ((options.ops & kRandomDelete) && options.alpha > 0.0) {
    WordList kept;
    for (const std::string& word : w) {
      if (UniformReal(rng) >= options.alpha) kept.push_back(word);
    }
    if (kept.empty()) kept.push_back(w[UniformIndex(rng, w.size())]);
    w = std::move(kept);
  }
  return out;
}

void PhraseTable::Add(WordList phrase, Paraphrase paraphrase) {
  if (phrase.empty() || paraphrase.words.empty() || phrase == paraphrase.words) {
    return;
  }
  longest_ = std::max(longest_, phrase.size());
  auto& list = rules_[std::move(phrase)];
  for (const Paraphrase& p : list) {
    if (p.words == paraphrase.words) return;
  }
  list.push_back(std::move(paraphrase));
}

size_t PhraseTable::size() const {
  size_t n = 0;
  for (const auto& [phrase, list] : rules_) n += list.size();
  return n;
}

PhraseTable ParsePhraseTable(std::istream& in) {
  PhraseTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    for (;;) {
      const size_t pos = line.find(" ||| ", start);
      fields.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 5;
    }
    if (fields.size() < 3) {
      table.CountSkipped();
      continue;
    }
    WordList phrase = Normalize(fields[1]);
    Paraphrase para;
    para.words = Normalize(fields[2]);
    if (phrase.empty() || para.words.empty()) {
      table.CountSkipped();
      continue;
    }
    if (fields.size() > 3) {
      std::stringstream features(fields[3]);
      std::string kv;
      while (features >> kv) {
        const size_t eq = kv.find('=');
        if (eq != std::string::npos && kv.substr(0, eq) == "PPDB2.0Score") {
          try {
            para.score = std::stod(kv.substr(eq + 1));
          } catch (const std::exception&) {
          }
        }
      }
    }
    table.Add(std::move(phrase), std::move(para));
  }
  return table;
}

PhraseTable LoadPhraseTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) DataError("cannot open phrase table '" + path + "'");
  return ParsePhraseTable(in);
}

std::vector<PhraseMatch> FindPhraseMatches(const WordList& words,
                                           const PhraseTable& table) {
  std::vector<PhraseMatch> matches;
  const size_t longest = std::min(table.longest(), words.size());
  for (size_t len = longest; len >= 1; --len) {
    for (size_t begin = 0; begin + len <= words.size(); ++begin) {
      const WordList span(words.begin() + begin, words.begin() + begin + len);
      const auto it = table.rules().find(span);
      if (it == table.rules().end()) continue;
      for (const Paraphrase& p : it->second) matches.push_back({begin, len, &p});
    }
  }
  return matches;
}

std::optional<Utterance> PhraseSubstitute(const Utterance& utterance,
                                          const PhraseTable& table,
                                          uint64_t seed, PhraseMatch* applied) {
  const auto matches = FindPhraseMatches(utterance.words, table);
  if (matches.empty()) return std::nullopt;
  Rng rng(seed);
  const PhraseMatch& m = matches[UniformIndex(rng, matches.size())];
  Utterance out = utterance;
  out.words.assign(utterance.words.begin(), utterance.words.begin() + m.begin);
  out.words.insert(out.words.end(), m.paraphrase->words.begin(), m.paraphrase->words.end());
  out.words.insert(out.words.end(), utterance.words.begin() + m.begin + m.length,
                   utterance.words.end());
  if (applied) *applied = m;
  return out;
}

std::vector<AugmentedPair> AugmentEda(const Dataset& dataset,
                                      const EdaOptions& options,
                                      const SynonymTable& synonyms,
                                      const std::set<std::string>& stopwords,
                                      uint64_t seed) {
  std::vector<AugmentedPair> pairs;
  for (const Utterance& u : dataset.utterances()) {
    Utterance r = Eda(u, options, synonyms, stopwords, DeriveSeed(seed, u.id));
    if (r.words == u.words) continue;
    r.id = AugmentedId(u.id, "eda", 0);
    pairs.push_back({u, std::move(r), "eda", {}, {}, std::nullopt});
  }
  return pairs;
}

std::vector<AugmentedPair> AugmentPhrase(const Dataset& dataset,
                                         const PhraseTable& table,
                                         uint64_t seed) {
  std::vector<AugmentedPair> pairs;
  for (const Utterance& u : dataset.utterances()) {
    PhraseMatch m;
    auto r = PhraseSubstitute(u, table, DeriveSeed(seed, u.id), &m);
    if (!r) continue;
    r->id = AugmentedId(u.id, "ppdb", 0);
    AugmentedPair p{u, std::move(*r), "ppdb", {}, m.paraphrase->words, std::nullopt};
    p.replaced_from.assign(u.words.begin() + m.begin, u.words.begin() + m.begin + m.length);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace iraug
