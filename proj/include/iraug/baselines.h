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

#ifndef IRAUG_BASELINES_H_
#define IRAUG_BASELINES_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iraug/corpus.h"
#include "iraug/rephraser.h"

namespace iraug {

// word -> synonyms. Self-synonyms are removed on load.
using SynonymTable = std::map<std::string, std::vector<std::string>>;

// "word<TAB>syn1,syn2,..." per line.
SynonymTable LoadSynonyms(const std::string& path);
SynonymTable ParseSynonyms(std::istream& in);

std::set<std::string> DefaultStopwords();
// One word per line.
std::set<std::string> LoadStopwords(const std::string& path);

// EDA operations.
enum EdaOp : unsigned {
  kSynonymReplace = 1u << 0,  // sr
  kRandomInsert = 1u << 1,    // ri
  kRandomSwap = 1u << 2,      // rs
  kRandomDelete = 1u << 3,    // rd
};

// Parses a comma list such as "sr,rs".
unsigned ParseEdaOps(const std::string& spec);

struct EdaOptions {
  unsigned ops = kSynonymReplace | kRandomInsert | kRandomSwap | kRandomDelete;
  double alpha = 0.1;
};

// Applies each selected operation once, in the order sr, ri, rs, rd, with
// n = ceil(alpha * length) edits for sr / ri / rs and per-word deletion
// probability alpha for rd (the last remaining word is never deleted).
Utterance Eda(const Utterance& utterance, const EdaOptions& options,
              const SynonymTable& synonyms,
              const std::set<std::string>& stopwords, uint64_t seed);

struct Paraphrase {
  WordList words;
  double score = 0.0;
};

// Phrase -> paraphrases, parsed from PPDB lines
// "LHS ||| PHRASE ||| PARAPHRASE ||| FEATURES ||| ALIGNMENT ||| ENTAILMENT".
class PhraseTable {
 public:
  void Add(WordList phrase, Paraphrase paraphrase);

  const std::map<WordList, std::vector<Paraphrase>>& rules() const {
    return rules_;
  }
  size_t longest() const { return longest_; }
  size_t skipped() const { return skipped_; }
  size_t size() const;
  void CountSkipped() { ++skipped_; }

 private:
  std::map<WordList, std::vector<Paraphrase>> rules_;
  size_t longest_ = 0;
  size_t skipped_ = 0;
};

PhraseTable ParsePhraseTable(std::istream& in);
PhraseTable LoadPhraseTable(const std::string& path);

struct PhraseMatch {
  size_t begin = 0;
  size_t length = 0;
  const Paraphrase* paraphrase = nullptr;
};

// All (position, rule) matches, longest phrases first, then left to right.
std::vector<PhraseMatch> FindPhraseMatches(const WordList& words,
                                           const PhraseTable& table);

// Samples one match uniformly and applies it; nullopt when nothing matches.
std::optional<Utterance> PhraseSubstitute(const Utterance& utterance,
                                          const PhraseTable& table,
                                          uint64_t seed,
                                          PhraseMatch* applied = nullptr);

// 1-1 wrappers producing labeled augmented pairs.
std::vector<AugmentedPair> AugmentEda(const Dataset& dataset,
                                      const EdaOptions& options,
                                      const SynonymTable& synonyms,
                                      const std::set<std::string>& stopwords,
                                      uint64_t seed);
std::vector<AugmentedPair> AugmentPhrase(const Dataset& dataset,
                                         const PhraseTable& table,
                                         uint64_t seed);

}  // namespace iraug

#endif  // IRAUG_BASELINES_H_
