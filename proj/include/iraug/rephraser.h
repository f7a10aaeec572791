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

#ifndef IRAUG_REPHRASER_H_
#define IRAUG_REPHRASER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iraug/corpus.h"
#include "iraug/encoder.h"
#include "iraug/vocab.h"
#include "json.hpp"

namespace iraug {

enum class PositionMode { kAll, kMultiwordOnly };

struct RephraseCandidate {
  size_t position = 0;  // token index in the utterance encoding
  std::pair<size_t, size_t> word_span;  // words covered by the original token
  TokenId original_id = 0;
  TokenId replacement_id = 0;
  double probability = 0.0;
  WordList rephrase_words;
};

struct DecodePolicy {
  enum class Kind { kGreedy, kSample };
  Kind kind = Kind::kGreedy;
  double temperature = 1.0;

  static DecodePolicy Greedy() { return {}; }
  static DecodePolicy Sample(double temperature) {
    return {Kind::kSample, temperature};
  }
};

struct RephraseOptions {
  int k = 10;  // candidates kept per position
  PositionMode positions = PositionMode::kMultiwordOnly;
  double min_prob = 0.01;
  DecodePolicy policy;
};

// Masks each eligible position in turn and collects the model's top-k
// substitutes, excluding the original token and all special tokens. Sorted
// by probability (descending), then position, then token id.
std::vector<RephraseCandidate> Candidates(const Model<float>& model,
                                          const Vocabulary& vocab,
                                          const Utterance& utterance, int k,
                                          PositionMode positions);

// Picks one candidate with probability >= min_prob: the best one (greedy)
// or a draw with weight prob^(1/temperature). Labels are copied.
std::optional<Utterance> RephraseOne(const Model<float>& model,
                                     const Vocabulary& vocab,
                                     const Utterance& utterance,
                                     const RephraseOptions& options,
                                     uint64_t seed);

// One augmented training example, either from the rephraser or from a
// baseline augmenter.
struct AugmentedPair {
  Utterance original;
  Utterance rephrase;  // same domain / intent as the original
  std::string source;
  WordList replaced_from;
  WordList replaced_to;
  std::optional<double> prob;
};

// Up to `per_input` distinct rephrases per utterance. Each utterance uses a
// seed derived from (seed, utterance id), so results do not depend on
// scheduling.
std::vector<AugmentedPair> Augment(const Dataset& dataset,
                                   const Model<float>& model,
                                   const Vocabulary& vocab, int per_input,
                                   const RephraseOptions& options,
                                   uint64_t seed);

// Augmented output line: dataset record plus "source", "orig_id" and
// "replaced": {"from", "to", "prob"}.
std::string SerializeAugmented(const AugmentedPair& pair);
void SaveAugmented(const std::vector<AugmentedPair>& pairs,
                   const std::string& path);

// Reads augmented records back; "orig_id" must name an utterance in
// `originals` (data error otherwise).
std::vector<AugmentedPair> LoadAugmented(const std::string& path,
                                         const Dataset& originals);

// Builds the id of the k-th rephrase of `original_id` from `source`.
std::string AugmentedId(const std::string& original_id,
                        const std::string& source, int k);

}  // namespace iraug

#endif  // IRAUG_REPHRASER_H_
