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

#ifndef IRAUG_CORPUS_H_
#define IRAUG_CORPUS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iraug {

using WordList = std::vector<std::string>;

struct Utterance {
  std::string id;
  WordList words;
  std::optional<std::string> domain;
  std::optional<std::string> intent;

  bool operator==(const Utterance&) const = default;
};

// A list of utterances together with the label inventories. Label lists are
// kept in first-appearance order.
class Dataset {
 public:
  Dataset() = default;

  // Validates the utterance invariants (unique ids, non-empty normalized
  // words) and builds the label lists. Throws a data error on violation.
  explicit Dataset(std::vector<Utterance> utterances);

  const std::vector<Utterance>& utterances() const { return utterances_; }
  const std::vector<std::string>& domain_labels() const {
    return domain_labels_;
  }
  const std::vector<std::string>& intent_labels() const {
    return intent_labels_;
  }
  size_t size() const { return utterances_.size(); }
  bool empty() const { return utterances_.empty(); }

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<Utterance> utterances_;
  std::vector<std::string> domain_labels_;
  std::vector<std::string> intent_labels_;
};

// Lowercases, keeps letters, digits, apostrophes and whitespace, and splits
// on whitespace runs.
WordList Normalize(std::string_view raw_text);

std::string JoinWords(const WordList& words, std::string_view sep = " ");

// True if the word satisfies the Utterance word invariant.
bool IsNormalizedWord(std::string_view word);

// Parses one JSON-lines record. `line_number` is 1-based and is used for
// autogenerated ids and error messages.
Utterance ParseRecord(std::string_view line, size_t line_number);
std::string SerializeRecord(const Utterance& u);

Dataset LoadDataset(const std::string& path);
// Concatenates several files; ids must stay unique across all of them.
Dataset LoadDatasets(const std::vector<std::string>& paths);
void SaveDataset(const Dataset& dataset, const std::string& path);

struct SplitResult {
  Dataset train;
  Dataset heldout;
};

// Deterministic stratified split. Strata are intents when any utterance has
// one, otherwise domains, otherwise the whole set.
SplitResult Split(const Dataset& dataset, double heldout_fraction,
                  uint64_t seed);

// A group of word sequences that can replace each other without changing
// meaning. When `intent` is set the group is used only by that intent.
struct InterchangeableSet {
  std::vector<WordList> members;
  std::optional<int> intent;
};

struct SynthOptions {
  int content_words = 2;       // intent-specific words per utterance
  int content_pool = 8;        // distinct content words per intent
  double shared_content = 0.0; // chance a content word comes from a pool
                               // shared by all intents
  double member_skew = 0.0;    // Zipf exponent over set members; 0 = uniform
  // Seed for the content word pools; the generation seed when unset. Two
  // datasets with the same content seed share their intent vocabularies.
  std::optional<uint64_t> content_seed;
};

struct SynthResult {
  Dataset dataset;
  std::vector<InterchangeableSet> sets;  // ground truth for test oracles
};

// Builds a labeled dataset in which the members of each interchangeable set
// are interchangeable by construction. Each intent gets
// max(templates_per_intent, largest referenced set) utterances and every
// member of every referenced set appears at least once per intent.
SynthResult SynthDataset(int n_intents, int templates_per_intent,
                         const std::vector<InterchangeableSet>& sets,
                         uint64_t seed, const SynthOptions& options = {});

// The built-in sets used by the `synth` subcommand when no file is given.
std::vector<InterchangeableSet> DefaultInterchangeableSets();

// Reads sets from a text file: one set per line, members separated by '|',
// optional leading "<intent index><TAB>" to bind a set to one intent.
std::vector<InterchangeableSet> LoadInterchangeableSets(
    const std::string& path);

std::string IntentName(int index);

}  // namespace iraug

#endif  // IRAUG_CORPUS_H_
