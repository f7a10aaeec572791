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

#ifndef IRAUG_METRICS_H_
#define IRAUG_METRICS_H_

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iraug/corpus.h"
#include "iraug/rephraser.h"
#include "json.hpp"

namespace iraug {

// Word vectors of a single fixed dimension; zero vectors are rejected.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(size_t dim) : dim_(dim) {}

  void Add(const std::string& word, std::vector<double> vec);
  const std::vector<double>* Find(const std::string& word) const;
  size_t dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }

 private:
  size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

// "word v1 v2 ... vd" per line.
EmbeddingTable ParseEmbeddings(std::istream& in);
EmbeddingTable LoadEmbeddings(const std::string& path);

// |set(a) & set(b)| / |set(a) | set(b)|.
double Jaccard(const WordList& orig, const WordList& reph);

// Share of the rephrase's n-gram occurrences that occur anywhere in the
// original. nullopt when the rephrase has fewer than n words.
std::optional<double> CopiedNgramFraction(const WordList& orig,
                                          const WordList& reph, size_t n);

// Mean cosine over all in-vocabulary (orig word, reph word) pairs. OOV words
// are skipped and added to *oov.
double WordSemanticSimilarity(const WordList& orig, const WordList& reph,
                              const EmbeddingTable& emb, size_t* oov = nullptr);

// Cosine of the mean-pooled word vectors.
double SentenceSemanticSimilarity(const WordList& orig, const WordList& reph,
                                  const EmbeddingTable& emb,
                                  size_t* oov = nullptr);

struct MetricsReport {
  double jaccard_mean = 0.0;
  std::vector<std::optional<double>> copied_fraction_mean;  // n = 1, 2, 3
  std::vector<size_t> copied_excluded;
  std::optional<double> word_semsim_mean;
  std::optional<double> sentence_semsim_mean;
  size_t semsim_excluded = 0;
  size_t pair_count = 0;
  size_t oov_word_count = 0;

  nlohmann::ordered_json ToJson() const;
};

// emb may be null, in which case the semantic metrics are absent.
MetricsReport Report(const std::vector<AugmentedPair>& pairs,
                     const EmbeddingTable* emb);

}  // namespace iraug

#endif  // IRAUG_METRICS_H_
