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

#ifndef IRAUG_FINETUNE_H_
#define IRAUG_FINETUNE_H_

// Intent-preserving fine-tuning. For a query utterance with one masked
// token t, let R be the model's softmax output at the masked position and
// d_1..d_k the softmax outputs at the masked positions of k utterances of
// other intents. With Q the one-hot vector of t,
//
//   sim(x, y) = x.y / (|x||y|)
//   P(R|Q)    = exp(sim(Q,R)) / sum_{d in {R, d_1..d_k}} exp(sim(Q,d))
//   loss      = -log P(R|Q), averaged over examples.
//
// Every sequence carries its utterance's intent token as a prefix.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "iraug/corpus.h"
#include "iraug/encoder.h"
#include "iraug/vocab.h"

namespace iraug {

// Cosine similarity. Usage error on length mismatch, numeric error when
// either vector is zero.
double CosineSim(std::span<const double> x, std::span<const double> y);

// P(R|Q) over D = {r} + negs.
double NegSoftmaxProb(std::span<const double> q, std::span<const double> r,
                      const std::vector<std::span<const double>>& negs);

struct MaskedSequence {
  std::vector<TokenId> ids;  // exactly one MASK
  int pos = 0;
};

struct FinetuneExample {
  MaskedSequence query;
  TokenId target_id = 0;
  std::vector<MaskedSequence> negatives;
};

template <typename T>
T FinetuneExampleLoss(const Model<T>& model, const FinetuneExample& example,
                      Rng* dropout_rng, Params<T>* grads);

struct FinetuneOptions {
  int negatives_per_example = 2;
  int epochs = 10;
  double lr = 1e-4;
  int batch = 16;
  uint64_t seed = 0;
  bool parallel = true;
  // Optional curated negatives: intent -> intents to draw negatives from.
  // Intents without an entry draw from every other intent.
  std::map<std::string, std::vector<std::string>> negative_intents;
};

struct FinetuneReport {
  std::vector<double> epoch_loss;
  int64_t steps = 0;
};

// Builds one epoch's examples: a uniformly masked content position per
// utterance and negatives drawn uniformly from other-intent utterances.
std::vector<FinetuneExample> BuildFinetuneExamples(
    const Dataset& corpus, const Vocabulary& vocab, int max_len,
    const FinetuneOptions& options, Rng& rng);

// Fine-tunes in place. Marks the model as fine-tuned and records the intent
// token table. Usage error when the corpus has fewer than two intents or an
// utterance lacks an intent.
FinetuneReport Finetune(Model<float>& model, const Dataset& corpus,
                        const Vocabulary& vocab, const FinetuneOptions& options);

// Reads "intent<TAB>neg1,neg2,..." lines.
std::map<std::string, std::vector<std::string>> LoadNegativeIntents(
    const std::string& path);

}  // namespace iraug

#endif  // IRAUG_FINETUNE_H_
