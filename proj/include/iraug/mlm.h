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

#ifndef IRAUG_MLM_H_
#define IRAUG_MLM_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "iraug/corpus.h"
#include "iraug/encoder.h"
#include "iraug/vocab.h"

namespace iraug {

struct MlmTrainOptions {
  int epochs = 10;
  double lr = 1e-3;
  int batch = 32;
  uint64_t seed = 0;
  bool parallel = true;
  // Also train on a copy of every intent-labeled utterance with its intent
  // token prepended, so a later fine-tuning stage starts from a model that
  // has seen the prefixed layout.
  bool intent_prefixed_copies = false;
};

struct MlmTrainReport {
  std::vector<double> epoch_loss;  // mean loss per epoch
  int64_t steps = 0;
  size_t examples = 0;  // sequences used per epoch
};

// Encodes every utterance, truncating to `max_len` tokens (including the
// optional intent prefix).
std::vector<std::vector<TokenId>> EncodeCorpus(const Dataset& corpus,
                                               const Vocabulary& vocab,
                                               int max_len,
                                               bool prepend_intent = false);

// Cross-entropy of the masked position. `masked_ids[pos]` must be MASK.
// When `grads` is non-null the gradient is added into it.
template <typename T>
T MlmExampleLoss(const Model<T>& model, const std::vector<TokenId>& masked_ids,
                 int pos, TokenId target, Rng* dropout_rng, Params<T>* grads);

// Trains with one uniformly chosen masked position per sequence and epoch.
// Sequences shorter than two tokens are skipped; no usable sequence is a
// usage error.
MlmTrainReport MlmTrain(Model<float>& model, const Dataset& corpus,
                        const Vocabulary& vocab, const MlmTrainOptions& options);
MlmTrainReport MlmTrainSequences(
    Model<float>& model, const std::vector<std::vector<TokenId>>& sequences,
    const MlmTrainOptions& options);

struct TokenProb {
  TokenId id;
  double prob;
  bool operator==(const TokenProb&) const = default;
};

// Top-k of the softmax at `pos`, descending, ties by lower id. Throws a
// usage error when ids[pos] is not MASK.
std::vector<TokenProb> PredictMasked(const Model<float>& model,
                                     const std::vector<TokenId>& ids, int pos,
                                     int k);

// Top-1 accuracy over every (sequence, position) with that position masked.
// Positions before `first_position` (an intent prefix) are skipped.
double MaskedAccuracy(const Model<float>& model,
                      const std::vector<std::vector<TokenId>>& sequences,
                      int first_position = 0);

}  // namespace iraug

#endif  // IRAUG_MLM_H_
