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

#include "iraug/mlm.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iraug/error.h"

namespace iraug {

std::vector<std::vector<TokenId>> EncodeCorpus(const Dataset& corpus,
                                               const Vocabulary& vocab,
                                               int max_len,
                                               bool prepend_intent) {
  std::vector<std::vector<TokenId>> out;
  out.reserve(corpus.size());
  for (const Utterance& u : corpus.utterances()) {
    std::vector<TokenId> seq;
    if (prepend_intent) {
      if (!u.intent) DataError("utterance '" + u.id + "' has no intent label");
      const auto tok = vocab.IntentToken(*u.intent);
      if (!tok) MismatchError("vocabulary has no token for intent '" + *u.intent + "'");
      seq.push_back(*tok);
    }
    const auto ids = vocab.Encode(u.words);
    seq.insert(seq.end(), ids.begin(), ids.end());
    if (static_cast<int>(seq.size()) > max_len) seq.resize(max_len);
    out.push_back(std::move(seq));
  }
  return out;
}

template <typename T>
T MlmExampleLoss(const Model<T>& model, const std::vector<TokenId>& masked_ids,
                 int pos, TokenId target, Rng* dropout_rng, Params<T>* grads) {
  ForwardCache<T> cache;
  const Matrix<T> hidden =
      EncodeHidden(model.config, model.params, masked_ids, dropout_rng,
                   grads ? &cache : nullptr);
  const std::vector<T> probs = Softmax(HeadLogits(model.params, hidden, pos));
  const T loss = -std::log(std::max(probs[target], std::numeric_limits<T>::min()));
  if (grads != nullptr) {
    std::vector<T> d_logits = probs;
    d_logits[target] -= T(1);
    Matrix<T> d_hidden(hidden.rows, hidden.cols);
    HeadBackward(model.params, hidden, pos, d_logits, *grads, d_hidden);
    BackwardHidden(model.config, model.params, cache, d_hidden, *grads);
  }
  return loss;
}

MlmTrainReport MlmTrain(Model<float>& model, const Dataset& corpus,
                        const Vocabulary& vocab, const MlmTrainOptions& options) {
  if (corpus.empty()) UsageError("mlm_train: empty corpus");
  if (static_cast<int>(vocab.size()) != model.config.vocab_size) {
    MismatchError("mlm_train: vocabulary size differs from model vocab_size");
  }
  model.vocab_fingerprint = vocab.Fingerprint();
  auto sequences = EncodeCorpus(corpus, vocab, model.config.max_len);
  if (options.intent_prefixed_copies) {
    std::vector<Utterance> labeled;
    for (const Utterance& u : corpus.utterances()) {
      if (u.intent) labeled.push_back(u);
    }
    const auto prefixed =
        EncodeCorpus(Dataset(std::move(labeled)), vocab, model.config.max_len, true);
    sequences.insert(sequences.end(), prefixed.begin(), prefixed.end());
  }
  return MlmTrainSequences(model, sequences, options);
}

MlmTrainReport MlmTrainSequences(
    Model<float>& model, const std::vector<std::vector<TokenId>>& sequences,
    const MlmTrainOptions& options) {
  if (options.epochs < 0 || options.batch < 1 || !(options.lr > 0.0)) {
    UsageError("mlm_train: epochs >= 0, batch >= 1 and lr > 0 required");
  }
  std::vector<const std::vector<TokenId>*> usable;
  for (const auto& s : sequences) {
    if (s.size() >= 2) usable.push_back(&s);
  }
  if (usable.empty()) UsageError("mlm_train: no sequence with at least two tokens");

  MlmTrainReport report;
  report.examples = usable.size();
  const size_t n = usable.size();
  const size_t batches = (n + options.batch - 1) / options.batch;
  const int64_t total_steps = static_cast<int64_t>(batches) * options.epochs;

  AdamOptimizer<float> adam(model.params);
  GradientAccumulator<float> acc(model.params);
  std::vector<size_t> order(n);
  std::vector<int> mask_pos(n);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Rng rng(DeriveSeed(options.seed, "mlm-epoch-" + std::to_string(epoch)));
    std::iota(order.begin(), order.end(), 0);
    Shuffle(order, rng);
    for (size_t i = 0; i < n; ++i) {
      mask_pos[i] = static_cast<int>(UniformIndex(rng, usable[i]->size()));
    }
    double epoch_loss = 0.0;
    for (size_t b = 0; b < batches; ++b) {
      const size_t begin = b * options.batch;
      const size_t end = std::min(n, begin + options.batch);
      const uint64_t batch_seed = rng();
      const double loss = acc.Run(
          end - begin,
          [&](size_t e, Params<float>& grads) {
            const size_t idx = order[begin + e];
            std::vector<TokenId> ids = *usable[idx];
            const int pos = mask_pos[idx];
            const TokenId target = ids[pos];
            ids[pos] = Vocabulary::kMask;
            Rng drop(batch_seed + e);
            return static_cast<double>(
                MlmExampleLoss(model, ids, pos, target, &drop, &grads));
          },
          options.parallel);
      const float inv = 1.0f / static_cast<float>(end - begin);
      for (auto& nt : acc.grads().Tensors()) {
        for (float& g : nt.tensor->data) g *= inv;
      }
      adam.Step(model.params, acc.grads(),
                WarmupLearningRate(options.lr, report.steps, total_steps));
      ++report.steps;
      epoch_loss += loss;
    }
    report.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
  }
  return report;
}

std::vector<TokenProb> PredictMasked(const Model<float>& model,
                                     const std::vector<TokenId>& ids, int pos,
                                     int k) {
  if (pos < 0 || pos >= static_cast<int>(ids.size()) ||
      ids[pos] != Vocabulary::kMask) {
    UsageError("predict_masked: position " + std::to_string(pos) + " is not masked");
  }
  if (k <= 0) return {};
  const Matrix<float> hidden =
      EncodeHidden<float>(model.config, model.params, ids, nullptr, nullptr);
  const std::vector<float> logits = HeadLogits(model.params, hidden, pos);
  std::vector<double> wide(logits.begin(), logits.end());
  const std::vector<double> probs = Softmax(wide);
  std::vector<TokenProb> out;
  out.reserve(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) {
    out.push_back({static_cast<TokenId>(i), probs[i]});
  }
  const size_t keep = std::min(out.size(), static_cast<size_t>(k));
  std::partial_sort(out.begin(), out.begin() + keep, out.end(),
                    [](const TokenProb& a, const TokenProb& b) {
                      return a.prob != b.prob ? a.prob > b.prob : a.id < b.id;
                    });
  out.resize(keep);
  return out;
}

double MaskedAccuracy(const Model<float>& model,
                      const std::vector<std::vector<TokenId>>& sequences,
                      int first_position) {
  size_t total = 0, correct = 0;
  for (const auto& seq : sequences) {
    for (int p = first_position; p < static_cast<int>(seq.size()); ++p) {
      std::vector<TokenId> ids = seq;
      ids[p] = Vocabulary::kMask;
      const auto top = PredictMasked(model, ids, p, 1);
      ++total;
      if (!top.empty() && top[0].id == seq[p]) ++correct;
    }
  }
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

template float MlmExampleLoss(const Model<float>&, const std::vector<TokenId>&,
                              int, TokenId, Rng*, Params<float>*);
template double MlmExampleLoss(const Model<double>&, const std::vector<TokenId>&,
                               int, TokenId, Rng*, Params<double>*);

}  // namespace iraug
