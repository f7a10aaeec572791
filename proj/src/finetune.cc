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

#include "iraug/finetune.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "iraug/error.h"
#include "iraug/mlm.h"

namespace iraug {

double CosineSim(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) UsageError("cosine_sim: vectors differ in length");
  double dot = 0.0, xx = 0.0, yy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  if (xx == 0.0 || yy == 0.0) NumericError("cosine_sim: zero vector");
  return std::clamp(dot / (std::sqrt(xx) * std::sqrt(yy)), -1.0, 1.0);
}

double NegSoftmaxProb(std::span<const double> q, std::span<const double> r,
                      const std::vector<std::span<const double>>& negs) {
  if (r.size() != q.size()) UsageError("neg_softmax_prob: dimension mismatch");
  for (const auto& d : negs) {
    if (d.size() != q.size()) UsageError("neg_softmax_prob: dimension mismatch");
  }
  const double s_r = CosineSim(q, r);
  double z = std::exp(s_r);
  for (const auto& d : negs) z += std::exp(CosineSim(q, d));
  return std::exp(s_r) / z;
}

namespace {

template <typename T>
struct MaskedOutput {
  ForwardCache<T> cache;
  Matrix<T> hidden;
  std::vector<T> probs;
};

template <typename T>
MaskedOutput<T> RunMasked(const Model<T>& model, const MaskedSequence& seq,
                          Rng* dropout_rng, bool keep_cache) {
  MaskedOutput<T> out;
  out.hidden = EncodeHidden(model.config, model.params, seq.ids, dropout_rng,
                            keep_cache ? &out.cache : nullptr);
  out.probs = Softmax(HeadLogits(model.params, out.hidden, seq.pos));
  return out;
}

}  // namespace

template <typename T>
T FinetuneExampleLoss(const Model<T>& model, const FinetuneExample& example,
                      Rng* dropout_rng, Params<T>* grads) {
  const bool backward = grads != nullptr;
  std::vector<MaskedOutput<T>> outs;
  outs.push_back(RunMasked(model, example.query, dropout_rng, backward));
  for (const MaskedSequence& neg : example.negatives) {
    outs.push_back(RunMasked(model, neg, dropout_rng, backward));
  }
  const TokenId t = example.target_id;

  // With a one-hot Q, sim(Q, v) = v_t / |v|.
  std::vector<T> sims, norms;
  for (const auto& o : outs) {
    T sq = 0;
    for (T p : o.probs) sq += p * p;
    norms.push_back(std::sqrt(sq));
    sims.push_back(o.probs[t] / norms.back());
  }
  const std::vector<T> p = Softmax(sims);
  const T loss = -std::log(p[0]);
  if (!backward) return loss;

  std::vector<const MaskedSequence*> seqs = {&example.query};
  for (const MaskedSequence& n : example.negatives) seqs.push_back(&n);
  for (size_t k = 0; k < outs.size(); ++k) {
    const T d_sim = p[k] - (k == 0 ? T(1) : T(0));
    const std::vector<T>& v = outs[k].probs;
    const T norm = norms[k];
    const T norm3 = norm * norm * norm;
    // d sim / d v_j = [j == t] / |v| - v_t v_j / |v|^3
    std::vector<T> dv(v.size());
    for (size_t j = 0; j < v.size(); ++j) dv[j] = -d_sim * v[t] * v[j] / norm3;
    dv[t] += d_sim / norm;
    // Softmax Jacobian: dz_j = v_j (dv_j - sum_i v_i dv_i).
    T dot = 0;
    for (size_t j = 0; j < v.size(); ++j) dot += v[j] * dv[j];
    std::vector<T> dz(v.size());
    for (size_t j = 0; j < v.size(); ++j) dz[j] = v[j] * (dv[j] - dot);
    Matrix<T> d_hidden(outs[k].hidden.rows, outs[k].hidden.cols);
    HeadBackward(model.params, outs[k].hidden, seqs[k]->pos, dz, *grads, d_hidden);
    BackwardHidden(model.config, model.params, outs[k].cache, d_hidden, *grads);
  }
  return loss;
}

std::vector<FinetuneExample> BuildFinetuneExamples(
    const Dataset& corpus, const Vocabulary& vocab, int max_len,
    const FinetuneOptions& options, Rng& rng) {
  const auto seqs = EncodeCorpus(corpus, vocab, max_len, /*prepend_intent=*/true);
  const auto& utts = corpus.utterances();
  std::map<std::string, std::vector<size_t>> by_intent;
  for (size_t i = 0; i < utts.size(); ++i) {
    if (seqs[i].size() >= 2) by_intent[*utts[i].intent].push_back(i);
  }
  // Negative pools per intent, in corpus order.
  std::map<std::string, std::vector<size_t>> pools;
  for (const auto& [intent, members] : by_intent) {
    std::vector<size_t>& pool = pools[intent];
    const auto curated = options.negative_intents.find(intent);
    for (size_t i = 0; i < utts.size(); ++i) {
      if (seqs[i].size() < 2 || *utts[i].intent == intent) continue;
      if (curated != options.negative_intents.end() &&
          std::find(curated->second.begin(), curated->second.end(),
                    *utts[i].intent) == curated->second.end()) {
        continue;
      }
      pool.push_back(i);
    }
  }
  auto mask_random = [&](size_t i) {
    MaskedSequence m;
    m.ids = seqs[i];
    m.pos = 1 + static_cast<int>(UniformIndex(rng, m.ids.size() - 1));
    return m;
  };
  std::vector<FinetuneExample> examples;
  for (size_t i = 0; i < utts.size(); ++i) {
    if (seqs[i].size() < 2) continue;
    const auto& pool = pools[*utts[i].intent];
    if (pool.empty()) continue;
    FinetuneExample ex;
    ex.query = mask_random(i);
    ex.target_id = ex.query.ids[ex.query.pos];
    ex.query.ids[ex.query.pos] = Vocabulary::kMask;
    for (int k = 0; k < options.negatives_per_example; ++k) {
      MaskedSequence neg = mask_random(pool[UniformIndex(rng, pool.size())]);
      neg.ids[neg.pos] = Vocabulary::kMask;
      ex.negatives.push_back(std::move(neg));
    }
    examples.push_back(std::move(ex));
  }
  return examples;
}

FinetuneReport Finetune(Model<float>& model, const Dataset& corpus,
                        const Vocabulary& vocab, const FinetuneOptions& options) {
  if (static_cast<int>(vocab.size()) != model.config.vocab_size) {
    MismatchError("finetune: vocabulary size differs from model vocab_size");
  }
  for (const Utterance& u : corpus.utterances()) {
    if (!u.intent) UsageError("finetune: utterance '" + u.id + "' has no intent");
  }
  if (corpus.intent_labels().size() < 2) {
    UsageError("finetune: need at least two distinct intents");
  }
  if (options.negatives_per_example < 1 || options.batch < 1 || options.epochs < 0) {
    UsageError("finetune: negatives >= 1, batch >= 1, epochs >= 0 required");
  }
  std::map<std::string, TokenId> intent_tokens;
  for (const std::string& intent : corpus.intent_labels()) {
    const auto tok = vocab.IntentToken(intent);
    if (!tok) MismatchError("vocabulary has no token for intent '" + intent + "'");
    intent_tokens[intent] = *tok;
  }

  FinetuneReport report;
  AdamOptimizer<float> adam(model.params);
  GradientAccumulator<float> acc(model.params);
  int64_t total_steps = 0;
  {
    Rng probe(options.seed);
    const size_t n = BuildFinetuneExamples(corpus, vocab, model.config.max_len,
                                           options, probe).size();
    if (n == 0) UsageError("finetune: no usable examples");
    total_steps = static_cast<int64_t>((n + options.batch - 1) / options.batch) *
                  options.epochs;
  }
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Rng rng(DeriveSeed(options.seed, "finetune-epoch-" + std::to_string(epoch)));
    std::vector<FinetuneExample> examples =
        BuildFinetuneExamples(corpus, vocab, model.config.max_len, options, rng);
    Shuffle(examples, rng);
    const size_t n = examples.size();
    double epoch_loss = 0.0;
    for (size_t begin = 0; begin < n; begin += options.batch) {
      const size_t end = std::min(n, begin + options.batch);
      const uint64_t batch_seed = rng();
      epoch_loss += acc.Run(
          end - begin,
          [&](size_t e, Params<float>& grads) {
            Rng drop(batch_seed + e);
            return static_cast<double>(
                FinetuneExampleLoss(model, examples[begin + e], &drop, &grads));
          },
          options.parallel);
      const float inv = 1.0f / static_cast<float>(end - begin);
      for (auto& nt : acc.grads().Tensors()) {
        for (float& g : nt.tensor->data) g *= inv;
      }
      adam.Step(model.params, acc.grads(),
                WarmupLearningRate(options.lr, report.steps, total_steps));
      ++report.steps;
    }
    report.epoch_loss.push_back(n ? epoch_loss / static_cast<double>(n) : 0.0);
  }
  model.finetuned = true;
  model.intent_tokens = std::move(intent_tokens);
  model.vocab_fingerprint = vocab.Fingerprint();
  return report;
}

std::map<std::string, std::vector<std::string>> LoadNegativeIntents(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) DataError("cannot open negative-intent file '" + path + "'");
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      DataError(path + ": line " + std::to_string(line_number) + ": expected intent<TAB>list");
    }
    std::stringstream ss(line.substr(tab + 1));
    std::string item;
    auto& list = out[line.substr(0, tab)];
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) list.push_back(item);
    }
  }
  return out;
}

template float FinetuneExampleLoss(const Model<float>&, const FinetuneExample&,
                                   Rng*, Params<float>*);
template double FinetuneExampleLoss(const Model<double>&, const FinetuneExample&,
                                    Rng*, Params<double>*);

}  // namespace iraug
