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

#include "iraug/classifier.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "iraug/checkpoint.h"
#include "iraug/error.h"
#include "iraug/random.h"

namespace iraug {
namespace {

const std::optional<std::string>& LabelOf(const Utterance& u, LabelKind kind) {
  return kind == LabelKind::kIntent ? u.intent : u.domain;
}

std::vector<TokenId> ClassifierIds(const Vocabulary& vocab,
                                   const ModelConfig& config,
                                   const WordList& words) {
  std::vector<TokenId> ids = vocab.Encode(words);
  if (ids.size() > static_cast<size_t>(config.max_len)) ids.resize(config.max_len);
  return ids;
}

// Cross-entropy of one example; accumulates gradients when grads is set.
template <typename T>
T ExampleLoss(const ModelConfig& config, const Params<T>& params,
              const std::vector<TokenId>& ids, int label, Rng* dropout_rng,
              Params<T>* grads, std::vector<double>* probs_out = nullptr) {
  ForwardCache<T> cache;
  const Matrix<T> hidden =
      EncodeHidden<T>(config, params, ids, dropout_rng, grads ? &cache : nullptr);
  const int n = hidden.rows, d = hidden.cols;
  Matrix<T> pooled(1, d);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) pooled(0, c) += hidden(i, c);
  }
  for (T& x : pooled.data) x /= static_cast<T>(n);
  const std::vector<T> probs = Softmax(HeadLogits(params, pooled, 0));
  if (probs_out) probs_out->assign(probs.begin(), probs.end());
  if (label < 0) return T(0);
  const T loss = -std::log(std::max(probs[label], std::numeric_limits<T>::min()));
  if (grads) {
    std::vector<T> d_logits = probs;
    d_logits[label] -= T(1);
    Matrix<T> d_pooled(1, d);
    HeadBackward(params, pooled, 0, d_logits, *grads, d_pooled);
    Matrix<T> d_hidden(n, d);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < d; ++c) d_hidden(i, c) = d_pooled(0, c) / static_cast<T>(n);
    }
    BackwardHidden(config, params, cache, d_hidden, *grads);
  }
  return loss;
}

std::vector<int> LabelIndices(const Dataset& data, LabelKind kind,
                              const std::vector<std::string>& labels,
                              bool allow_unseen) {
  std::map<std::string, int> index;
  for (size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<int>(i);
  std::vector<int> out;
  for (const Utterance& u : data.utterances()) {
    const auto& label = LabelOf(u, kind);
    if (!label) {
      DataError("utterance '" + u.id + "' has no " + LabelKindName(kind) + " label");
    }
    const auto it = index.find(*label);
    if (it == index.end() && !allow_unseen) {
      DataError("unknown label '" + *label + "'");
    }
    out.push_back(it == index.end() ? -1 : it->second);
  }
  return out;
}

double Accuracy(const Classifier& c, const Dataset& data,
                const std::vector<int>& gold) {
  size_t correct = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    correct += c.PredictLabel(data.utterances()[i].words) == gold[i];
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0.0
                   : std::accumulate(v.begin(), v.end(), 0.0) /
                         static_cast<double>(v.size());
}

nlohmann::ordered_json RowJson(const CompareRow& row) {
  nlohmann::ordered_json j;
  j["augmenter"] = row.augmenter;
  j["train_size"] = row.train_size;
  j["mean_acc"] = row.mean_acc;
  j["per_seed"] = row.per_seed;
  j["rer"] = row.rer;
  return j;
}

}  // namespace

LabelKind ParseLabelKind(const std::string& name) {
  if (name == "intent") return LabelKind::kIntent;
  if (name == "domain") return LabelKind::kDomain;
  UsageError("label kind must be 'intent' or 'domain', got '" + name + "'");
}

std::string LabelKindName(LabelKind kind) {
  return kind == LabelKind::kIntent ? "intent" : "domain";
}

ModelConfig ClassifierConfig::DefaultClassifierEncoder() {
  ModelConfig c;
  c.n_layers = 2;
  c.n_heads = 4;
  c.d_model = 64;
  c.d_ff = 256;
  c.max_len = 32;
  c.dropout = 0.1;
  return c;
}

nlohmann::ordered_json ClassifierConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["encoder"] = encoder.ToJson();
  j["epochs"] = epochs;
  j["lr"] = lr;
  j["batch"] = batch;
  j["seed"] = seed;
  return j;
}

std::vector<double> Classifier::Predict(const WordList& words) const {
  std::vector<double> probs;
  ExampleLoss<float>(config, params, ClassifierIds(vocab, config, words), -1,
                     nullptr, nullptr, &probs);
  return probs;
}

int Classifier::PredictLabel(const WordList& words) const {
  const auto probs = Predict(words);
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) -
                          probs.begin());
}

Classifier TrainClassifier(const Dataset& train, const Dataset& heldout,
                           LabelKind kind, const ClassifierConfig& config,
                           TrainReport* report) {
  if (train.size() == 0) UsageError("classifier: empty training set");
  if (config.epochs < 1 || config.batch < 1 || !(config.lr > 0.0)) {
    UsageError("classifier: epochs, batch and lr must be positive");
  }
  Classifier c;
  c.kind = kind;
  c.labels = kind == LabelKind::kIntent ? train.intent_labels() : train.domain_labels();
  const std::vector<int> gold = LabelIndices(train, kind, c.labels, false);
  if (c.labels.size() < 2) DataError("classifier: need at least two classes");
  const std::vector<int> heldout_gold =
      heldout.size() ? LabelIndices(heldout, kind, c.labels, true) : std::vector<int>{};

  c.vocab = LearnBpe(train, 0, 0);
  c.config = config.encoder;
  c.config.vocab_size = static_cast<int>(c.vocab.size());
  c.config.seed = config.seed;
  c.config.Validate();
  c.params = Params<float>::Zeros(c.config, static_cast<int>(c.labels.size()));
  InitParams(c.config, c.params);

  std::vector<std::vector<TokenId>> seqs;
  for (const Utterance& u : train.utterances()) {
    seqs.push_back(ClassifierIds(c.vocab, c.config, u.words));
  }

  const size_t n = seqs.size();
  const size_t batch = static_cast<size_t>(config.batch);
  const int64_t steps_per_epoch = static_cast<int64_t>((n + batch - 1) / batch);
  const int64_t total_steps = steps_per_epoch * config.epochs;
  AdamOptimizer<float> adam(c.params);
  GradientAccumulator<float> acc(c.params);
  TrainReport local;
  TrainReport& r = report ? *report : local;
  r = TrainReport{};
  r.config = config;
  Params<float> best = c.params;
  double best_acc = -1.0;
  int64_t step = 0;
  std::vector<size_t> order(n);
  for (int e = 0; e < config.epochs; ++e) {
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(DeriveSeed(config.seed, "cls-epoch-" + std::to_string(e)));
    Shuffle(order, rng);
    double epoch_loss = 0.0;
    for (size_t start = 0; start < n; start += batch) {
      const size_t end = std::min(n, start + batch);
      const uint64_t batch_seed = DeriveSeed(config.seed, "cls-dropout-" +
                                                              std::to_string(step));
      epoch_loss += acc.Run(
          end - start,
          [&](size_t i, Params<float>& g) {
            const size_t ex = order[start + i];
            Rng drop(batch_seed + ex);
            return static_cast<double>(
                ExampleLoss<float>(c.config, c.params, seqs[ex], gold[ex],
                                   c.config.dropout > 0 ? &drop : nullptr, &g));
          },
          config.parallel);
      const float scale = 1.0f / static_cast<float>(end - start);
      for (auto& [name, t] : acc.grads().Tensors()) {
        for (float& x : t->data) x *= scale;
      }
      adam.Step(c.params, acc.grads(),
                WarmupLearningRate(config.lr, step, total_steps));
      ++step;
    }
    if (!std::isfinite(epoch_loss)) NumericError("classifier: non-finite loss");
    r.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
    if (heldout.size()) {
      const double a = Accuracy(c, heldout, heldout_gold);
      r.epoch_heldout_accuracy.push_back(a);
      if (a > best_acc) {
        best_acc = a;
        best = c.params;
        r.best_epoch = e + 1;
      }
    }
  }
  if (heldout.size()) {
    c.params = std::move(best);
    r.heldout_accuracy = best_acc;
  } else {
    r.best_epoch = config.epochs;
  }
  return c;
}

EvalResult Evaluate(const Classifier& classifier, const Dataset& test) {
  if (test.size() == 0) UsageError("evaluate: empty test set");
  const size_t k = classifier.labels.size();
  const std::vector<int> gold = LabelIndices(test, classifier.kind, classifier.labels, true);
  EvalResult r;
  r.total = test.size();
  r.confusion.assign(k + 1, std::vector<size_t>(k, 0));
  size_t correct = 0;
  for (size_t i = 0; i < test.size(); ++i) {
    const int pred = classifier.PredictLabel(test.utterances()[i].words);
    const size_t row = gold[i] < 0 ? k : static_cast<size_t>(gold[i]);
    ++r.confusion[row][pred];
    correct += gold[i] == pred;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.total);
  for (size_t c = 0; c < k; ++c) {
    const size_t row_total =
        std::accumulate(r.confusion[c].begin(), r.confusion[c].end(), size_t{0});
    r.per_class_accuracy.push_back(
        row_total ? static_cast<double>(r.confusion[c][c]) / static_cast<double>(row_total)
                  : std::numeric_limits<double>::quiet_NaN());
  }
  return r;
}

nlohmann::ordered_json EvalResult::ToJson(
    const std::vector<std::string>& labels) const {
  nlohmann::ordered_json j;
  j["accuracy"] = accuracy;
  j["total"] = total;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (size_t c = 0; c < labels.size() && c < per_class_accuracy.size(); ++c) {
    per_class[labels[c]] = std::isnan(per_class_accuracy[c])
                               ? nlohmann::ordered_json(nullptr)
                               : nlohmann::ordered_json(per_class_accuracy[c]);
  }
  j["per_class_accuracy"] = per_class;
  std::vector<std::string> rows = labels;
  rows.push_back("<unseen>");
  j["confusion_rows"] = rows;
  j["confusion"] = confusion;
  return j;
}

nlohmann::ordered_json TrainReport::ToJson() const {
  nlohmann::ordered_json j;
  j["heldout_accuracy"] = heldout_accuracy;
  j["best_epoch"] = best_epoch;
  j["epoch_loss"] = epoch_loss;
  j["epoch_heldout_accuracy"] = epoch_heldout_accuracy;
  j["config"] = config.ToJson();
  j["seed"] = config.seed;
  return j;
}

double RelativeErrorReduction(double acc_base, double acc_aug) {
  if (!(acc_base < 1.0)) {
    NumericError("relative error reduction undefined for baseline accuracy 1");
  }
  return (acc_aug - acc_base) / (1.0 - acc_base);
}

RerAggregate AggregateRer(const std::vector<TaskAccuracy>& tasks) {
  if (tasks.empty()) UsageError("aggregate: no tasks");
  RerAggregate r;
  double base = 0.0, aug = 0.0, total = 0.0;
  for (const TaskAccuracy& t : tasks) {
    r.macro += RelativeErrorReduction(t.base, t.aug);
    base += t.base * static_cast<double>(t.test_size);
    aug += t.aug * static_cast<double>(t.test_size);
    total += static_cast<double>(t.test_size);
  }
  r.macro /= static_cast<double>(tasks.size());
  if (!(total > 0.0)) UsageError("aggregate: tasks need test sizes");
  r.micro = RelativeErrorReduction(base / total, aug / total);
  return r;
}

Comparison Compare(const Dataset& base_train,
                   const std::vector<AugmenterRows>& augmenters,
                   const Dataset& heldout, const Dataset& test, LabelKind kind,
                   const ClassifierConfig& config,
                   const std::vector<uint64_t>& seeds) {
  if (seeds.empty()) UsageError("compare: no seeds");
  std::set<std::string> evaluation_ids;
  for (const Utterance& u : heldout.utterances()) evaluation_ids.insert(u.id);
  for (const Utterance& u : test.utterances()) evaluation_ids.insert(u.id);
  auto check_disjoint = [&](const std::vector<Utterance>& rows) {
    for (const Utterance& u : rows) {
      if (evaluation_ids.count(u.id)) {
        DataError("training row '" + u.id + "' also appears in heldout or test");
      }
    }
  };
  check_disjoint(base_train.utterances());

  auto run = [&](const std::string& name, const Dataset& train) {
    CompareRow row;
    row.augmenter = name;
    row.train_size = train.size();
    row.per_seed.resize(seeds.size());
    for (size_t s = 0; s < seeds.size(); ++s) {
      ClassifierConfig cfg = config;
      cfg.seed = seeds[s];
      const Classifier c = TrainClassifier(train, heldout, kind, cfg);
      row.per_seed[s] = Evaluate(c, test).accuracy;
    }
    row.mean_acc = Mean(row.per_seed);
    return row;
  };

  Comparison out;
  out.kind = kind;
  out.baseline = run("none", base_train);
  for (const AugmenterRows& aug : augmenters) {
    check_disjoint(aug.rows);
    std::vector<Utterance> rows = base_train.utterances();
    rows.insert(rows.end(), aug.rows.begin(), aug.rows.end());
    CompareRow row = run(aug.name, Dataset(std::move(rows)));
    row.rer = out.baseline.mean_acc < 1.0
                  ? RelativeErrorReduction(out.baseline.mean_acc, row.mean_acc)
                  : 0.0;
    out.rows.push_back(std::move(row));
  }
  return out;
}

nlohmann::ordered_json Comparison::ToJson() const {
  nlohmann::ordered_json j;
  j["label_kind"] = LabelKindName(kind);
  j["baseline"] = RowJson(baseline);
  j["rows"] = nlohmann::ordered_json::array();
  for (const CompareRow& r : rows) j["rows"].push_back(RowJson(r));
  return j;
}

std::string Comparison::ToText() const {
  std::ostringstream out;
  out << std::left << std::setw(16) << "augmenter" << std::right << std::setw(8)
      << "train" << std::setw(10) << "mean_acc" << std::setw(10) << "rer" << "\n";
  out << std::fixed << std::setprecision(4);
  auto line = [&](const CompareRow& r, bool base) {
    out << std::left << std::setw(16) << r.augmenter << std::right << std::setw(8)
        << r.train_size << std::setw(10) << r.mean_acc << std::setw(10);
    if (base) {
      out << "-";
    } else {
      out << r.rer;
    }
    out << "\n";
  };
  line(baseline, true);
  for (const CompareRow& r : rows) line(r, false);
  return out.str();
}

void SaveClassifier(const Classifier& classifier, const std::string& path) {
  nlohmann::ordered_json meta;
  meta["head"] = "classifier";
  meta["label_kind"] = LabelKindName(classifier.kind);
  meta["labels"] = classifier.labels;
  meta["vocab"] = classifier.vocab.Serialize();
  WriteCheckpoint(path, classifier.config, classifier.params,
                  classifier.vocab.Fingerprint(), meta);
}

Classifier LoadClassifier(const std::string& path) {
  CheckpointData data = ReadCheckpoint(path);
  if (data.meta.value("head", "") != "classifier") {
    DataError("checkpoint '" + path + "' is not a classifier");
  }
  Classifier c;
  try {
    c.kind = ParseLabelKind(data.meta.at("label_kind").get<std::string>());
    c.labels = data.meta.at("labels").get<std::vector<std::string>>();
    c.vocab = Vocabulary::Parse(data.meta.at("vocab").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    DataError("checkpoint '" + path + "': bad classifier metadata (" + e.what() + ")");
  }
  if (c.vocab.Fingerprint() != data.vocab_fingerprint ||
      static_cast<int>(c.vocab.size()) != data.config.vocab_size) {
    MismatchError("checkpoint '" + path + "': embedded vocabulary does not match");
  }
  if (data.params.head_w.cols != static_cast<int>(c.labels.size())) {
    DataError("checkpoint '" + path + "': head size differs from label count");
  }
  c.config = data.config;
  c.params = std::move(data.params);
  return c;
}

}  // namespace iraug
