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

#ifndef IRAUG_CLASSIFIER_H_
#define IRAUG_CLASSIFIER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "iraug/corpus.h"
#include "iraug/encoder.h"
#include "iraug/vocab.h"
#include "json.hpp"

namespace iraug {

enum class LabelKind { kDomain, kIntent };

LabelKind ParseLabelKind(const std::string& name);
std::string LabelKindName(LabelKind kind);

struct ClassifierConfig {
  // vocab_size is filled in from the training data.
  ModelConfig encoder = DefaultClassifierEncoder();
  int epochs = 15;
  double lr = 3e-4;
  int batch = 32;
  uint64_t seed = 0;
  bool parallel = true;

  static ModelConfig DefaultClassifierEncoder();
  nlohmann::ordered_json ToJson() const;
};

// Mean-pooled encoder states followed by a linear softmax layer.
struct Classifier {
  LabelKind kind = LabelKind::kIntent;
  std::vector<std::string> labels;
  Vocabulary vocab;  // unigram vocabulary of the training set
  ModelConfig config;
  Params<float> params;

  // Class probabilities.
  std::vector<double> Predict(const WordList& words) const;
  int PredictLabel(const WordList& words) const;
};

struct EvalResult {
  double accuracy = 0.0;
  size_t total = 0;
  std::vector<double> per_class_accuracy;  // NaN for classes absent from test
  // Rows: true label (classifier labels, then one row for unseen labels).
  // Columns: predicted label.
  std::vector<std::vector<size_t>> confusion;

  nlohmann::ordered_json ToJson(const std::vector<std::string>& labels) const;
};

struct TrainReport {
  double heldout_accuracy = 0.0;
  int best_epoch = 0;  // 1-based
  std::vector<double> epoch_loss;
  std::vector<double> epoch_heldout_accuracy;
  ClassifierConfig config;

  nlohmann::ordered_json ToJson() const;
};

// Keeps the parameters of the epoch with the best heldout accuracy (the
// earliest on ties). An empty heldout set keeps the last epoch.
Classifier TrainClassifier(const Dataset& train, const Dataset& heldout,
                           LabelKind kind, const ClassifierConfig& config,
                           TrainReport* report = nullptr);

EvalResult Evaluate(const Classifier& classifier, const Dataset& test);

// (acc_aug - acc_base) / (1 - acc_base).
double RelativeErrorReduction(double acc_base, double acc_aug);

struct TaskAccuracy {
  double base = 0.0;
  double aug = 0.0;
  size_t test_size = 0;
};

struct RerAggregate {
  double macro = 0.0;  // mean of per-task reductions
  double micro = 0.0;  // reduction of test-size-weighted accuracies
};

RerAggregate AggregateRer(const std::vector<TaskAccuracy>& tasks);

// Extra training rows produced by one augmenter.
struct AugmenterRows {
  std::string name;
  std::vector<Utterance> rows;
};

struct CompareRow {
  std::string augmenter;
  size_t train_size = 0;
  std::vector<double> per_seed;
  double mean_acc = 0.0;
  double rer = 0.0;  // of mean accuracies against the baseline
};

struct Comparison {
  LabelKind kind = LabelKind::kIntent;
  CompareRow baseline;
  std::vector<CompareRow> rows;

  nlohmann::ordered_json ToJson() const;
  std::string ToText() const;
};

// Trains one classifier per seed on base_train and on base_train plus each
// augmenter's rows. Throws a data error if any training id also occurs in
// heldout or test.
Comparison Compare(const Dataset& base_train,
                   const std::vector<AugmenterRows>& augmenters,
                   const Dataset& heldout, const Dataset& test, LabelKind kind,
                   const ClassifierConfig& config,
                   const std::vector<uint64_t>& seeds);

void SaveClassifier(const Classifier& classifier, const std::string& path);
Classifier LoadClassifier(const std::string& path);

}  // namespace iraug

#endif  // IRAUG_CLASSIFIER_H_
