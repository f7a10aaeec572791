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

// Small corpora and models shared by the unit and acceptance tests.

#ifndef IRAUG_TESTS_FIXTURES_H_
#define IRAUG_TESTS_FIXTURES_H_

#include <functional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "iraug/corpus.h"
#include "iraug/encoder.h"
#include "iraug/error.h"
#include "iraug/mlm.h"
#include "iraug/vocab.h"

namespace iraug::fixtures {

inline Dataset FromTexts(const std::vector<std::string>& texts,
                         const std::string& prefix = "t") {
  std::vector<Utterance> utts;
  for (size_t i = 0; i < texts.size(); ++i) {
    utts.push_back({prefix + std::to_string(i), Normalize(texts[i]), {}, {}});
  }
  return Dataset(utts);
}

// Runs fn and returns the kind of the iraug::Error it throws.
inline ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kUsage;
}

inline ModelConfig TinyConfig(int vocab_size, uint64_t seed) {
  ModelConfig c;
  c.n_layers = 1;
  c.n_heads = 2;
  c.d_model = 32;
  c.d_ff = 64;
  c.max_len = 8;
  c.vocab_size = vocab_size;
  c.dropout = 0.0;
  c.seed = seed;
  return c;
}

struct ToyRephraser {
  Vocabulary vocab;
  Model<float> model;
};

// Templates "<p> <q> x" whose first two words merge into one token, so
// masking that token leaves the same context for every template.
inline ToyRephraser TrainToyRephraser(const std::vector<std::string>& templates,
                                      uint64_t seed, int epochs = 300) {
  std::vector<std::string> vocab_texts = templates;
  for (const std::string& t : templates) vocab_texts.push_back(t.substr(0, t.rfind(' ')));
  ToyRephraser toy;
  toy.vocab = LearnBpe(FromTexts(vocab_texts), 100, 1);
  toy.model = Model<float>(TinyConfig(static_cast<int>(toy.vocab.size()), seed));
  MlmTrainOptions opts;
  opts.epochs = epochs;
  opts.lr = 1e-2;
  opts.batch = 8;
  opts.seed = seed;
  MlmTrain(toy.model, FromTexts(templates), toy.vocab, opts);
  return toy;
}

}  // namespace iraug::fixtures

#endif  // IRAUG_TESTS_FIXTURES_H_
