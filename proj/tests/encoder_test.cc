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

#include "iraug/encoder.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "iraug/error.h"
#include "iraug/finetune.h"
#include "iraug/mlm.h"
#include "oracles.h"

namespace iraug {
namespace {

ModelConfig MicroConfig() {
  ModelConfig c;
  c.n_layers = 1;
  c.n_heads = 1;
  c.d_model = 8;
  c.d_ff = 16;
  c.max_len = 6;
  c.vocab_size = 20;
  c.dropout = 0.0;
  c.seed = 3;
  c.init_scale = 0.5;
  return c;
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kUsage;
}

TEST(ModelConfigTest, Validation) {
  ModelConfig c = MicroConfig();
  EXPECT_NO_THROW(c.Validate());
  c.n_heads = 3;
  EXPECT_EQ(KindOf([&] { c.Validate(); }), ErrorKind::kUsage);
  c = MicroConfig();
  c.vocab_size = 0;
  EXPECT_EQ(KindOf([&] { c.Validate(); }), ErrorKind::kUsage);
  c = MicroConfig();
  c.dropout = 1.0;
  EXPECT_EQ(KindOf([&] { c.Validate(); }), ErrorKind::kUsage);
}

TEST(ModelConfigTest, JsonRoundTrip) {
  const ModelConfig c = MicroConfig();
  EXPECT_EQ(ModelConfig::FromJson(nlohmann::json::parse(c.ToJson().dump())), c);
}

TEST(ParamsTest, CountMatchesClosedForm) {
  ModelConfig c = MicroConfig();
  c.n_layers = 3;
  c.n_heads = 2;
  const Model<float> m(c);
  const size_t d = 8, f = 16, v = 20, len = 6;
  const size_t per_layer = 4 * (d * d + d) + 2 * d + (d * f + f) + (f * d + d) + 2 * d;
  EXPECT_EQ(m.params.ParameterCount(), v * d + len * d + 3 * per_layer + d * v + v);
}

TEST(ParamsTest, Initialization) {
  ModelConfig c = MicroConfig();
  c.d_model = 32;
  c.d_ff = 64;
  c.init_scale = 0.02;
  const Model<float> m(c);
  for (const auto& [name, t] : m.params.Tensors()) {
    const std::string leaf = name.substr(name.rfind('.') + 1);
    if (leaf.ends_with("_g")) {
      for (float x : t->data) EXPECT_EQ(x, 1.0f) << name;
    } else if (leaf.ends_with("_b") || leaf[0] == 'b') {
      for (float x : t->data) EXPECT_EQ(x, 0.0f) << name;
    }
  }
  double sq = 0.0;
  for (float x : m.params.tok_emb.data) sq += static_cast<double>(x) * x;
  const double sd = std::sqrt(sq / static_cast<double>(m.params.tok_emb.size()));
  EXPECT_NEAR(sd, 0.02, 0.003);
}

TEST(ParamsTest, TensorNamesAndOrder) {
  ModelConfig c = MicroConfig();
  c.n_layers = 2;
  Model<float> m(c);
  const auto tensors = m.params.Tensors();
  EXPECT_EQ(tensors.front().name, "tok_emb");
  EXPECT_EQ(tensors[1].name, "pos_emb");
  EXPECT_EQ(tensors[2].name, "layers.0.wq");
  EXPECT_EQ(tensors[18].name, "layers.1.wq");
  EXPECT_EQ(tensors[tensors.size() - 2].name, "head.w");
  EXPECT_EQ(tensors.back().name, "head.b");
}

TEST(ParamsTest, CastRoundTrip) {
  const Model<float> m(MicroConfig());
  const Params<double> d = CastParams<double>(m.params);
  const Params<float> back = CastParams<float>(d);
  EXPECT_EQ(back.tok_emb, m.params.tok_emb);
  EXPECT_EQ(back.layers[0].w2, m.params.layers[0].w2);
}

TEST(ForwardTest, ShapesAndErrors) {
  const Model<float> m(MicroConfig());
  const Matrix<float> logits = m.Forward({3, 4, 5}, false);
  EXPECT_EQ(logits.rows, 3);
  EXPECT_EQ(logits.cols, 20);
  EXPECT_EQ(KindOf([&] { m.Forward({}, false); }), ErrorKind::kUsage);
  EXPECT_EQ(KindOf([&] { m.Forward({1, 2, 3, 4, 5, 6, 7}, false); }), ErrorKind::kUsage);
  EXPECT_EQ(KindOf([&] { m.Forward({3, 20}, false); }), ErrorKind::kMismatch);
}

TEST(ForwardTest, HiddenRowsAreLayerNormalized) {
  const Model<double> m(MicroConfig());
  const Matrix<double> h = EncodeHidden<double>(m.config, m.params, {3, 7, 1, 9}, nullptr, nullptr);
  for (int i = 0; i < h.rows; ++i) {
    double mean = 0.0, var = 0.0;
    for (int c = 0; c < h.cols; ++c) mean += h(i, c);
    mean /= h.cols;
    for (int c = 0; c < h.cols; ++c) var += (h(i, c) - mean) * (h(i, c) - mean);
    var /= h.cols;
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(var, 1.0, 1e-3);
  }
}

TEST(ForwardTest, DropoutOnlyInTrainMode) {
  ModelConfig c = MicroConfig();
  c.dropout = 0.3;
  const Model<float> m(c);
  const std::vector<TokenId> ids = {3, 4, 5, 6};
  Rng r1(1), r2(2), r3(1);
  EXPECT_EQ(m.Forward(ids, false), m.Forward(ids, false, &r1));
  const Matrix<float> a = m.Forward(ids, true, &r2);
  const Matrix<float> b = m.Forward(ids, true, &r3);
  EXPECT_NE(a, m.Forward(ids, false));
  EXPECT_NE(a, b);
  Rng r4(1);
  EXPECT_EQ(b, m.Forward(ids, true, &r4));
}

TEST(SoftmaxTest, SumsToOneAndIsShiftInvariant) {
  const std::vector<double> p = Softmax<double>({1000.0, 1001.0, 999.0});
  EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
  const std::vector<double> q = Softmax<double>({0.0, 1.0, -1.0});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
}

double MlmLoss(const Model<double>& m, const std::vector<TokenId>& ids, int pos,
               TokenId target, uint64_t dropout_seed, Params<double>* grads) {
  std::vector<TokenId> masked = ids;
  masked[pos] = Vocabulary::kMask;
  Rng rng(dropout_seed);
  return MlmExampleLoss<double>(m, masked, pos, target,
                                m.config.dropout > 0 ? &rng : nullptr, grads);
}

void CheckMlmGradient(const ModelConfig& config, double tolerance) {
  Model<double> m(config);
  const std::vector<TokenId> ids = {5, 9, 12, 4};
  Params<double> grads = Params<double>::Zeros(config, config.vocab_size);
  MlmLoss(m, ids, 2, 12, 77, &grads);
  std::string worst;
  const double err = oracle::MaxGradientError(
      m.params, grads, [&] { return MlmLoss(m, ids, 2, 12, 77, nullptr); }, 1e-4, 1e-6,
      &worst);
  EXPECT_LT(err, tolerance) << worst;
}

TEST(GradientTest, MlmMicroConfig) { CheckMlmGradient(MicroConfig(), 1e-4); }

TEST(GradientTest, MlmTwoLayersTwoHeadsWithDropout) {
  ModelConfig c = MicroConfig();
  c.n_layers = 2;
  c.n_heads = 2;
  c.dropout = 0.2;
  CheckMlmGradient(c, 1e-4);
}

TEST(GradientTest, FinetuneLoss) {
  ModelConfig c = MicroConfig();
  c.n_heads = 2;
  Model<double> m(c);
  FinetuneExample ex;
  ex.query = {{3, 7, Vocabulary::kMask, 11}, 2};
  ex.target_id = 9;
  ex.negatives = {{{4, Vocabulary::kMask, 13}, 1}, {{5, 15, 16, Vocabulary::kMask}, 3}};
  Params<double> grads = Params<double>::Zeros(c, c.vocab_size);
  FinetuneExampleLoss<double>(m, ex, nullptr, &grads);
  std::string worst;
  const double err = oracle::MaxGradientError(
      m.params, grads, [&] { return FinetuneExampleLoss<double>(m, ex, nullptr, nullptr); },
      1e-4, 1e-6, &worst);
  EXPECT_LT(err, 1e-4) << worst;
}

TEST(GradientTest, GradientsAccumulate) {
  const ModelConfig c = MicroConfig();
  const Model<double> m(c);
  Params<double> once = Params<double>::Zeros(c, c.vocab_size);
  Params<double> twice = Params<double>::Zeros(c, c.vocab_size);
  MlmLoss(m, {5, 9, 12}, 1, 9, 0, &once);
  MlmLoss(m, {5, 9, 12}, 1, 9, 0, &twice);
  MlmLoss(m, {5, 9, 12}, 1, 9, 0, &twice);
  for (size_t i = 0; i < once.tok_emb.data.size(); ++i) {
    EXPECT_NEAR(twice.tok_emb.data[i], 2 * once.tok_emb.data[i], 1e-12);
  }
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  ModelConfig c = MicroConfig();
  Model<double> m(c);
  Params<double> grads = Params<double>::Zeros(c, c.vocab_size);
  grads.head_b.data[0] = 0.5;
  grads.head_b.data[1] = -2.0;
  const double b0 = m.params.head_b.data[0], b1 = m.params.head_b.data[1];
  const double w = m.params.head_w.data[0];
  AdamOptimizer<double> adam(m.params);
  adam.Step(m.params, grads, 0.01);
  EXPECT_NEAR(m.params.head_b.data[0], b0 - 0.01, 1e-9);
  EXPECT_NEAR(m.params.head_b.data[1], b1 + 0.01, 1e-9);
  EXPECT_EQ(m.params.head_w.data[0], w);
}

TEST(ScheduleTest, LinearWarmupThenFlat) {
  EXPECT_DOUBLE_EQ(WarmupLearningRate(1.0, 0, 100), 0.1);
  EXPECT_DOUBLE_EQ(WarmupLearningRate(1.0, 4, 100), 0.5);
  EXPECT_DOUBLE_EQ(WarmupLearningRate(1.0, 9, 100), 1.0);
  EXPECT_DOUBLE_EQ(WarmupLearningRate(1.0, 50, 100), 1.0);
  EXPECT_DOUBLE_EQ(WarmupLearningRate(2.0, 0, 5), 2.0);
}

}  // namespace
}  // namespace iraug
