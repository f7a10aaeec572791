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

#ifndef IRAUG_ENCODER_H_
#define IRAUG_ENCODER_H_

// A small post-norm transformer encoder (BERT layout) with hand-written
// reverse-mode gradients. Templated on the scalar type: float for training
// and inference, double for gradient checking.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iraug/random.h"
#include "iraug/tensor.h"
#include "iraug/vocab.h"
#include "json.hpp"

namespace iraug {

struct ModelConfig {
  int n_layers = 4;
  int n_heads = 4;
  int d_model = 128;
  int d_ff = 512;
  int max_len = 24;
  int vocab_size = 0;
  double dropout = 0.1;
  uint64_t seed = 0;
  // Standard deviation of the initial weights.
  double init_scale = 0.02;

  // Throws a usage error when the invariants do not hold.
  void Validate() const;

  nlohmann::ordered_json ToJson() const;
  static ModelConfig FromJson(const nlohmann::json& j);

  bool operator==(const ModelConfig&) const = default;
};

template <typename T>
struct LayerParams {
  Matrix<T> wq, bq, wk, bk, wv, bv, wo, bo;
  Matrix<T> ln1_g, ln1_b;
  Matrix<T> w1, b1, w2, b2;
  Matrix<T> ln2_g, ln2_b;
};

template <typename T>
struct NamedTensor {
  std::string name;
  Matrix<T>* tensor;
};

// Encoder parameters plus one output head. For masked-LM models the head
// maps d_model to vocab_size; for classifiers it maps d_model to the number
// of classes.
template <typename T>
struct Params {
  Matrix<T> tok_emb;  // vocab_size x d_model
  Matrix<T> pos_emb;  // max_len x d_model
  std::vector<LayerParams<T>> layers;
  Matrix<T> head_w;  // d_model x head_size
  Matrix<T> head_b;  // 1 x head_size

  // All-zero parameters with the shapes implied by the config.
  static Params Zeros(const ModelConfig& config, int head_size);

  // Fixed-order enumeration; gradient and optimizer buffers rely on it.
  std::vector<NamedTensor<T>> Tensors();
  std::vector<std::pair<std::string, const Matrix<T>*>> Tensors() const;

  void SetZero();
  size_t ParameterCount() const;
};

// Fills `params` with N(0, init_scale) weights, zero biases and identity
// layer norms.
template <typename T>
void InitParams(const ModelConfig& config, Params<T>& params);

template <typename T>
struct LayerCache {
  Matrix<T> x_in, q, k, v, ctx;
  std::vector<Matrix<T>> probs;  // one n x n attention matrix per head
  Matrix<T> attn_mask, ln1_xhat, ln1_rstd, y;
  Matrix<T> h_pre, h_act, ffn_mask, ln2_xhat, ln2_rstd;
};

// Everything the backward pass needs from a forward pass.
template <typename T>
struct ForwardCache {
  std::vector<TokenId> ids;
  Matrix<T> emb_mask;
  std::vector<LayerCache<T>> layers;
};

// Runs the encoder body. `dropout_rng` non-null means train mode. Returns
// the final hidden states (n x d_model). Throws a usage error when the
// sequence is too long and a mismatch error on out-of-range ids.
template <typename T>
Matrix<T> EncodeHidden(const ModelConfig& config, const Params<T>& params,
                       const std::vector<TokenId>& ids, Rng* dropout_rng,
                       ForwardCache<T>* cache);

// Backpropagates d_hidden through the body, adding into `grads`.
template <typename T>
void BackwardHidden(const ModelConfig& config, const Params<T>& params,
                    const ForwardCache<T>& cache, const Matrix<T>& d_hidden,
                    Params<T>& grads);

// Head projection of one hidden row.
template <typename T>
std::vector<T> HeadLogits(const Params<T>& params, const Matrix<T>& hidden,
                          int row);
// Given d(loss)/d(logits) for one row, accumulates head gradients and adds
// the hidden-state gradient into d_hidden.
template <typename T>
void HeadBackward(const Params<T>& params, const Matrix<T>& hidden, int row,
                  const std::vector<T>& d_logits, Params<T>& grads,
                  Matrix<T>& d_hidden);

// Numerically stable softmax.
template <typename T>
std::vector<T> Softmax(const std::vector<T>& logits);

// Masked-LM model: config, parameters and provenance.
template <typename T>
struct Model {
  ModelConfig config;
  Params<T> params;
  std::string vocab_fingerprint;
  bool finetuned = false;
  std::map<std::string, TokenId> intent_tokens;

  Model() = default;
  // Validates the config and initializes parameters from config.seed.
  explicit Model(const ModelConfig& cfg);

  // Logits for every position (n x vocab_size).
  Matrix<T> Forward(const std::vector<TokenId>& ids, bool train_mode,
                    Rng* dropout_rng = nullptr) const;
};

// Converts parameters between precisions.
template <typename To, typename From>
Params<To> CastParams(const Params<From>& from);

// Adaptive-moment optimizer (decay 0.9 / 0.999, epsilon 1e-8).
template <typename T>
class AdamOptimizer {
 public:
  explicit AdamOptimizer(const Params<T>& shape_like, double beta1 = 0.9,
                         double beta2 = 0.999, double eps = 1e-8);

  // One update with the given gradients (already averaged over the batch).
  void Step(Params<T>& params, Params<T>& grads, double lr);

 private:
  double beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

// Learning rate with linear warmup over the first 10% of steps, then flat.
double WarmupLearningRate(double base_lr, int64_t step, int64_t total_steps);

// Sums per-example gradients over a batch. Examples are split into a fixed
// number of contiguous shards, each shard accumulates into its own buffer
// (in parallel), and shard buffers are added in shard order. The result is
// therefore independent of the thread count, and the serial path is
// bit-identical to the parallel one.
template <typename T>
class GradientAccumulator {
 public:
  static constexpr int kShards = 8;
  using ExampleFn = std::function<double(size_t example, Params<T>& grads)>;

  explicit GradientAccumulator(const Params<T>& shape_like);

  // Returns the summed loss; gradient sum lands in `grads()`.
  double Run(size_t n_examples, const ExampleFn& fn, bool parallel = true);
  Params<T>& grads() { return shards_[0]; }

 private:
  std::vector<Params<T>> shards_;
};

}  // namespace iraug

#endif  // IRAUG_ENCODER_H_
