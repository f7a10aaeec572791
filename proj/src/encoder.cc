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

#include <cmath>
#include <limits>
#include <numbers>

#include "iraug/error.h"
#include "iraug/kernels.h"

namespace iraug {
namespace {

constexpr double kLayerNormEps = 1e-5;

template <typename T>
T Gelu(T x) {
  return T(0.5) * x * (T(1) + std::erf(x / std::numbers::sqrt2_v<T>));
}

template <typename T>
T GeluGrad(T x) {
  const T cdf = T(0.5) * (T(1) + std::erf(x / std::numbers::sqrt2_v<T>));
  const T pdf = std::exp(T(-0.5) * x * x) * std::numbers::inv_sqrtpi_v<T> /
                std::numbers::sqrt2_v<T>;
  return cdf + x * pdf;
}

template <typename T>
void LinearForward(const Matrix<T>& x, const Matrix<T>& w, const Matrix<T>& b,
                   Matrix<T>& out) {
  kernels::MatMul(x, w, out);
  kernels::AddRowBias(out, b);
}

template <typename T>
void ColumnSumAcc(const Matrix<T>& dy, Matrix<T>& db) {
  for (int i = 0; i < dy.rows; ++i) {
    const T* r = dy.row(i);
    for (int j = 0; j < dy.cols; ++j) db.data[j] += r[j];
  }
}

// Backward of y = x w + b: accumulates dw, db and returns dx = dy w^T.
template <typename T>
Matrix<T> LinearBackward(const Matrix<T>& x, const Matrix<T>& w,
                         const Matrix<T>& dy, Matrix<T>& dw, Matrix<T>& db) {
  kernels::MatMulAtAcc(x, dy, dw);
  ColumnSumAcc(dy, db);
  Matrix<T> dx;
  kernels::MatMulBt(dy, w, dx);
  return dx;
}

// Draws an inverted-dropout mask (entries 0 or 1/(1-p)) and applies it.
template <typename T>
void ApplyDropout(Matrix<T>& x, double p, Rng* rng, Matrix<T>& mask) {
  if (rng == nullptr || p <= 0.0) {
    mask = Matrix<T>();
    return;
  }
  mask.Resize(x.rows, x.cols);
  const T keep = static_cast<T>(1.0 / (1.0 - p));
  std::bernoulli_distribution drop(p);
  for (size_t i = 0; i < x.size(); ++i) {
    mask.data[i] = drop(*rng) ? T(0) : keep;
    x.data[i] *= mask.data[i];
  }
}

template <typename T>
void MaskInPlace(Matrix<T>& x, const Matrix<T>& mask) {
  if (mask.empty()) return;
  for (size_t i = 0; i < x.size(); ++i) x.data[i] *= mask.data[i];
}

template <typename T>
Matrix<T> LayerNormForward(const Matrix<T>& x, const Matrix<T>& g,
                           const Matrix<T>& b, Matrix<T>& xhat,
                           Matrix<T>& rstd) {
  const int n = x.rows, d = x.cols;
  Matrix<T> y(n, d);
  xhat.Resize(n, d);
  rstd.Resize(n, 1);
  for (int i = 0; i < n; ++i) {
    const T* xi = x.row(i);
    T mean = 0;
    for (int j = 0; j < d; ++j) mean += xi[j];
    mean /= d;
    T var = 0;
    for (int j = 0; j < d; ++j) var += (xi[j] - mean) * (xi[j] - mean);
    var /= d;
    const T rs = T(1) / std::sqrt(var + static_cast<T>(kLayerNormEps));
    rstd(i, 0) = rs;
    for (int j = 0; j < d; ++j) {
      const T h = (xi[j] - mean) * rs;
      xhat(i, j) = h;
      y(i, j) = g.data[j] * h + b.data[j];
    }
  }
  return y;
}

template <typename T>
Matrix<T> LayerNormBackward(const Matrix<T>& dy, const Matrix<T>& xhat,
                            const Matrix<T>& rstd, const Matrix<T>& g,
                            Matrix<T>& dg, Matrix<T>& db) {
  const int n = dy.rows, d = dy.cols;
  Matrix<T> dx(n, d);
  std::vector<T> dxhat(d);
  for (int i = 0; i < n; ++i) {
    T sum = 0, sum_xhat = 0;
    for (int j = 0; j < d; ++j) {
      const T gy = dy(i, j);
      dg.data[j] += gy * xhat(i, j);
      db.data[j] += gy;
      dxhat[j] = gy * g.data[j];
      sum += dxhat[j];
      sum_xhat += dxhat[j] * xhat(i, j);
    }
    const T scale = rstd(i, 0) / d;
    for (int j = 0; j < d; ++j) {
      dx(i, j) = scale * (d * dxhat[j] - sum - xhat(i, j) * sum_xhat);
    }
  }
  return dx;
}

void CheckIds(const ModelConfig& config, const std::vector<TokenId>& ids) {
  if (ids.empty()) UsageError("forward: empty input sequence");
  if (static_cast<int>(ids.size()) > config.max_len) {
    UsageError("forward: sequence of length " + std::to_string(ids.size()) +
               " exceeds max_len " + std::to_string(config.max_len));
  }
  for (TokenId id : ids) {
    if (id < 0 || id >= config.vocab_size) {
      MismatchError("forward: token id " + std::to_string(id) +
                    " outside model vocabulary of size " +
                    std::to_string(config.vocab_size));
    }
  }
}

}  // namespace

void ModelConfig::Validate() const {
  if (n_layers < 1) UsageError("config: n_layers must be >= 1");
  if (n_heads < 1) UsageError("config: n_heads must be >= 1");
  if (d_model < 1 || d_model % n_heads != 0) {
    UsageError("config: d_model must be a positive multiple of n_heads");
  }
  if (d_ff < 1) UsageError("config: d_ff must be >= 1");
  if (max_len < 2) UsageError("config: max_len must be >= 2");
  if (vocab_size < 1) UsageError("config: vocab_size must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) UsageError("config: dropout must be in [0,1)");
  if (!(init_scale > 0.0)) UsageError("config: init_scale must be positive");
}

nlohmann::ordered_json ModelConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["n_layers"] = n_layers;
  j["n_heads"] = n_heads;
  j["d_model"] = d_model;
  j["d_ff"] = d_ff;
  j["max_len"] = max_len;
  j["vocab_size"] = vocab_size;
  j["dropout"] = dropout;
  j["seed"] = seed;
  j["init_scale"] = init_scale;
  return j;
}

ModelConfig ModelConfig::FromJson(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.n_layers = j.at("n_layers").get<int>();
    c.n_heads = j.at("n_heads").get<int>();
    c.d_model = j.at("d_model").get<int>();
    c.d_ff = j.at("d_ff").get<int>();
    c.max_len = j.at("max_len").get<int>();
    c.vocab_size = j.at("vocab_size").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.seed = j.at("seed").get<uint64_t>();
    c.init_scale = j.value("init_scale", 0.02);
  } catch (const nlohmann::json::exception& e) {
    DataError(std::string("model config: ") + e.what());
  }
  return c;
}

template <typename T>
Params<T> Params<T>::Zeros(const ModelConfig& config, int head_size) {
  const int d = config.d_model, ff = config.d_ff;
  Params<T> p;
  p.tok_emb = Matrix<T>(config.vocab_size, d);
  p.pos_emb = Matrix<T>(config.max_len, d);
  p.layers.resize(config.n_layers);
  for (LayerParams<T>& l : p.layers) {
    l.wq = Matrix<T>(d, d);
    l.wk = Matrix<T>(d, d);
    l.wv = Matrix<T>(d, d);
    l.wo = Matrix<T>(d, d);
    l.bq = Matrix<T>(1, d);
    l.bk = Matrix<T>(1, d);
    l.bv = Matrix<T>(1, d);
    l.bo = Matrix<T>(1, d);
    l.ln1_g = Matrix<T>(1, d);
    l.ln1_b = Matrix<T>(1, d);
    l.w1 = Matrix<T>(d, ff);
    l.b1 = Matrix<T>(1, ff);
    l.w2 = Matrix<T>(ff, d);
    l.b2 = Matrix<T>(1, d);
    l.ln2_g = Matrix<T>(1, d);
    l.ln2_b = Matrix<T>(1, d);
  }
  p.head_w = Matrix<T>(d, head_size);
  p.head_b = Matrix<T>(1, head_size);
  return p;
}

template <typename T>
std::vector<NamedTensor<T>> Params<T>::Tensors() {
  std::vector<NamedTensor<T>> out = {{"tok_emb", &tok_emb}, {"pos_emb", &pos_emb}};
  for (size_t i = 0; i < layers.size(); ++i) {
    const std::string p = "layers." + std::to_string(i) + ".";
    LayerParams<T>& l = layers[i];
    for (auto [name, m] : std::initializer_list<std::pair<const char*, Matrix<T>*>>{
             {"wq", &l.wq}, {"bq", &l.bq}, {"wk", &l.wk}, {"bk", &l.bk},
             {"wv", &l.wv}, {"bv", &l.bv}, {"wo", &l.wo}, {"bo", &l.bo},
             {"ln1_g", &l.ln1_g}, {"ln1_b", &l.ln1_b}, {"w1", &l.w1},
             {"b1", &l.b1}, {"w2", &l.w2}, {"b2", &l.b2},
             {"ln2_g", &l.ln2_g}, {"ln2_b", &l.ln2_b}}) {
      out.push_back({p + name, m});
    }
  }
  out.push_back({"head.w", &head_w});
  out.push_back({"head.b", &head_b});
  return out;
}

template <typename T>
std::vector<std::pair<std::string, const Matrix<T>*>> Params<T>::Tensors()
    const {
  std::vector<std::pair<std::string, const Matrix<T>*>> out;
  for (const auto& nt : const_cast<Params<T>*>(this)->Tensors()) {
    out.emplace_back(nt.name, nt.tensor);
  }
  return out;
}

template <typename T>
void Params<T>::SetZero() {
  for (auto& nt : Tensors()) nt.tensor->Fill(T(0));
}

template <typename T>
size_t Params<T>::ParameterCount() const {
  size_t n = 0;
  for (const auto& [name, m] : Tensors()) n += m->size();
  return n;
}

template <typename T>
void InitParams(const ModelConfig& config, Params<T>& params) {
  Rng rng(config.seed);
  std::normal_distribution<double> normal(0.0, config.init_scale);
  for (auto& [name, m] : params.Tensors()) {
    const std::string leaf = name.substr(name.rfind('.') + 1);
    const bool is_gain = leaf.ends_with("_g");
    const bool is_bias = leaf.ends_with("_b") || leaf[0] == 'b';
    if (is_gain) {
      m->Fill(T(1));
    } else if (is_bias) {
      m->Fill(T(0));
    } else {
      for (T& x : m->data) x = static_cast<T>(normal(rng));
    }
  }
}

template <typename T>
Matrix<T> EncodeHidden(const ModelConfig& config, const Params<T>& params,
                       const std::vector<TokenId>& ids, Rng* dropout_rng,
                       ForwardCache<T>* cache) {
  CheckIds(config, ids);
  const int n = static_cast<int>(ids.size());
  const int d = config.d_model;
  const int heads = config.n_heads;
  const int dh = d / heads;
  const T scale = T(1) / std::sqrt(static_cast<T>(dh));

  ForwardCache<T> local;
  ForwardCache<T>& c = cache ? *cache : local;
  c.ids = ids;
  c.layers.assign(config.n_layers, LayerCache<T>());

  Matrix<T> x(n, d);
  for (int p = 0; p < n; ++p) {
    const T* te = params.tok_emb.row(ids[p]);
    const T* pe = params.pos_emb.row(p);
    T* xp = x.row(p);
    for (int j = 0; j < d; ++j) xp[j] = te[j] + pe[j];
  }
  ApplyDropout(x, config.dropout, dropout_rng, c.emb_mask);

  for (int l = 0; l < config.n_layers; ++l) {
    const LayerParams<T>& w = params.layers[l];
    LayerCache<T>& lc = c.layers[l];
    lc.x_in = x;
    LinearForward(x, w.wq, w.bq, lc.q);
    LinearForward(x, w.wk, w.bk, lc.k);
    LinearForward(x, w.wv, w.bv, lc.v);
    lc.ctx.Resize(n, d);
    lc.probs.assign(heads, Matrix<T>(n, n));
    for (int h = 0; h < heads; ++h) {
      const int off = h * dh;
      Matrix<T>& prob = lc.probs[h];
      for (int i = 0; i < n; ++i) {
        T max_s = -std::numeric_limits<T>::infinity();
        for (int j = 0; j < n; ++j) {
          T s = 0;
          for (int cc = 0; cc < dh; ++cc) s += lc.q(i, off + cc) * lc.k(j, off + cc);
          s *= scale;
          prob(i, j) = s;
          max_s = std::max(max_s, s);
        }
        T z = 0;
        for (int j = 0; j < n; ++j) {
          prob(i, j) = std::exp(prob(i, j) - max_s);
          z += prob(i, j);
        }
        for (int j = 0; j < n; ++j) prob(i, j) /= z;
        for (int j = 0; j < n; ++j) {
          const T pij = prob(i, j);
          for (int cc = 0; cc < dh; ++cc) lc.ctx(i, off + cc) += pij * lc.v(j, off + cc);
        }
      }
    }
    Matrix<T> a;
    LinearForward(lc.ctx, w.wo, w.bo, a);
    ApplyDropout(a, config.dropout, dropout_rng, lc.attn_mask);
    for (size_t i = 0; i < a.size(); ++i) a.data[i] += x.data[i];
    lc.y = LayerNormForward(a, w.ln1_g, w.ln1_b, lc.ln1_xhat, lc.ln1_rstd);

    LinearForward(lc.y, w.w1, w.b1, lc.h_pre);
    lc.h_act = lc.h_pre;
    for (T& v : lc.h_act.data) v = Gelu(v);
    Matrix<T> f;
    LinearForward(lc.h_act, w.w2, w.b2, f);
    ApplyDropout(f, config.dropout, dropout_rng, lc.ffn_mask);
    for (size_t i = 0; i < f.size(); ++i) f.data[i] += lc.y.data[i];
    x = LayerNormForward(f, w.ln2_g, w.ln2_b, lc.ln2_xhat, lc.ln2_rstd);
  }
  return x;
}

template <typename T>
void BackwardHidden(const ModelConfig& config, const Params<T>& params,
                    const ForwardCache<T>& cache, const Matrix<T>& d_hidden,
                    Params<T>& grads) {
  const int n = static_cast<int>(cache.ids.size());
  const int d = config.d_model;
  const int heads = config.n_heads;
  const int dh = d / heads;
  const T scale = T(1) / std::sqrt(static_cast<T>(dh));

  Matrix<T> dx = d_hidden;
  for (int l = config.n_layers - 1; l >= 0; --l) {
    const LayerParams<T>& w = params.layers[l];
    LayerParams<T>& g = grads.layers[l];
    const LayerCache<T>& lc = cache.layers[l];

    Matrix<T> d_res2 =
        LayerNormBackward(dx, lc.ln2_xhat, lc.ln2_rstd, w.ln2_g, g.ln2_g, g.ln2_b);
    Matrix<T> d_f = d_res2;
    MaskInPlace(d_f, lc.ffn_mask);
    Matrix<T> d_hact = LinearBackward(lc.h_act, w.w2, d_f, g.w2, g.b2);
    for (size_t i = 0; i < d_hact.size(); ++i) d_hact.data[i] *= GeluGrad(lc.h_pre.data[i]);
    Matrix<T> dy = LinearBackward(lc.y, w.w1, d_hact, g.w1, g.b1);
    kernels::Accumulate(dy, d_res2);

    Matrix<T> d_res1 =
        LayerNormBackward(dy, lc.ln1_xhat, lc.ln1_rstd, w.ln1_g, g.ln1_g, g.ln1_b);
    Matrix<T> d_a = d_res1;
    MaskInPlace(d_a, lc.attn_mask);
    Matrix<T> d_ctx = LinearBackward(lc.ctx, w.wo, d_a, g.wo, g.bo);

    Matrix<T> dq(n, d), dk(n, d), dv(n, d);
    std::vector<T> dp(n);
    for (int h = 0; h < heads; ++h) {
      const int off = h * dh;
      const Matrix<T>& prob = lc.probs[h];
      for (int i = 0; i < n; ++i) {
        T dot = 0;
        for (int j = 0; j < n; ++j) {
          T s = 0;
          for (int cc = 0; cc < dh; ++cc) s += d_ctx(i, off + cc) * lc.v(j, off + cc);
          dp[j] = s;
          dot += s * prob(i, j);
          for (int cc = 0; cc < dh; ++cc) dv(j, off + cc) += prob(i, j) * d_ctx(i, off + cc);
        }
        for (int j = 0; j < n; ++j) {
          const T ds = prob(i, j) * (dp[j] - dot) * scale;
          if (ds == T(0)) continue;
          for (int cc = 0; cc < dh; ++cc) {
            dq(i, off + cc) += ds * lc.k(j, off + cc);
            dk(j, off + cc) += ds * lc.q(i, off + cc);
          }
        }
      }
    }
    Matrix<T> dx_in = d_res1;
    kernels::Accumulate(dx_in, LinearBackward(lc.x_in, w.wq, dq, g.wq, g.bq));
    kernels::Accumulate(dx_in, LinearBackward(lc.x_in, w.wk, dk, g.wk, g.bk));
    kernels::Accumulate(dx_in, LinearBackward(lc.x_in, w.wv, dv, g.wv, g.bv));
    dx = std::move(dx_in);
  }
  MaskInPlace(dx, cache.emb_mask);
  for (int p = 0; p < n; ++p) {
    T* te = grads.tok_emb.row(cache.ids[p]);
    T* pe = grads.pos_emb.row(p);
    const T* dp = dx.row(p);
    for (int j = 0; j < d; ++j) {
      te[j] += dp[j];
      pe[j] += dp[j];
    }
  }
}

template <typename T>
std::vector<T> HeadLogits(const Params<T>& params, const Matrix<T>& hidden,
                          int row) {
  const int d = params.head_w.rows, m = params.head_w.cols;
  std::vector<T> logits(params.head_b.data.begin(), params.head_b.data.end());
  const T* h = hidden.row(row);
  for (int c = 0; c < d; ++c) {
    const T hc = h[c];
    const T* wc = params.head_w.row(c);
    for (int j = 0; j < m; ++j) logits[j] += hc * wc[j];
  }
  return logits;
}

template <typename T>
void HeadBackward(const Params<T>& params, const Matrix<T>& hidden, int row,
                  const std::vector<T>& d_logits, Params<T>& grads,
                  Matrix<T>& d_hidden) {
  const int d = params.head_w.rows, m = params.head_w.cols;
  const T* h = hidden.row(row);
  T* dh = d_hidden.row(row);
  for (int j = 0; j < m; ++j) grads.head_b.data[j] += d_logits[j];
  for (int c = 0; c < d; ++c) {
    const T* wc = params.head_w.row(c);
    T* gc = grads.head_w.row(c);
    T acc = 0;
    for (int j = 0; j < m; ++j) {
      gc[j] += h[c] * d_logits[j];
      acc += wc[j] * d_logits[j];
    }
    dh[c] += acc;
  }
}

template <typename T>
std::vector<T> Softmax(const std::vector<T>& logits) {
  std::vector<T> p(logits.size());
  if (logits.empty()) return p;
  const T mx = *std::max_element(logits.begin(), logits.end());
  T z = 0;
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    z += p[i];
  }
  for (T& v : p) v /= z;
  return p;
}

template <typename T>
Model<T>::Model(const ModelConfig& cfg) : config(cfg) {
  config.Validate();
  params = Params<T>::Zeros(config, config.vocab_size);
  InitParams(config, params);
}

template <typename T>
Matrix<T> Model<T>::Forward(const std::vector<TokenId>& ids, bool train_mode,
                            Rng* dropout_rng) const {
  Rng fallback(config.seed);
  Rng* rng = train_mode ? (dropout_rng ? dropout_rng : &fallback) : nullptr;
  const Matrix<T> hidden = EncodeHidden<T>(config, params, ids, rng, nullptr);
  Matrix<T> logits;
  kernels::MatMul(hidden, params.head_w, logits);
  kernels::AddRowBias(logits, params.head_b);
  return logits;
}

template <typename To, typename From>
Params<To> CastParams(const Params<From>& from) {
  Params<To> to;
  to.layers.resize(from.layers.size());
  const auto src = from.Tensors();
  auto dst = to.Tensors();
  for (size_t i = 0; i < src.size(); ++i) {
    const Matrix<From>& s = *src[i].second;
    Matrix<To>& t = *dst[i].tensor;
    t.Resize(s.rows, s.cols);
    for (size_t k = 0; k < s.size(); ++k) t.data[k] = static_cast<To>(s.data[k]);
  }
  return to;
}

template <typename T>
AdamOptimizer<T>::AdamOptimizer(const Params<T>& shape_like, double beta1,
                                double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const auto& [name, m] : shape_like.Tensors()) {
    m_.emplace_back(m->size(), 0.0);
    v_.emplace_back(m->size(), 0.0);
  }
}

template <typename T>
void AdamOptimizer<T>::Step(Params<T>& params, Params<T>& grads, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto pt = params.Tensors();
  auto gt = grads.Tensors();
  for (size_t i = 0; i < pt.size(); ++i) {
    std::vector<T>& p = pt[i].tensor->data;
    const std::vector<T>& g = gt[i].tensor->data;
    std::vector<double>& m = m_[i];
    std::vector<double>& v = v_[i];
    for (size_t k = 0; k < p.size(); ++k) {
      const double gk = g[k];
      m[k] = beta1_ * m[k] + (1.0 - beta1_) * gk;
      v[k] = beta2_ * v[k] + (1.0 - beta2_) * gk * gk;
      const double update = (m[k] / c1) / (std::sqrt(v[k] / c2) + eps_);
      p[k] = static_cast<T>(p[k] - lr * update);
    }
  }
}

double WarmupLearningRate(double base_lr, int64_t step, int64_t total_steps) {
  const int64_t warmup = std::max<int64_t>(1, total_steps / 10);
  if (step < warmup) {
    return base_lr * static_cast<double>(step + 1) / static_cast<double>(warmup);
  }
  return base_lr;
}

template <typename T>
GradientAccumulator<T>::GradientAccumulator(const Params<T>& shape_like)
    : shards_(kShards, shape_like) {}

template <typename T>
double GradientAccumulator<T>::Run(size_t n_examples, const ExampleFn& fn,
                                   bool parallel) {
  std::vector<double> losses(kShards, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (int s = 0; s < kShards; ++s) {
    shards_[s].SetZero();
    const size_t begin = n_examples * s / kShards;
    const size_t end = n_examples * (s + 1) / kShards;
    for (size_t e = begin; e < end; ++e) losses[s] += fn(e, shards_[s]);
  }
  double loss = losses[0];
  auto total = shards_[0].Tensors();
  for (int s = 1; s < kShards; ++s) {
    loss += losses[s];
    auto part = shards_[s].Tensors();
    for (size_t i = 0; i < total.size(); ++i) {
      kernels::Accumulate(*total[i].tensor, *part[i].tensor);
    }
  }
  return loss;
}

#define IRAUG_INSTANTIATE_ENCODER(T)                                          \
  template struct Params<T>;                                                  \
  template void InitParams(const ModelConfig&, Params<T>&);                   \
  template Matrix<T> EncodeHidden(const ModelConfig&, const Params<T>&,       \
                                  const std::vector<TokenId>&, Rng*,          \
                                  ForwardCache<T>*);                          \
  template void BackwardHidden(const ModelConfig&, const Params<T>&,          \
                               const ForwardCache<T>&, const Matrix<T>&,      \
                               Params<T>&);                                   \
  template std::vector<T> HeadLogits(const Params<T>&, const Matrix<T>&, int); \
  template void HeadBackward(const Params<T>&, const Matrix<T>&, int,         \
                             const std::vector<T>&, Params<T>&, Matrix<T>&);  \
  template std::vector<T> Softmax(const std::vector<T>&);                     \
  template struct Model<T>;                                                   \
  template class AdamOptimizer<T>;                                            \
  template class GradientAccumulator<T>;

IRAUG_INSTANTIATE_ENCODER(float)
IRAUG_INSTANTIATE_ENCODER(double)

template Params<double> CastParams(const Params<float>&);
template Params<float> CastParams(const Params<double>&);
template Params<float> CastParams(const Params<float>&);

}  // namespace iraug
