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

#include "iraug/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "iraug/error.h"

namespace iraug {
namespace {

double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

std::vector<const std::vector<double>*> Lookup(const WordList& words,
                                               const EmbeddingTable& emb,
                                               size_t* oov) {
  std::vector<const std::vector<double>*> out;
  for (const std::string& w : words) {
    const auto* v = emb.Find(w);
    if (v) {
      out.push_back(v);
    } else if (oov) {
      ++*oov;
    }
  }
  return out;
}

void CheckCoverage(const std::vector<const std::vector<double>*>& a,
                   const std::vector<const std::vector<double>*>& b,
                   const WordList& orig, const WordList& reph) {
  if (a.empty() || b.empty()) {
    NumericError("semantic similarity: no in-vocabulary word in '" +
                 JoinWords(a.empty() ? orig : reph) + "'");
  }
}

std::vector<double> MeanPool(const std::vector<const std::vector<double>*>& vs) {
  std::vector<double> mean(vs.front()->size(), 0.0);
  for (const auto* v : vs) {
    for (size_t i = 0; i < mean.size(); ++i) mean[i] += (*v)[i];
  }
  for (double& x : mean) x /= static_cast<double>(vs.size());
  return mean;
}

}  // namespace

void EmbeddingTable::Add(const std::string& word, std::vector<double> vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_ || dim_ == 0) {
    DataError("embedding for '" + word + "' has dimension " +
              std::to_string(vec.size()) + ", expected " + std::to_string(dim_));
  }
  double norm = 0.0;
  for (double x : vec) norm += x * x;
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    DataError("embedding for '" + word + "' is zero or non-finite");
  }
  vectors_[word] = std::move(vec);
}

const std::vector<double>* EmbeddingTable::Find(const std::string& word) const {
  const auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable ParseEmbeddings(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word)) continue;
    std::vector<double> vec;
    std::string tok;
    while (ss >> tok) {
      try {
        size_t used = 0;
        vec.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        DataError("embeddings line " + std::to_string(line_number) +
                  ": bad number '" + tok + "'");
      }
    }
    const WordList norm = Normalize(word);
    if (norm.size() != 1) continue;
    table.Add(norm[0], std::move(vec));
  }
  return table;
}

EmbeddingTable LoadEmbeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) DataError("cannot open embedding file '" + path + "'");
  return ParseEmbeddings(in);
}

double Jaccard(const WordList& orig, const WordList& reph) {
  if (orig.empty() || reph.empty()) UsageError("jaccard: empty word list");
  const std::set<std::string> a(orig.begin(), orig.end());
  const std::set<std::string> b(reph.begin(), reph.end());
  size_t common = 0;
  for (const auto& w : a) common += b.count(w);
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

std::optional<double> CopiedNgramFraction(const WordList& orig,
                                          const WordList& reph, size_t n) {
  if (n == 0) UsageError("copied n-gram fraction: n must be positive");
  if (reph.size() < n) return std::nullopt;
  std::set<WordList> source;
  for (size_t i = 0; i + n <= orig.size(); ++i) {
    source.emplace(orig.begin() + i, orig.begin() + i + n);
  }
  size_t copied = 0;
  const size_t total = reph.size() - n + 1;
  for (size_t i = 0; i < total; ++i) {
    copied += source.count(WordList(reph.begin() + i, reph.begin() + i + n));
  }
  return static_cast<double>(copied) / static_cast<double>(total);
}

double WordSemanticSimilarity(const WordList& orig, const WordList& reph,
                              const EmbeddingTable& emb, size_t* oov) {
  const auto a = Lookup(orig, emb, oov);
  const auto b = Lookup(reph, emb, oov);
  CheckCoverage(a, b, orig, reph);
  double sum = 0.0;
  for (const auto* u : a) {
    for (const auto* v : b) sum += Cosine(*u, *v);
  }
  return sum / static_cast<double>(a.size() * b.size());
}

double SentenceSemanticSimilarity(const WordList& orig, const WordList& reph,
                                  const EmbeddingTable& emb, size_t* oov) {
  const auto a = Lookup(orig, emb, oov);
  const auto b = Lookup(reph, emb, oov);
  CheckCoverage(a, b, orig, reph);
  const auto ma = MeanPool(a);
  const auto mb = MeanPool(b);
  double na = 0.0, nb = 0.0;
  for (size_t i = 0; i < ma.size(); ++i) {
    na += ma[i] * ma[i];
    nb += mb[i] * mb[i];
  }
  // Opposite vectors can cancel under pooling.
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Cosine(ma, mb);
}

MetricsReport Report(const std::vector<AugmentedPair>& pairs,
                     const EmbeddingTable* emb) {
  if (pairs.empty()) UsageError("metrics: no pairs");
  MetricsReport r;
  r.pair_count = pairs.size();
  double jaccard = 0.0;
  std::vector<double> copied(3, 0.0);
  std::vector<size_t> copied_n(3, 0);
  double wsim = 0.0, ssim = 0.0;
  size_t sim_n = 0;
  for (const AugmentedPair& p : pairs) {
    const WordList& o = p.original.words;
    const WordList& g = p.rephrase.words;
    jaccard += Jaccard(o, g);
    for (size_t n = 1; n <= 3; ++n) {
      if (const auto c = CopiedNgramFraction(o, g, n)) {
        copied[n - 1] += *c;
        ++copied_n[n - 1];
      }
    }
    if (emb) {
      size_t oov = 0;
      const auto a = Lookup(o, *emb, &oov);
      const auto b = Lookup(g, *emb, &oov);
      r.oov_word_count += oov;
      if (a.empty() || b.empty()) {
        ++r.semsim_excluded;
        continue;
      }
      wsim += WordSemanticSimilarity(o, g, *emb);
      ssim += SentenceSemanticSimilarity(o, g, *emb);
      ++sim_n;
    }
  }
  const double count = static_cast<double>(pairs.size());
  r.jaccard_mean = jaccard / count;
  for (size_t n = 0; n < 3; ++n) {
    r.copied_excluded.push_back(pairs.size() - copied_n[n]);
    r.copied_fraction_mean.push_back(
        copied_n[n] ? std::optional<double>(copied[n] / static_cast<double>(copied_n[n]))
                    : std::nullopt);
  }
  if (sim_n > 0) {
    r.word_semsim_mean = wsim / static_cast<double>(sim_n);
    r.sentence_semsim_mean = ssim / static_cast<double>(sim_n);
  }
  return r;
}

nlohmann::ordered_json MetricsReport::ToJson() const {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["pair_count"] = pair_count;
  j["jaccard_mean"] = jaccard_mean;
  nlohmann::ordered_json copied = nlohmann::ordered_json::object();
  for (size_t n = 0; n < copied_fraction_mean.size(); ++n) {
    copied[std::to_string(n + 1)] = opt(copied_fraction_mean[n]);
  }
  j["copied_fraction_mean"] = copied;
  j["copied_excluded"] = copied_excluded;
  j["word_semsim_mean"] = opt(word_semsim_mean);
  j["sentence_semsim_mean"] = opt(sentence_semsim_mean);
  j["semsim_excluded"] = semsim_excluded;
  j["oov_word_count"] = oov_word_count;
  j["substitutions"] = {"sentence_semsim: mean-pooled word vectors"};
  return j;
}

}  // namespace iraug
