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

#include "iraug/rephraser.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include "iraug/error.h"
#include "iraug/mlm.h"

namespace iraug {
namespace {

constexpr const char* kSource = "bert-ir";

// The model input for an utterance: optional intent prefix plus as many
// tokens as fit in max_len.
struct ModelInput {
  Encoding enc;
  std::vector<TokenId> ids;
  size_t offset = 0;  // index in `ids` of enc.ids[0]
  size_t usable = 0;  // tokens of enc that made it into `ids`
};

ModelInput PrepareInput(const Model<float>& model, const Vocabulary& vocab,
                        const Utterance& utterance) {
  ModelInput in;
  in.enc = vocab.EncodeWithSpans(utterance.words);
  if (model.finetuned && utterance.intent) {
    const auto it = model.intent_tokens.find(*utterance.intent);
    if (it != model.intent_tokens.end()) {
      in.ids.push_back(it->second);
      in.offset = 1;
    }
  }
  const size_t room = static_cast<size_t>(model.config.max_len) - in.offset;
  in.usable = std::min(room, in.enc.ids.size());
  in.ids.insert(in.ids.end(), in.enc.ids.begin(), in.enc.ids.begin() + in.usable);
  return in;
}

}  // namespace

std::vector<RephraseCandidate> Candidates(const Model<float>& model,
                                          const Vocabulary& vocab,
                                          const Utterance& utterance, int k,
                                          PositionMode positions) {
  if (k <= 0 || utterance.words.empty()) return {};
  if (static_cast<int>(vocab.size()) != model.config.vocab_size) {
    MismatchError("rephrase: vocabulary size differs from model vocab_size");
  }
  const ModelInput in = PrepareInput(model, vocab, utterance);
  size_t n_special = 0;
  for (const Token& t : vocab.tokens()) n_special += t.special ? 1 : 0;

  std::vector<RephraseCandidate> out;
  for (size_t p = 0; p < in.usable; ++p) {
    const TokenId original = in.enc.ids[p];
    if (positions == PositionMode::kMultiwordOnly &&
        (original == Vocabulary::kUnk || vocab.token(original).n() < 2)) {
      continue;
    }
    std::vector<TokenId> ids = in.ids;
    const int model_pos = static_cast<int>(in.offset + p);
    ids[model_pos] = Vocabulary::kMask;
    const auto top = PredictMasked(model, ids, model_pos,
                                   k + static_cast<int>(n_special) + 1);
    int kept = 0;
    for (const TokenProb& tp : top) {
      if (kept == k) break;
      if (tp.id == original || vocab.IsSpecial(tp.id)) continue;
      const Token& repl = vocab.token(tp.id);
      if (original != Vocabulary::kUnk && repl.surface == vocab.token(original).surface) {
        continue;
      }
      RephraseCandidate c;
      c.position = p;
      c.original_id = original;
      c.replacement_id = tp.id;
      c.probability = tp.prob;
      const auto [begin, end] = in.enc.spans[p];
      c.word_span = in.enc.spans[p];
      c.rephrase_words.assign(utterance.words.begin(), utterance.words.begin() + begin);
      c.rephrase_words.insert(c.rephrase_words.end(), repl.words.begin(), repl.words.end());
      c.rephrase_words.insert(c.rephrase_words.end(), utterance.words.begin() + end,
                              utterance.words.end());
      out.push_back(std::move(c));
      ++kept;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RephraseCandidate& a, const RephraseCandidate& b) {
                     if (a.probability != b.probability) return a.probability > b.probability;
                     if (a.position != b.position) return a.position < b.position;
                     return a.replacement_id < b.replacement_id;
                   });
  return out;
}

namespace {

// Eligible candidates with distinct outputs, best first.
std::vector<RephraseCandidate> Eligible(const Model<float>& model,
                                        const Vocabulary& vocab,
                                        const Utterance& utterance,
                                        const RephraseOptions& options) {
  std::vector<RephraseCandidate> out;
  std::set<WordList> seen = {utterance.words};
  for (RephraseCandidate& c :
       Candidates(model, vocab, utterance, options.k, options.positions)) {
    if (c.probability < options.min_prob) continue;
    if (!seen.insert(c.rephrase_words).second) continue;
    out.push_back(std::move(c));
  }
  return out;
}

// Draws up to `count` candidates without replacement.
std::vector<size_t> Choose(const std::vector<RephraseCandidate>& cands,
                           size_t count, const DecodePolicy& policy, Rng& rng) {
  std::vector<size_t> picked;
  if (policy.kind == DecodePolicy::Kind::kGreedy) {
    for (size_t i = 0; i < cands.size() && picked.size() < count; ++i) picked.push_back(i);
    return picked;
  }
  if (!(policy.temperature > 0.0)) UsageError("sampling temperature must be positive");
  std::vector<double> w;
  for (const auto& c : cands) w.push_back(std::pow(c.probability, 1.0 / policy.temperature));
  while (picked.size() < count) {
    double total = 0.0;
    for (double x : w) total += x;
    if (total <= 0.0) break;
    double x = UniformReal(rng) * total;
    size_t i = 0;
    for (; i + 1 < w.size(); ++i) {
      if (x < w[i]) break;
      x -= w[i];
    }
    while (w[i] == 0.0) --i;  // rounding at the upper end
    picked.push_back(i);
    w[i] = 0.0;
  }
  return picked;
}

Utterance MakeRephrase(const Utterance& original, WordList words,
                       const std::string& id) {
  Utterance u;
  u.id = id;
  u.words = std::move(words);
  u.domain = original.domain;
  u.intent = original.intent;
  return u;
}

}  // namespace

std::string AugmentedId(const std::string& original_id,
                        const std::string& source, int k) {
  return original_id + "#" + source + "-" + std::to_string(k);
}

std::optional<Utterance> RephraseOne(const Model<float>& model,
                                     const Vocabulary& vocab,
                                     const Utterance& utterance,
                                     const RephraseOptions& options,
                                     uint64_t seed) {
  const auto cands = Eligible(model, vocab, utterance, options);
  Rng rng(seed);
  const auto picked = Choose(cands, 1, options.policy, rng);
  if (picked.empty()) return std::nullopt;
  return MakeRephrase(utterance, cands[picked[0]].rephrase_words,
                      AugmentedId(utterance.id, kSource, 0));
}

std::vector<AugmentedPair> Augment(const Dataset& dataset,
                                   const Model<float>& model,
                                   const Vocabulary& vocab, int per_input,
                                   const RephraseOptions& options,
                                   uint64_t seed) {
  if (dataset.empty()) UsageError("augment: empty dataset");
  // Errors cannot leave the parallel loop, so check its preconditions here.
  if (static_cast<int>(vocab.size()) != model.config.vocab_size) {
    MismatchError("augment: vocabulary size differs from model vocab_size");
  }
  if (options.policy.kind == DecodePolicy::Kind::kSample &&
      !(options.policy.temperature > 0.0)) {
    UsageError("sampling temperature must be positive");
  }
  const auto& utts = dataset.utterances();
  std::vector<std::vector<AugmentedPair>> per_utt(utts.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < utts.size(); ++i) {
    const Utterance& u = utts[i];
    const auto cands = Eligible(model, vocab, u, options);
    Rng rng(DeriveSeed(seed, u.id));
    const auto picked =
        Choose(cands, static_cast<size_t>(std::max(per_input, 0)), options.policy, rng);
    for (size_t j = 0; j < picked.size(); ++j) {
      const RephraseCandidate& c = cands[picked[j]];
      AugmentedPair pair;
      pair.original = u;
      pair.rephrase = MakeRephrase(u, c.rephrase_words,
                                   AugmentedId(u.id, kSource, static_cast<int>(j)));
      pair.source = kSource;
      pair.replaced_from.assign(u.words.begin() + c.word_span.first,
                                u.words.begin() + c.word_span.second);
      pair.replaced_to = vocab.token(c.replacement_id).words;
      pair.prob = c.probability;
      per_utt[i].push_back(std::move(pair));
    }
  }
  std::vector<AugmentedPair> out;
  for (auto& v : per_utt) {
    for (auto& p : v) out.push_back(std::move(p));
  }
  return out;
}

std::string SerializeAugmented(const AugmentedPair& pair) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(SerializeRecord(pair.rephrase));
  j["source"] = pair.source;
  j["orig_id"] = pair.original.id;
  nlohmann::ordered_json replaced;
  replaced["from"] = pair.replaced_from;
  replaced["to"] = pair.replaced_to;
  if (pair.prob) {
    replaced["prob"] = *pair.prob;
  } else {
    replaced["prob"] = nullptr;
  }
  j["replaced"] = replaced;
  return j.dump();
}

void SaveAugmented(const std::vector<AugmentedPair>& pairs,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) DataError("cannot write augmented file '" + path + "'");
  for (const AugmentedPair& p : pairs) out << SerializeAugmented(p) << '\n';
}

std::vector<AugmentedPair> LoadAugmented(const std::string& path,
                                         const Dataset& originals) {
  std::unordered_map<std::string, const Utterance*> by_id;
  for (const Utterance& u : originals.utterances()) by_id[u.id] = &u;
  std::ifstream in(path);
  if (!in) DataError("cannot open augmented file '" + path + "'");
  std::vector<AugmentedPair> pairs;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ": line " + std::to_string(line_number) + ": ";
    AugmentedPair p;
    p.rephrase = ParseRecord(line, line_number);
    const auto j = nlohmann::json::parse(line);
    if (!j.contains("orig_id") || !j["orig_id"].is_string()) {
      DataError(where + "missing orig_id");
    }
    const auto it = by_id.find(j["orig_id"].get<std::string>());
    if (it == by_id.end()) {
      DataError(where + "orig_id '" + j["orig_id"].get<std::string>() +
                "' not found among originals");
    }
    p.original = *it->second;
    p.source = j.value("source", "");
    if (j.contains("replaced") && j["replaced"].is_object()) {
      const auto& r = j["replaced"];
      if (r.contains("from") && r["from"].is_array()) p.replaced_from = r["from"].get<WordList>();
      if (r.contains("to") && r["to"].is_array()) p.replaced_to = r["to"].get<WordList>();
      if (r.contains("prob") && r["prob"].is_number()) p.prob = r["prob"].get<double>();
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace iraug
