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

#include "iraug/vocab.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "iraug/error.h"
#include "iraug/random.h"

namespace iraug {
namespace {

constexpr std::string_view kHeader = "wordbpe-v1";
constexpr std::string_view kIntentPrefix = "[INTENT:";

uint64_t PairKey(TokenId left, TokenId right) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(left)) << 32) |
         static_cast<uint32_t>(right);
}

std::vector<std::string_view> SplitOn(std::string_view s,
                                      std::string_view delim) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  for (;;) {
    const size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + delim.size();
  }
}

template <typename Int>
Int ParseInt(std::string_view s, const std::string& where) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    DataError(where + ": bad integer '" + std::string(s) + "'");
  }
  return value;
}

Token SpecialToken(std::string surface) {
  Token t;
  t.surface = std::move(surface);
  t.special = true;
  return t;
}

Token ContentToken(WordList words, int64_t count) {
  Token t;
  t.surface = JoinSurface(words);
  t.words = std::move(words);
  t.count = count;
  return t;
}

// Merges every left-to-right, non-overlapping occurrence of (left, right).
// Returns true if the sequence changed.
bool ApplyMerge(std::vector<TokenId>& seq, TokenId left, TokenId right,
                TokenId merged) {
  bool changed = false;
  size_t out = 0;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i + 1 < seq.size() && seq[i] == left && seq[i + 1] == right) {
      seq[out++] = merged;
      ++i;
      changed = true;
    } else {
      seq[out++] = seq[i];
    }
  }
  seq.resize(out);
  return changed;
}

}  // namespace

bool operator==(const Token& a, const Token& b) {
  return a.surface == b.surface && a.words == b.words && a.count == b.count &&
         a.special == b.special;
}

std::string IntentSurface(std::string_view intent) {
  return std::string(kIntentPrefix) + std::string(intent) + "]";
}

std::string JoinSurface(const WordList& words) {
  return JoinWords(words, kSeparator);
}

Vocabulary::Vocabulary(std::vector<Token> tokens, std::vector<MergeRule> merges)
    : tokens_(std::move(tokens)), merges_(std::move(merges)) {
  if (tokens_.size() < 3 || tokens_[kPad].surface != "[PAD]" ||
      tokens_[kMask].surface != "[MASK]" || tokens_[kUnk].surface != "[UNK]") {
    DataError("vocabulary must start with [PAD], [MASK], [UNK]");
  }
  for (size_t id = 0; id < tokens_.size(); ++id) {
    const Token& t = tokens_[id];
    if (t.special) {
      if (!t.words.empty()) DataError("special token with words: " + t.surface);
    } else {
      if (t.words.empty()) DataError("content token without words at id " + std::to_string(id));
      if (t.surface != JoinSurface(t.words)) DataError("surface/words disagree: " + t.surface);
      for (const auto& w : t.words) {
        if (!IsNormalizedWord(w)) DataError("unnormalized word in vocabulary: " + w);
      }
    }
    if (!by_surface_.emplace(t.surface, static_cast<TokenId>(id)).second) {
      DataError("duplicate vocabulary surface: " + t.surface);
    }
  }
  std::vector<bool> producible(tokens_.size(), false);
  for (size_t id = 0; id < tokens_.size(); ++id) {
    producible[id] = tokens_[id].special || tokens_[id].n() == 1;
  }
  const auto n = static_cast<TokenId>(tokens_.size());
  for (size_t r = 0; r < merges_.size(); ++r) {
    const MergeRule& m = merges_[r];
    if (m.rank != static_cast<int>(r)) DataError("merge ranks must be consecutive from 0");
    for (TokenId id : {m.left, m.right, m.merged}) {
      if (id < 0 || id >= n) DataError("merge rule references unknown token id");
    }
    const Token& l = tokens_[m.left];
    const Token& rt = tokens_[m.right];
    if (l.special || rt.special) DataError("merge rule references a special token");
    if (!producible[m.left] || !producible[m.right]) {
      DataError("merge rule uses a token before it is produced");
    }
    if (tokens_[m.merged].surface != l.surface + std::string(kSeparator) + rt.surface) {
      DataError("merged surface mismatch at rank " + std::to_string(r));
    }
    producible[m.merged] = true;
    if (!rule_by_pair_.emplace(PairKey(m.left, m.right), r).second) {
      DataError("duplicate merge pair at rank " + std::to_string(r));
    }
  }
  for (size_t id = 0; id < tokens_.size(); ++id) {
    if (!producible[id]) DataError("multi-word token not producible: " + tokens_[id].surface);
  }
}

const Token& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<size_t>(id) >= tokens_.size()) {
    MismatchError("token id " + std::to_string(id) + " outside vocabulary of size " +
                  std::to_string(tokens_.size()));
  }
  return tokens_[id];
}

bool Vocabulary::IsIntentToken(TokenId id) const {
  const Token& t = token(id);
  return t.special && t.surface.starts_with(kIntentPrefix);
}

std::optional<TokenId> Vocabulary::Find(std::string_view surface) const {
  const auto it = by_surface_.find(std::string(surface));
  if (it == by_surface_.end()) return std::nullopt;
  return it->second;
}

std::optional<TokenId> Vocabulary::IntentToken(std::string_view intent) const {
  return Find(IntentSurface(intent));
}

std::vector<std::string> Vocabulary::IntentLabels() const {
  std::vector<std::string> labels;
  for (size_t id = 0; id < tokens_.size(); ++id) {
    if (IsIntentToken(static_cast<TokenId>(id))) {
      const std::string& s = tokens_[id].surface;
      labels.push_back(s.substr(kIntentPrefix.size(), s.size() - kIntentPrefix.size() - 1));
    }
  }
  return labels;
}

Encoding Vocabulary::EncodeWithSpans(const WordList& words) const {
  Encoding enc;
  enc.ids.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    const auto id = Find(words[i]);
    // A word that happens to look like a special surface is still unknown.
    enc.ids.push_back(id && !tokens_[*id].special ? *id : kUnk);
    enc.spans.emplace_back(i, i + 1);
  }
  // Lowest-rank pair first. A merge can only create pairs of higher rank,
  // so this is the same as sweeping the rules in rank order.
  for (;;) {
    size_t best = merges_.size();
    for (size_t i = 0; i + 1 < enc.ids.size(); ++i) {
      const auto it = rule_by_pair_.find(PairKey(enc.ids[i], enc.ids[i + 1]));
      if (it != rule_by_pair_.end()) best = std::min(best, it->second);
    }
    if (best == merges_.size()) break;
    const MergeRule& rule = merges_[best];
    size_t out = 0;
    for (size_t i = 0; i < enc.ids.size(); ++i) {
      if (i + 1 < enc.ids.size() && enc.ids[i] == rule.left &&
          enc.ids[i + 1] == rule.right) {
        enc.ids[out] = rule.merged;
        enc.spans[out] = {enc.spans[i].first, enc.spans[i + 1].second};
        ++i;
      } else {
        enc.ids[out] = enc.ids[i];
        enc.spans[out] = enc.spans[i];
      }
      ++out;
    }
    enc.ids.resize(out);
    enc.spans.resize(out);
  }
  return enc;
}

WordList Vocabulary::Decode(const std::vector<TokenId>& ids) const {
  WordList words;
  for (TokenId id : ids) {
    const Token& t = token(id);
    if (t.special) {
      words.push_back(t.surface);
    } else {
      words.insert(words.end(), t.words.begin(), t.words.end());
    }
  }
  return words;
}

std::string Vocabulary::Serialize() const {
  std::ostringstream out;
  char hex[16];
  std::snprintf(hex, sizeof(hex), "%x", static_cast<unsigned>(kSeparatorCodepoint));
  out << kHeader << ' ' << hex << '\n';
  for (size_t id = 0; id < tokens_.size(); ++id) {
    out << id << '\t' << tokens_[id].count << '\t' << tokens_[id].surface << '\n';
  }
  out << "#merges\n";
  for (const MergeRule& m : merges_) {
    out << m.rank << '\t' << m.left << '\t' << m.right << '\t' << m.merged
        << '\t' << m.pair_count << '\n';
  }
  return out.str();
}

Vocabulary Vocabulary::Parse(std::string_view text) {
  std::vector<std::string_view> lines = SplitOn(text, "\n");
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) DataError("vocabulary: empty file");
  {
    const auto header = SplitOn(lines[0], " ");
    if (header.size() != 2 || header[0] != kHeader) {
      DataError("vocabulary: bad header line");
    }
    unsigned sep = 0;
    const auto [ptr, ec] = std::from_chars(
        header[1].data(), header[1].data() + header[1].size(), sep, 16);
    if (ec != std::errc() || sep != kSeparatorCodepoint) {
      DataError("vocabulary: unsupported separator codepoint");
    }
  }
  std::vector<Token> tokens;
  std::vector<MergeRule> merges;
  bool in_merges = false;
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    const std::string where = "vocabulary line " + std::to_string(ln + 1);
    std::string_view line = lines[ln];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line == "#merges") {
      in_merges = true;
      continue;
    }
    const auto f = SplitOn(line, "\t");
    if (!in_merges) {
      if (f.size() != 3) DataError(where + ": expected id, count, surface");
      if (ParseInt<size_t>(f[0], where) != tokens.size()) {
        DataError(where + ": token ids must be consecutive from 0");
      }
      const auto count = ParseInt<int64_t>(f[1], where);
      const std::string surface(f[2]);
      if (surface.size() >= 2 && surface.front() == '[' && surface.back() == ']') {
        tokens.push_back(SpecialToken(surface));
      } else {
        WordList words;
        for (std::string_view w : SplitOn(surface, kSeparator)) words.emplace_back(w);
        tokens.push_back(ContentToken(std::move(words), count));
      }
    } else {
      if (f.size() != 5) DataError(where + ": expected 5 merge fields");
      MergeRule m;
      m.rank = ParseInt<int>(f[0], where);
      m.left = ParseInt<TokenId>(f[1], where);
      m.right = ParseInt<TokenId>(f[2], where);
      m.merged = ParseInt<TokenId>(f[3], where);
      m.pair_count = ParseInt<int64_t>(f[4], where);
      merges.push_back(m);
    }
  }
  if (!in_merges) DataError("vocabulary: missing #merges section");
  return Vocabulary(std::move(tokens), std::move(merges));
}

void Vocabulary::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) DataError("cannot write vocabulary '" + path + "'");
  out << Serialize();
}

Vocabulary Vocabulary::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) DataError("cannot open vocabulary '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

std::string Vocabulary::Fingerprint() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a(Serialize())));
  return buf;
}

Vocabulary LearnBpe(const Dataset& corpus, int max_merges,
                    int64_t min_pair_count) {
  if (corpus.empty()) UsageError("learn_bpe: empty corpus");

  std::vector<Token> tokens = {SpecialToken("[PAD]"), SpecialToken("[MASK]"),
                               SpecialToken("[UNK]")};
  for (const std::string& intent : corpus.intent_labels()) {
    tokens.push_back(SpecialToken(IntentSurface(intent)));
  }

  std::map<std::string, int64_t> word_counts;
  for (const Utterance& u : corpus.utterances()) {
    for (const std::string& w : u.words) ++word_counts[w];
  }
  std::vector<std::pair<std::string, int64_t>> unigrams(word_counts.begin(),
                                                        word_counts.end());
  std::stable_sort(unigrams.begin(), unigrams.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::unordered_map<std::string, TokenId> ids;
  for (const auto& [word, count] : unigrams) {
    ids[word] = static_cast<TokenId>(tokens.size());
    tokens.push_back(ContentToken({word}, count));
  }

  std::vector<std::vector<TokenId>> seqs;
  seqs.reserve(corpus.size());
  for (const Utterance& u : corpus.utterances()) {
    std::vector<TokenId> seq;
    for (const std::string& w : u.words) seq.push_back(ids.at(w));
    seqs.push_back(std::move(seq));
  }

  // Incrementally maintained pair statistics. `where` may hold stale
  // utterance indices; re-merging those is a no-op.
  std::unordered_map<uint64_t, int64_t> pair_counts;
  std::unordered_map<uint64_t, std::set<size_t>> where;
  auto add_pairs = [&](size_t s, int64_t sign) {
    const auto& seq = seqs[s];
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
      const uint64_t key = PairKey(seq[i], seq[i + 1]);
      pair_counts[key] += sign;
      if (sign > 0) where[key].insert(s);
    }
  };
  for (size_t s = 0; s < seqs.size(); ++s) add_pairs(s, +1);

  std::unordered_map<std::string, TokenId> merged_ids;
  std::vector<MergeRule> merges;
  while (static_cast<int>(merges.size()) < max_merges) {
    uint64_t best_key = 0;
    int64_t best_count = 0;
    for (auto it = pair_counts.begin(); it != pair_counts.end();) {
      if (it->second <= 0) {
        it = pair_counts.erase(it);
        continue;
      }
      const auto [key, count] = *it;
      ++it;
      if (count < best_count) continue;
      if (count > best_count) {
        best_key = key;
        best_count = count;
        continue;
      }
      const auto& a = std::pair<const std::string&, const std::string&>(
          tokens[key >> 32].surface, tokens[key & 0xffffffffu].surface);
      const auto& b = std::pair<const std::string&, const std::string&>(
          tokens[best_key >> 32].surface, tokens[best_key & 0xffffffffu].surface);
      if (a < b) best_key = key;
    }
    if (best_count == 0 || best_count <= min_pair_count) break;

    const auto left = static_cast<TokenId>(best_key >> 32);
    const auto right = static_cast<TokenId>(best_key & 0xffffffffu);
    WordList words = tokens[left].words;
    words.insert(words.end(), tokens[right].words.begin(), tokens[right].words.end());
    const std::string surface = JoinSurface(words);
    TokenId merged;
    if (const auto it = merged_ids.find(surface); it != merged_ids.end()) {
      // The same n-gram reached through a different split.
      merged = it->second;
      tokens[merged].count += best_count;
    } else {
      merged = static_cast<TokenId>(tokens.size());
      merged_ids[surface] = merged;
      tokens.push_back(ContentToken(std::move(words), best_count));
    }
    merges.push_back({left, right, merged, static_cast<int>(merges.size()), best_count});

    const std::set<size_t> affected = std::move(where[best_key]);
    where.erase(best_key);
    for (size_t s : affected) {
      add_pairs(s, -1);
      ApplyMerge(seqs[s], left, right, merged);
      add_pairs(s, +1);
    }
  }
  return Vocabulary(std::move(tokens), std::move(merges));
}

Vocabulary Prune(const Vocabulary& vocab, int64_t min_pair_count,
                 int64_t min_unigram_count) {
  const auto& tokens = vocab.tokens();
  std::vector<bool> alive(tokens.size(), false);
  for (size_t id = 0; id < tokens.size(); ++id) {
    const Token& t = tokens[id];
    alive[id] = t.special || (t.n() == 1 && t.count >= min_unigram_count);
  }
  std::vector<const MergeRule*> kept_rules;
  for (const MergeRule& m : vocab.merges()) {
    if (alive[m.left] && alive[m.right] &&
        tokens[m.merged].count > min_pair_count) {
      alive[m.merged] = true;
      kept_rules.push_back(&m);
    }
  }
  std::vector<TokenId> remap(tokens.size(), -1);
  std::vector<Token> out_tokens;
  for (size_t id = 0; id < tokens.size(); ++id) {
    if (!alive[id]) continue;
    remap[id] = static_cast<TokenId>(out_tokens.size());
    out_tokens.push_back(tokens[id]);
  }
  std::vector<MergeRule> out_merges;
  for (const MergeRule* m : kept_rules) {
    out_merges.push_back({remap[m->left], remap[m->right], remap[m->merged],
                          static_cast<int>(out_merges.size()), m->pair_count});
  }
  return Vocabulary(std::move(out_tokens), std::move(out_merges));
}

}  // namespace iraug
