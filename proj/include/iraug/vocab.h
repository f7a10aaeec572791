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

#ifndef IRAUG_VOCAB_H_
#define IRAUG_VOCAB_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iraug/corpus.h"

namespace iraug {

using TokenId = int32_t;

// U+241F SYMBOL FOR UNIT SEPARATOR joins the words of a multi-word token.
// Normalize() never lets it through, so it cannot occur inside a word.
inline constexpr char32_t kSeparatorCodepoint = 0x241F;
inline constexpr std::string_view kSeparator = "\xE2\x90\x9F";

struct Token {
  std::string surface;  // words joined by kSeparator, or "[...]" for specials
  WordList words;       // empty for specials
  int64_t count = 0;
  bool special = false;

  size_t n() const { return words.size(); }
};

struct MergeRule {
  TokenId left = 0;
  TokenId right = 0;
  TokenId merged = 0;
  int rank = 0;
  int64_t pair_count = 0;

  bool operator==(const MergeRule&) const = default;
};

// Token positions in an encoded utterance map back to half-open word spans.
struct Encoding {
  std::vector<TokenId> ids;
  std::vector<std::pair<size_t, size_t>> spans;
};

// Ordered merge rules plus the token table. Ids 0..2 are PAD, MASK and UNK,
// followed by one reserved token per intent label, then content tokens.
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kMask = 1;
  static constexpr TokenId kUnk = 2;

  Vocabulary() = default;

  // Validates and indexes a token table and merge list. Throws a data error
  // when the invariants do not hold.
  Vocabulary(std::vector<Token> tokens, std::vector<MergeRule> merges);

  size_t size() const { return tokens_.size(); }
  const Token& token(TokenId id) const;
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<MergeRule>& merges() const { return merges_; }

  bool IsSpecial(TokenId id) const { return token(id).special; }
  bool IsIntentToken(TokenId id) const;
  std::optional<TokenId> Find(std::string_view surface) const;
  std::optional<TokenId> IntentToken(std::string_view intent) const;
  std::vector<std::string> IntentLabels() const;

  Encoding EncodeWithSpans(const WordList& words) const;
  std::vector<TokenId> Encode(const WordList& words) const {
    return EncodeWithSpans(words).ids;
  }
  // Throws a mismatch error on ids outside the table. Specials decode to
  // their bracketed surface.
  WordList Decode(const std::vector<TokenId>& ids) const;

  std::string Serialize() const;
  static Vocabulary Parse(std::string_view text);
  void Save(const std::string& path) const;
  static Vocabulary Load(const std::string& path);

  // Hex FNV-1a of the serialized form.
  std::string Fingerprint() const;

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_ && merges_ == other.merges_;
  }

 private:
  std::vector<Token> tokens_;
  std::vector<MergeRule> merges_;
  std::unordered_map<std::string, TokenId> by_surface_;
  std::unordered_map<uint64_t, size_t> rule_by_pair_;  // -> index in merges_
};

bool operator==(const Token& a, const Token& b);

std::string IntentSurface(std::string_view intent);
std::string JoinSurface(const WordList& words);

// Word-level BPE: repeatedly merges the most frequent adjacent token pair
// inside utterances. Ties go to the lexicographically smallest
// (left surface, right surface). Stops after `max_merges` merges or when the
// best pair count is <= `min_pair_count`.
Vocabulary LearnBpe(const Dataset& corpus, int max_merges,
                    int64_t min_pair_count);

// Drops multi-word tokens with count <= min_pair_count, unigrams with
// count < min_unigram_count, and every merge rule that depends on a dropped
// token. Surviving ids are compacted in order.
Vocabulary Prune(const Vocabulary& vocab, int64_t min_pair_count = 100,
                 int64_t min_unigram_count = 2);

}  // namespace iraug

#endif  // IRAUG_VOCAB_H_
