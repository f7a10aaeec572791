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

#include <gtest/gtest.h>

#include <functional>

#include "iraug/error.h"
#include "iraug/random.h"
#include "oracles.h"

namespace iraug {
namespace {

Dataset Corpus(const std::vector<std::string>& texts) {
  std::vector<Utterance> utts;
  for (size_t i = 0; i < texts.size(); ++i) {
    utts.push_back({"c" + std::to_string(i), Normalize(texts[i]), {}, {}});
  }
  return Dataset(utts);
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

Token Content(const WordList& words, int64_t count) {
  return {JoinSurface(words), words, count, false};
}

std::vector<Token> Specials() {
  return {{"[PAD]", {}, 0, true}, {"[MASK]", {}, 0, true}, {"[UNK]", {}, 0, true}};
}

std::vector<WordList> RandomCorpus(Rng& rng, size_t max_utts, size_t max_words,
                                   size_t alphabet) {
  std::vector<WordList> corpus(1 + UniformIndex(rng, max_utts));
  for (auto& u : corpus) {
    const size_t len = 1 + UniformIndex(rng, max_words);
    for (size_t i = 0; i < len; ++i) {
      u.push_back(std::string(1, static_cast<char>('a' + UniformIndex(rng, alphabet))));
    }
  }
  return corpus;
}

Dataset ToDataset(const std::vector<WordList>& corpus) {
  std::vector<Utterance> utts;
  for (size_t i = 0; i < corpus.size(); ++i) {
    utts.push_back({"r" + std::to_string(i), corpus[i], {}, {}});
  }
  return Dataset(utts);
}

void ExpectMatchesOracle(const std::vector<WordList>& corpus, int max_merges,
                         int64_t min_pair) {
  const Vocabulary v = LearnBpe(ToDataset(corpus), max_merges, min_pair);
  const oracle::NaiveBpe o = oracle::BruteForceBpe(corpus, max_merges, min_pair);
  ASSERT_EQ(v.merges().size(), o.merges.size());
  for (size_t r = 0; r < o.merges.size(); ++r) {
    const MergeRule& m = v.merges()[r];
    EXPECT_EQ(v.token(m.left).surface, o.merges[r].left) << "rank " << r;
    EXPECT_EQ(v.token(m.right).surface, o.merges[r].right) << "rank " << r;
    EXPECT_EQ(m.pair_count, o.merges[r].count) << "rank " << r;
  }
  ASSERT_EQ(v.size(), 3 + o.tokens.size());
  for (size_t i = 0; i < o.tokens.size(); ++i) {
    EXPECT_EQ(v.token(static_cast<TokenId>(3 + i)).surface, o.tokens[i].first);
    EXPECT_EQ(v.token(static_cast<TokenId>(3 + i)).count, o.tokens[i].second);
  }
}

TEST(LearnBpeTest, SingleMergeExample) {
  const Vocabulary v = LearnBpe(Corpus({"a b c", "a b d", "a b e"}), 10, 2);
  ASSERT_EQ(v.merges().size(), 1u);
  const MergeRule& m = v.merges()[0];
  EXPECT_EQ(v.token(m.merged).surface, "a\xE2\x90\x9F" "b");
  EXPECT_EQ(m.pair_count, 3);
  EXPECT_EQ(v.token(m.merged).count, 3);
}

TEST(LearnBpeTest, ZeroMergesAndSingleWords) {
  EXPECT_TRUE(LearnBpe(Corpus({"a b", "a b"}), 0, 0).merges().empty());
  EXPECT_TRUE(LearnBpe(Corpus({"a", "b", "a"}), 10, 0).merges().empty());
}

TEST(LearnBpeTest, TieBreakIsLexicographic) {
  const Vocabulary v = LearnBpe(Corpus({"y z", "b c"}), 1, 0);
  ASSERT_EQ(v.merges().size(), 1u);
  EXPECT_EQ(v.token(v.merges()[0].left).surface, "b");
}

TEST(LearnBpeTest, NeverCrossesUtterances) {
  const Vocabulary v = LearnBpe(Corpus({"a", "b", "a", "b"}), 5, 0);
  EXPECT_TRUE(v.merges().empty());
}

TEST(LearnBpeTest, OverlappingPairsCountedButAppliedLeftToRight) {
  // "a a a" holds two overlapping (a,a) pairs; merging yields [a_a, a].
  ExpectMatchesOracle({{"a", "a", "a"}, {"a", "a", "a", "a"}}, 5, 0);
}

TEST(LearnBpeTest, IdLayout) {
  std::vector<Utterance> utts = {{"1", {"x", "y"}, {}, "go"}, {"2", {"y"}, {}, "stop"}};
  const Vocabulary v = LearnBpe(Dataset(utts), 5, 0);
  EXPECT_EQ(v.token(Vocabulary::kPad).surface, "[PAD]");
  EXPECT_EQ(v.token(Vocabulary::kMask).surface, "[MASK]");
  EXPECT_EQ(v.token(Vocabulary::kUnk).surface, "[UNK]");
  EXPECT_EQ(v.IntentToken("go"), 3);
  EXPECT_EQ(v.IntentToken("stop"), 4);
  EXPECT_EQ(v.IntentLabels(), (std::vector<std::string>{"go", "stop"}));
  EXPECT_EQ(v.token(5).surface, "y");  // count 2 before count 1
  EXPECT_EQ(v.token(6).surface, "x");
}

TEST(LearnBpeTest, MatchesBruteForceOracle) {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const auto corpus = RandomCorpus(rng, 50, 8, 2 + UniformIndex(rng, 5));
    const int max_merges = static_cast<int>(UniformIndex(rng, 30));
    const int64_t min_pair = static_cast<int64_t>(UniformIndex(rng, 3));
    SCOPED_TRACE("trial " + std::to_string(trial));
    ExpectMatchesOracle(corpus, max_merges, min_pair);
  }
}

TEST(LearnBpeTest, DeterministicSerialization) {
  const Dataset d = SynthDataset(5, 20, DefaultInterchangeableSets(), 3).dataset;
  EXPECT_EQ(LearnBpe(d, 40, 1).Serialize(), LearnBpe(d, 40, 1).Serialize());
}

TEST(EncodeTest, RankOrderExample) {
  const Vocabulary v = LearnBpe(Corpus({"how do i", "how do", "make"}), 10, 0);
  ASSERT_GE(v.merges().size(), 2u);
  const std::vector<TokenId> ids = v.Encode({"how", "do", "i", "make"});
  ASSERT_EQ(ids.size(), 2u);
  EXPECT_EQ(v.token(ids[0]).surface, "how\xE2\x90\x9F" "do\xE2\x90\x9F" "i");
  EXPECT_EQ(v.token(ids[1]).surface, "make");
  EXPECT_EQ(v.Decode(ids), (WordList{"how", "do", "i", "make"}));
}

TEST(EncodeTest, EmptyAndUnknown) {
  const Vocabulary v = LearnBpe(Corpus({"a b"}), 10, 0);
  EXPECT_TRUE(v.Encode({}).empty());
  EXPECT_TRUE(v.Decode({}).empty());
  const auto ids = v.Encode({"zzz", "a"});
  EXPECT_EQ(ids[0], Vocabulary::kUnk);
}

TEST(EncodeTest, SpansCoverWords) {
  const Vocabulary v = LearnBpe(Corpus({"how do i make", "how do i cook"}), 10, 1);
  const Encoding e = v.EncodeWithSpans({"how", "do", "i", "bake", "it"});
  ASSERT_EQ(e.ids.size(), e.spans.size());
  size_t next = 0;
  for (size_t t = 0; t < e.ids.size(); ++t) {
    EXPECT_EQ(e.spans[t].first, next);
    next = e.spans[t].second;
  }
  EXPECT_EQ(next, 5u);
}

TEST(EncodeTest, RoundTripAndLengthProperty) {
  const Dataset d = SynthDataset(5, 40, DefaultInterchangeableSets(), 8).dataset;
  const Vocabulary v = LearnBpe(d, 200, 1);
  for (const Utterance& u : d.utterances()) {
    const auto ids = v.Encode(u.words);
    EXPECT_LE(ids.size(), u.words.size());
    EXPECT_EQ(v.Decode(ids), u.words);
  }
}

TEST(DecodeTest, UnknownIdIsMismatch) {
  const Vocabulary v = LearnBpe(Corpus({"a b"}), 10, 0);
  EXPECT_EQ(KindOf([&] { v.Decode({static_cast<TokenId>(v.size())}); }), ErrorKind::kMismatch);
  EXPECT_EQ(KindOf([&] { v.Decode({-1}); }), ErrorKind::kMismatch);
  EXPECT_EQ(v.Decode({Vocabulary::kMask}), WordList{"[MASK]"});
}

TEST(PruneTest, StrictPairThreshold) {
  std::vector<std::string> texts(100, "a b");
  const Vocabulary v = LearnBpe(Corpus(texts), 10, 0);
  ASSERT_EQ(v.merges().size(), 1u);
  EXPECT_FALSE(Prune(v, 100, 1).Find("a\xE2\x90\x9F" "b").has_value());
  EXPECT_TRUE(Prune(v, 99, 1).Find("a\xE2\x90\x9F" "b").has_value());
}

TEST(PruneTest, LowThresholdsAreIdentity) {
  const Vocabulary v =
      LearnBpe(SynthDataset(5, 15, DefaultInterchangeableSets(), 2).dataset, 50, 0);
  EXPECT_EQ(Prune(v, 0, 1), v);
}

TEST(PruneTest, DependencyClosure) {
  std::vector<Token> tokens = Specials();
  tokens.push_back(Content({"a"}, 300));
  tokens.push_back(Content({"b"}, 300));
  tokens.push_back(Content({"c"}, 300));
  tokens.push_back(Content({"a", "b"}, 100));
  tokens.push_back(Content({"a", "b", "c"}, 150));
  tokens.push_back(Content({"b", "c"}, 200));
  const Vocabulary v(tokens, {{3, 4, 6, 0, 100}, {6, 5, 7, 1, 150}, {4, 5, 8, 2, 200}});
  const Vocabulary p = Prune(v, 100, 2);
  EXPECT_FALSE(p.Find("a\xE2\x90\x9F" "b").has_value());
  EXPECT_FALSE(p.Find("a\xE2\x90\x9F" "b\xE2\x90\x9F" "c").has_value());
  ASSERT_TRUE(p.Find("b\xE2\x90\x9F" "c").has_value());
  ASSERT_EQ(p.merges().size(), 1u);
  EXPECT_EQ(p.merges()[0].rank, 0);
  EXPECT_EQ(p.size(), 7u);
}

TEST(PruneTest, RareUnigramsBecomeUnk) {
  const Vocabulary v = LearnBpe(Corpus({"a b", "a c"}), 0, 0);
  const Vocabulary p = Prune(v, 100, 2);
  EXPECT_TRUE(p.Find("a").has_value());
  EXPECT_FALSE(p.Find("b").has_value());
  EXPECT_EQ(p.Encode({"a", "b"})[1], Vocabulary::kUnk);
}

TEST(PruneTest, EncodedIdsRespectThresholds) {
  const Dataset d = SynthDataset(5, 60, DefaultInterchangeableSets(), 5).dataset;
  const Vocabulary p = Prune(LearnBpe(d, 300, 1), 5, 2);
  for (const Utterance& u : d.utterances()) {
    for (TokenId id : p.Encode(u.words)) {
      const Token& t = p.token(id);
      if (t.special) continue;
      if (t.n() >= 2) {
        EXPECT_GT(t.count, 5);
      } else {
        EXPECT_GE(t.count, 2);
      }
    }
  }
}

TEST(SerializationTest, RoundTrip) {
  std::vector<Utterance> utts = {{"1", {"turn", "on", "it"}, {}, "on"},
                                 {"2", {"turn", "on", "that"}, {}, "off"}};
  const Vocabulary v = LearnBpe(Dataset(utts), 10, 0);
  const std::string text = v.Serialize();
  EXPECT_EQ(text.rfind("wordbpe-v1 241f\n", 0), 0u);
  const Vocabulary back = Vocabulary::Parse(text);
  EXPECT_EQ(back, v);
  EXPECT_EQ(back.Fingerprint(), v.Fingerprint());
  EXPECT_EQ(back.IntentToken("off"), v.IntentToken("off"));
  const std::string path = ::testing::TempDir() + "/vocab_test_vocab.txt";
  v.Save(path);
  EXPECT_EQ(Vocabulary::Load(path), v);
}

TEST(SerializationTest, MalformedFiles) {
  EXPECT_EQ(KindOf([] { Vocabulary::Parse("bogus\n"); }), ErrorKind::kData);
  EXPECT_EQ(KindOf([] { Vocabulary::Parse("wordbpe-v1 241f\n0\t0\t[PAD]\n"); }),
            ErrorKind::kData);
  EXPECT_EQ(KindOf([] { Vocabulary::Load("/nonexistent/vocab.txt"); }), ErrorKind::kData);
}

TEST(VocabularyTest, RejectsUnproducibleToken) {
  std::vector<Token> tokens = Specials();
  tokens.push_back(Content({"a"}, 1));
  tokens.push_back(Content({"b"}, 1));
  tokens.push_back(Content({"a", "b"}, 1));
  EXPECT_EQ(KindOf([&] { Vocabulary(tokens, {}); }), ErrorKind::kData);
  EXPECT_EQ(KindOf([&] { Vocabulary(tokens, {{3, 4, 5, 1, 1}}); }), ErrorKind::kData);
  EXPECT_NO_THROW(Vocabulary(tokens, {{3, 4, 5, 0, 1}}));
}

}  // namespace
}  // namespace iraug
