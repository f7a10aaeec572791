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

#include "iraug/baselines.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "fixtures.h"

namespace iraug {
namespace {

using fixtures::KindOf;

Utterance Utt(const std::string& text, const std::string& id = "u1") {
  return {id, Normalize(text), std::string("d"), std::string("i")};
}

SynonymTable Synonyms() {
  std::istringstream in("light\tlamp,bulb\nturn\tswitch,turn\nkitchen\tcooking area\n");
  return ParseSynonyms(in);
}

TEST(SynonymTest, ParsesAndDropsSelfSynonyms) {
  const SynonymTable t = Synonyms();
  EXPECT_EQ(t.at("light"), (std::vector<std::string>{"lamp", "bulb"}));
  EXPECT_EQ(t.at("turn"), std::vector<std::string>{"switch"});
}

TEST(EdaTest, OpsParsing) {
  EXPECT_EQ(ParseEdaOps("rs"), kRandomSwap);
  EXPECT_EQ(ParseEdaOps("sr,rd"), kSynonymReplace | kRandomDelete);
  EXPECT_EQ(KindOf([] { ParseEdaOps("sr,xx"); }), ErrorKind::kUsage);
}

TEST(EdaTest, RandomSwapPreservesMultiset) {
  Rng rng(1);
  const std::vector<std::string> pool = {"a", "b", "c", "turn", "on", "the", "light"};
  EdaOptions opts;
  opts.ops = kRandomSwap;
  opts.alpha = 0.3;
  for (int trial = 0; trial < 300; ++trial) {
    Utterance u{"x", {}, {}, {}};
    const size_t len = 1 + UniformIndex(rng, 9);
    for (size_t i = 0; i < len; ++i) u.words.push_back(pool[UniformIndex(rng, pool.size())]);
    const Utterance out = Eda(u, opts, {}, DefaultStopwords(), trial);
    WordList a = u.words, b = out.words;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(EdaTest, TrivialCases) {
  EdaOptions swap;
  swap.ops = kRandomSwap;
  EXPECT_EQ(Eda(Utt("hello"), swap, {}, {}, 3).words, Normalize("hello"));
  EdaOptions del;
  del.ops = kRandomDelete;
  del.alpha = 0.0;
  const Utterance u = Utt("turn on the kitchen light");
  EXPECT_EQ(Eda(u, del, {}, {}, 3).words, u.words);
}

TEST(EdaTest, DeleteNeverEmpties) {
  EdaOptions del;
  del.ops = kRandomDelete;
  del.alpha = 1.0;
  const Utterance u = Utt("turn on the kitchen light");
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const Utterance out = Eda(u, del, {}, {}, seed);
    ASSERT_EQ(out.words.size(), 1u);
    EXPECT_NE(std::find(u.words.begin(), u.words.end(), out.words[0]), u.words.end());
  }
}

TEST(EdaTest, SynonymReplaceAndInsert) {
  const Utterance u = Utt("turn on the light");
  EdaOptions sr;
  sr.ops = kSynonymReplace;
  sr.alpha = 0.25;
  const Utterance r = Eda(u, sr, Synonyms(), DefaultStopwords(), 5);
  ASSERT_EQ(r.words.size(), 4u);
  EXPECT_EQ(r.words[1], "on");
  EXPECT_EQ(r.words[2], "the");
  EXPECT_TRUE(r.words[0] == "switch" || r.words[3] == "lamp" || r.words[3] == "bulb");
  EdaOptions ri;
  ri.ops = kRandomInsert;
  ri.alpha = 0.25;
  EXPECT_EQ(Eda(u, ri, Synonyms(), DefaultStopwords(), 5).words.size(), 5u);
}

TEST(EdaTest, ErrorsAndDeterminism) {
  const Utterance u = Utt("turn on the light");
  EdaOptions sr;
  sr.ops = kSynonymReplace;
  EXPECT_EQ(KindOf([&] { Eda(u, sr, {}, {}, 1); }), ErrorKind::kUsage);
  EdaOptions bad;
  bad.alpha = 1.5;
  EXPECT_EQ(KindOf([&] { Eda(u, bad, Synonyms(), {}, 1); }), ErrorKind::kUsage);
  EdaOptions all;
  all.alpha = 0.5;
  EXPECT_EQ(Eda(u, all, Synonyms(), {}, 9), Eda(u, all, Synonyms(), {}, 9));
  EXPECT_EQ(Eda(u, all, Synonyms(), {}, 9).intent, u.intent);
}

constexpr char kPpdbLine[] =
    "[NP] ||| there is a lot of ||| there are plenty of ||| PPDB2.0Score=3.5 "
    "PPDB2.0Simple=1.2 ||| 0-0 ||| Equivalence\n";

TEST(PhraseTableTest, Parsing) {
  std::istringstream in(kPpdbLine);
  const PhraseTable t = ParsePhraseTable(in);
  ASSERT_EQ(t.size(), 1u);
  const auto& rule = t.rules().at(Normalize("there is a lot of"));
  ASSERT_EQ(rule.size(), 1u);
  EXPECT_EQ(rule[0].words, Normalize("there are plenty of"));
  EXPECT_DOUBLE_EQ(rule[0].score, 3.5);
  EXPECT_EQ(t.longest(), 5u);

  std::istringstream empty("");
  EXPECT_EQ(ParsePhraseTable(empty).size(), 0u);
  std::istringstream bad("bad line\n");
  const PhraseTable b = ParsePhraseTable(bad);
  EXPECT_EQ(b.size(), 0u);
  EXPECT_EQ(b.skipped(), 1u);
  std::istringstream identity("[X] ||| snow ||| Snow ||| x\n");
  EXPECT_EQ(ParsePhraseTable(identity).size(), 0u);
  EXPECT_EQ(KindOf([] { LoadPhraseTable("/nonexistent/table"); }), ErrorKind::kData);
}

TEST(PhraseSubstituteTest, PlentyOfSnowExample) {
  std::istringstream in(kPpdbLine);
  const PhraseTable t = ParsePhraseTable(in);
  PhraseMatch m;
  const auto out = PhraseSubstitute(Utt("there is a lot of snow"), t, 7, &m);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(JoinWords(out->words), "there are plenty of snow");
  EXPECT_EQ(m.begin, 0u);
  EXPECT_EQ(m.length, 5u);
  EXPECT_FALSE(PhraseSubstitute(Utt("it is snowing"), t, 7).has_value());
}

TEST(PhraseSubstituteTest, LongestFirstAndDeterministic) {
  PhraseTable t;
  t.Add(Normalize("a lot"), {Normalize("many"), 1.0});
  t.Add(Normalize("a lot of"), {Normalize("plenty of"), 1.0});
  t.Add(Normalize("snow"), {Normalize("snowfall"), 1.0});
  const WordList w = Normalize("a lot of snow");
  const auto matches = FindPhraseMatches(w, t);
  ASSERT_EQ(matches.size(), 3u);
  EXPECT_EQ(matches[0].length, 3u);
  EXPECT_EQ(matches[1].length, 2u);
  EXPECT_EQ(matches[2].begin, 3u);
  std::set<std::string> seen;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    const auto a = PhraseSubstitute(Utt("a lot of snow"), t, seed);
    EXPECT_EQ(a, PhraseSubstitute(Utt("a lot of snow"), t, seed));
    seen.insert(JoinWords(a->words));
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(AugmentTest, SourcesAndIds) {
  std::istringstream in(kPpdbLine);
  const PhraseTable t = ParsePhraseTable(in);
  const Dataset d({Utt("there is a lot of snow", "a"), Utt("sunny", "b")});
  const auto pairs = AugmentPhrase(d, t, 1);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].source, "ppdb");
  EXPECT_EQ(pairs[0].original.id, "a");
  EXPECT_EQ(pairs[0].rephrase.id, AugmentedId("a", "ppdb", 0));
  EXPECT_EQ(pairs[0].rephrase.intent, std::string("i"));
  EdaOptions swap;
  swap.ops = kRandomSwap;
  for (const AugmentedPair& p : AugmentEda(d, swap, {}, {}, 1)) {
    EXPECT_EQ(p.source, "eda");
    EXPECT_NE(p.rephrase.words, p.original.words);
  }
}

}  // namespace
}  // namespace iraug
