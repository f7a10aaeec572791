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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.h"

namespace iraug {
namespace {

using fixtures::KindOf;

const WordList kOrig = Normalize("how do i make a margherita pizza");
const WordList kReph = Normalize("show me how to cook a margherita pizza");

EmbeddingTable TwoD() {
  std::istringstream in("a 1 0\nb 0 1\n");
  return ParseEmbeddings(in);
}

TEST(JaccardTest, HandValues) {
  EXPECT_DOUBLE_EQ(Jaccard(kOrig, kOrig), 1.0);
  EXPECT_DOUBLE_EQ(Jaccard({"a"}, {"b"}), 0.0);
  EXPECT_NEAR(Jaccard(kOrig, kReph), 4.0 / 11.0, 1e-12);
  EXPECT_DOUBLE_EQ(Jaccard(kOrig, kReph), Jaccard(kReph, kOrig));
  EXPECT_DOUBLE_EQ(Jaccard({"a", "a", "b"}, {"a", "b"}), 1.0);
  EXPECT_EQ(KindOf([] { Jaccard({}, {"a"}); }), ErrorKind::kUsage);
}

TEST(CopiedNgramTest, HandValues) {
  for (size_t n = 1; n <= 3; ++n) EXPECT_DOUBLE_EQ(*CopiedNgramFraction(kOrig, kOrig, n), 1.0);
  EXPECT_NEAR(*CopiedNgramFraction(kOrig, kReph, 1), 0.5, 1e-12);
  // "a margherita" and "margherita pizza" out of 7 bigrams.
  EXPECT_NEAR(*CopiedNgramFraction(kOrig, kReph, 2), 2.0 / 7.0, 1e-12);
  EXPECT_NEAR(*CopiedNgramFraction(kOrig, kReph, 3), 1.0 / 6.0, 1e-12);
  EXPECT_FALSE(CopiedNgramFraction(kOrig, {"a", "b"}, 3).has_value());
  // Multiplicity on the generated side.
  EXPECT_NEAR(*CopiedNgramFraction({"a"}, {"a", "a", "b"}, 1), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(*CopiedNgramFraction({"x"}, {"a", "b"}, 1), 0.0);
}

TEST(SemanticSimilarityTest, HandValues) {
  const EmbeddingTable e = TwoD();
  EXPECT_NEAR(WordSemanticSimilarity({"a"}, {"a"}, e), 1.0, 1e-12);
  EXPECT_NEAR(WordSemanticSimilarity({"a", "b"}, {"a"}, e), 0.5, 1e-12);
  EXPECT_NEAR(WordSemanticSimilarity({"a"}, {"a", "b"}, e), 0.5, 1e-12);
  EXPECT_NEAR(SentenceSemanticSimilarity({"a", "b"}, {"a", "b"}, e), 1.0, 1e-12);
  EXPECT_NEAR(SentenceSemanticSimilarity({"a"}, {"b"}, e), 0.0, 1e-12);
  EXPECT_NEAR(SentenceSemanticSimilarity({"a", "b"}, {"a"}, e), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(SemanticSimilarityTest, OutOfVocabulary) {
  const EmbeddingTable e = TwoD();
  size_t oov = 0;
  EXPECT_NEAR(WordSemanticSimilarity({"a", "zz"}, {"a"}, e, &oov), 1.0, 1e-12);
  EXPECT_EQ(oov, 1u);
  EXPECT_EQ(KindOf([&] { WordSemanticSimilarity({"zz"}, {"a"}, e); }), ErrorKind::kNumeric);
  EXPECT_EQ(KindOf([&] { SentenceSemanticSimilarity({"a"}, {"qq"}, e); }), ErrorKind::kNumeric);
}

TEST(EmbeddingTableTest, Errors) {
  std::istringstream ragged("a 1 0\nb 0 1 2\n");
  EXPECT_EQ(KindOf([&] { ParseEmbeddings(ragged); }), ErrorKind::kData);
  std::istringstream zero("a 0 0\n");
  EXPECT_EQ(KindOf([&] { ParseEmbeddings(zero); }), ErrorKind::kData);
  std::istringstream junk("a 1 x\n");
  EXPECT_EQ(KindOf([&] { ParseEmbeddings(junk); }), ErrorKind::kData);
  std::istringstream upper("Hello 1 2\n");
  EXPECT_NE(ParseEmbeddings(upper).Find("hello"), nullptr);
}

AugmentedPair Pair(const WordList& o, const WordList& r) {
  AugmentedPair p;
  p.original = {"o", o, {}, {}};
  p.rephrase = {"r", r, {}, {}};
  return p;
}

TEST(ReportTest, SinglePairIdentityAndLinearity) {
  const EmbeddingTable e = TwoD();
  const MetricsReport single = Report({Pair({"a", "b"}, {"a"})}, &e);
  EXPECT_NEAR(single.jaccard_mean, 0.5, 1e-12);
  EXPECT_NEAR(*single.word_semsim_mean, 0.5, 1e-12);
  EXPECT_NEAR(*single.sentence_semsim_mean, 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_FALSE(single.copied_fraction_mean[1].has_value());
  EXPECT_EQ(single.copied_excluded[1], 1u);

  const MetricsReport same =
      Report({Pair(kOrig, kOrig), Pair({"a", "b"}, {"a", "b"}), Pair({"zz"}, {"zz"})}, &e);
  EXPECT_DOUBLE_EQ(same.jaccard_mean, 1.0);
  for (const auto& c : same.copied_fraction_mean) EXPECT_DOUBLE_EQ(*c, 1.0);
  EXPECT_NEAR(*same.sentence_semsim_mean, 1.0, 1e-12);
  EXPECT_EQ(same.semsim_excluded, 1u);

  std::vector<AugmentedPair> pairs = {Pair(kOrig, kReph), Pair({"a", "b"}, {"b"}),
                                      Pair({"a"}, {"a", "b", "a"})};
  const MetricsReport once = Report(pairs, &e);
  const size_t n = pairs.size();
  for (size_t i = 0; i < n; ++i) pairs.push_back(pairs[i]);
  const MetricsReport twice = Report(pairs, &e);
  EXPECT_NEAR(once.jaccard_mean, twice.jaccard_mean, 1e-12);
  EXPECT_NEAR(*once.copied_fraction_mean[0], *twice.copied_fraction_mean[0], 1e-12);
  EXPECT_NEAR(*once.word_semsim_mean, *twice.word_semsim_mean, 1e-12);
  EXPECT_EQ(twice.pair_count, 2 * once.pair_count);

  const auto j = Report({Pair(kOrig, kReph)}, nullptr).ToJson();
  EXPECT_TRUE(j["word_semsim_mean"].is_null());
  EXPECT_EQ(j["substitutions"].size(), 1u);
  EXPECT_EQ(KindOf([] { Report({}, nullptr); }), ErrorKind::kUsage);
}

}  // namespace
}  // namespace iraug
