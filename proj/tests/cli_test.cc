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

#include "iraug/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace iraug {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kTinyModel = {"--layers", "1", "--heads", "2", "--d-model", "16",
                                             "--d-ff", "32", "--max-len", "12"};

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new std::string(::testing::TempDir() + "/cli_test");
    fs::remove_all(*dir_);
    fs::create_directories(*dir_);
    ASSERT_EQ(Call({"synth", "--out", P("all.jsonl"), "--intents", "3", "--templates", "12"}).code,
              0);
    ASSERT_EQ(Call({"split", "--input", P("all.jsonl"), "--fraction", "0.25", "--train-out",
                    P("train.jsonl"), "--heldout-out", P("heldout.jsonl")})
                  .code,
              0);
    ASSERT_EQ(Call({"build-vocab", "--input", P("train.jsonl"), "--max-merges", "50",
                    "--min-pair-count", "2", "--out", P("vocab.txt")})
                  .code,
              0);
    std::vector<std::string> train = {"train", "--input", P("train.jsonl"), "--vocab",
                                      P("vocab.txt"), "--out", P("m.ckpt"), "--epochs", "3"};
    train.insert(train.end(), kTinyModel.begin(), kTinyModel.end());
    ASSERT_EQ(Call(train).code, 0);
    ASSERT_EQ(Call({"finetune", "--model", P("m.ckpt"), "--vocab", P("vocab.txt"), "--input",
                    P("train.jsonl"), "--out", P("ft.ckpt"), "--epochs", "1"})
                  .code,
              0);
  }
  static void TearDownTestSuite() { delete dir_; }

  static std::string P(const std::string& name) { return *dir_ + "/" + name; }

  static std::string* dir_;
};

std::string* CliTest::dir_ = nullptr;

TEST_F(CliTest, HelpAndVersion) {
  const Result top = Call({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const char* sub : {"build-vocab", "train", "finetune", "rephrase", "augment", "eda",
                          "phrase-sub", "metrics", "classify", "synth", "split"}) {
    EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
  }
  const Result eda = Call({"eda", "--help"});
  EXPECT_EQ(eda.code, 0);
  EXPECT_NE(eda.out.find("--alpha"), std::string::npos);
  EXPECT_NE(eda.out.find("0.1"), std::string::npos);
  EXPECT_EQ(Call({"--version"}).out, std::string(kVersion) + "\n");
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(Call({}).code, 1);
  EXPECT_EQ(Call({"no-such-command"}).code, 1);
  EXPECT_EQ(Call({"eda", "--input", P("train.jsonl")}).code, 1);
  EXPECT_EQ(Call({"eda", "--input", P("train.jsonl"), "--out", P("x"), "--bogus", "1"}).code, 1);
  EXPECT_EQ(Call({"eda", "--input", P("train.jsonl"), "--out", P("x"), "--ops", "zz"}).code, 1);
}

TEST_F(CliTest, DataAndMismatchExitCodes) {
  EXPECT_EQ(Call({"build-vocab", "--input", P("missing.jsonl"), "--out", P("v")}).code, 2);
  std::ofstream(P("bad.jsonl")) << "{\"text\": 3}\n";
  EXPECT_EQ(Call({"build-vocab", "--input", P("bad.jsonl"), "--out", P("v")}).code, 2);
  ASSERT_EQ(Call({"build-vocab", "--input", P("heldout.jsonl"), "--max-merges", "0", "--out",
                  P("other_vocab.txt")})
                .code,
            0);
  EXPECT_EQ(Call({"rephrase", "--model", P("m.ckpt"), "--vocab", P("other_vocab.txt"), "--text",
                  "hello"})
                .code,
            3);
}

TEST_F(CliTest, MetricsWithMismatchedOrigIdExitsTwo) {
  std::ofstream(P("aug_bad.jsonl"))
      << "{\"id\":\"z#x\",\"text\":\"hi there\",\"source\":\"eda\",\"orig_id\":\"nope\"}\n";
  EXPECT_EQ(Call({"metrics", "--orig", P("train.jsonl"), "--aug", P("aug_bad.jsonl")}).code, 2);
}

TEST_F(CliTest, RephrasePrintsOneLine) {
  const Result r = Call({"rephrase", "--model", P("m.ckpt"), "--vocab", P("vocab.txt"), "--text",
                         "how do i make a margherita pizza"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_FALSE(r.out.empty());
  EXPECT_EQ(r.out.find('\n'), r.out.size() - 1);
  const Result none = Call({"rephrase", "--model", P("m.ckpt"), "--vocab", P("vocab.txt"),
                            "--text", "hello", "--min-prob", "1"});
  EXPECT_EQ(none.code, 0);
  EXPECT_EQ(none.out, "NO_CANDIDATE\n");
  EXPECT_NE(r.err.find("iraug " + std::string(kVersion) + " command=rephrase seed=0 config_hash="),
            std::string::npos);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"augment", "--model", P("ft.ckpt"), "--vocab", P("vocab.txt"), "--input",
       P("train.jsonl"), "--out", P("OUT"), "--per-input", "2"},
      {"eda", "--input", P("train.jsonl"), "--out", P("OUT"), "--ops", "rs,rd", "--alpha", "0.3"},
      {"synth", "--out", P("OUT"), "--intents", "2", "--templates", "5"},
      {"split", "--input", P("all.jsonl"), "--train-out", P("OUT"), "--heldout-out",
       P("OUT.h")},
      {"build-vocab", "--input", P("all.jsonl"), "--out", P("OUT"), "--prune"},
      {"train", "--input", P("train.jsonl"), "--vocab", P("vocab.txt"), "--out", P("OUT"),
       "--epochs", "1", "--layers", "1", "--d-model", "16", "--d-ff", "16", "--heads", "2"},
      {"classify", "train", "--train", P("train.jsonl"), "--heldout", P("heldout.jsonl"),
       "--out", P("OUT"), "--epochs", "1", "--layers", "1", "--d-model", "16", "--d-ff", "16",
       "--heads", "2"},
  };
  for (const auto& cmd : commands) {
    const Result a = Call(cmd);
    ASSERT_EQ(a.code, 0) << cmd[0] << ": " << a.err;
    const std::string first = Slurp(P("OUT"));
    const Result b = Call(cmd);
    ASSERT_EQ(b.code, 0);
    EXPECT_FALSE(first.empty()) << cmd[0];
    EXPECT_EQ(first, Slurp(P("OUT"))) << cmd[0];
    EXPECT_EQ(a.out, b.out) << cmd[0];
  }
}

TEST_F(CliTest, ConfigFileValuesLoseToFlags) {
  std::ofstream(P("cfg.txt")) << "# defaults\nintents=2\n\ntemplates=10\n";
  ASSERT_EQ(Call({"--config", P("cfg.txt"), "synth", "--out", P("c1.jsonl")}).code, 0);
  std::ifstream c1(P("c1.jsonl"));
  EXPECT_EQ(std::count(std::istreambuf_iterator<char>(c1), {}, '\n'), 20);
  ASSERT_EQ(
      Call({"--config", P("cfg.txt"), "synth", "--out", P("c2.jsonl"), "--templates", "12"}).code,
      0);
  std::ifstream c2(P("c2.jsonl"));
  EXPECT_EQ(std::count(std::istreambuf_iterator<char>(c2), {}, '\n'), 24);
  std::ofstream(P("cfg_bad.txt")) << "no-such-key=1\n";
  EXPECT_EQ(Call({"--config", P("cfg_bad.txt"), "synth", "--out", P("c3.jsonl")}).code, 1);
}

TEST_F(CliTest, ClassifyEvalAndMetrics) {
  std::vector<std::string> train = {"classify", "train", "--train", P("train.jsonl"),
                                    "--heldout", P("heldout.jsonl"), "--out", P("cls.ckpt"),
                                    "--epochs", "2"};
  train.insert(train.end(), kTinyModel.begin(), kTinyModel.end());
  ASSERT_EQ(Call(train).code, 0);
  const Result eval = Call({"classify", "eval", "--model", P("cls.ckpt"), "--test",
                            P("heldout.jsonl")});
  ASSERT_EQ(eval.code, 0) << eval.err;
  EXPECT_NE(eval.out.find("\"accuracy\""), std::string::npos);
  ASSERT_EQ(Call({"eda", "--input", P("train.jsonl"), "--out", P("eda.jsonl"), "--ops", "rs"})
                .code,
            0);
  const Result m = Call({"metrics", "--orig", P("train.jsonl"), "--aug", P("eda.jsonl")});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_NE(m.out.find("\"jaccard_mean\""), std::string::npos);
}

}  // namespace
}  // namespace iraug
