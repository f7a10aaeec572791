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

#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "iraug/baselines.h"
#include "iraug/checkpoint.h"
#include "iraug/classifier.h"
#include "iraug/corpus.h"
#include "iraug/error.h"
#include "iraug/finetune.h"
#include "iraug/metrics.h"
#include "iraug/mlm.h"
#include "iraug/random.h"
#include "iraug/rephraser.h"
#include "iraug/vocab.h"

namespace iraug {
namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Appends "--key=value" for every config line whose key was not given on
// the command line.
std::vector<std::string> ApplyConfigFile(std::vector<std::string> args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) UsageError("cannot open config file '" + path + "'");
  std::string line;
  size_t line_number = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++line_number;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      UsageError("config line " + std::to_string(line_number) + ": expected key=value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty() || key[0] == '-' || key == "config") {
      UsageError("config line " + std::to_string(line_number) + ": bad key '" + key + "'");
    }
    const std::string flag = "--" + key;
    bool explicit_flag = false;
    for (const std::string& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) explicit_flag = true;
    }
    if (!explicit_flag) extra.push_back(flag + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

void AddModelFlags(CLI::App* app, ModelConfig& c) {
  app->add_option("--layers", c.n_layers, "Encoder layers");
  app->add_option("--heads", c.n_heads, "Attention heads");
  app->add_option("--d-model", c.d_model, "Hidden size");
  app->add_option("--d-ff", c.d_ff, "Feed-forward size");
  app->add_option("--max-len", c.max_len, "Maximum sequence length in tokens");
  app->add_option("--dropout", c.dropout, "Dropout rate");
  app->add_option("--init-scale", c.init_scale, "Initial weight standard deviation");
}

struct RephraseFlags {
  int k = 10;
  std::string positions = "multiword";
  double min_prob = 0.01;
  std::string policy = "greedy";
  double temperature = 1.0;

  void Add(CLI::App* app) {
    app->add_option("--k", k, "Candidates kept per position");
    app->add_option("--positions", positions, "Positions to rephrase")
        ->check(CLI::IsMember({"all", "multiword"}));
    app->add_option("--min-prob", min_prob, "Minimum replacement probability");
    app->add_option("--policy", policy, "Decoding policy")
        ->check(CLI::IsMember({"greedy", "sample"}));
    app->add_option("--temperature", temperature, "Sampling temperature");
  }

  RephraseOptions Options() const {
    RephraseOptions o;
    o.k = k;
    o.positions = positions == "all" ? PositionMode::kAll : PositionMode::kMultiwordOnly;
    o.min_prob = min_prob;
    o.policy = policy == "sample" ? DecodePolicy::Sample(temperature)
                                  : DecodePolicy::Greedy();
    return o;
  }
};

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) DataError("cannot write '" + path + "'");
  out << text;
  if (!out) DataError("write failed for '" + path + "'");
}

std::string Hex(uint64_t h) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

}  // namespace

int Run(const std::vector<std::string>& raw_args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Interchangeable-rephrase data augmentation toolkit", "iraug"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  uint64_t seed = 0;
  std::string config_path;
  app.add_option("--seed", seed, "Global random seed");
  app.add_option("--config", config_path, "File of key=value defaults; flags win");

  std::function<void()> action;
  CLI::App* selected = nullptr;
  auto command = [&](CLI::App* parent, const std::string& name,
                     const std::string& desc) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->fallthrough();
    return sub;
  };

  // build-vocab
  std::vector<std::string> bv_inputs;
  std::string bv_out;
  int bv_max_merges = 500;
  int64_t bv_min_pair = 3;
  bool bv_prune = false;
  int64_t bv_prune_pair = 100, bv_prune_unigram = 2;
  {
    CLI::App* sub = command(&app, "build-vocab", "Learn a word-level BPE vocabulary");
    sub->add_option("--input", bv_inputs, "Corpus JSONL files")->required();
    sub->add_option("--out", bv_out, "Vocabulary file")->required();
    sub->add_option("--max-merges", bv_max_merges, "Maximum merge rules");
    sub->add_option("--min-pair-count", bv_min_pair, "Stop when the best pair count is at most this");
    sub->add_flag("--prune", bv_prune, "Prune rare tokens after learning");
    sub->add_option("--prune-min-pair", bv_prune_pair, "Drop multi-word tokens with count at most this");
    sub->add_option("--prune-min-unigram", bv_prune_unigram, "Drop words with count below this");
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        const Dataset corpus = LoadDatasets(bv_inputs);
        Vocabulary vocab = LearnBpe(corpus, bv_max_merges, bv_min_pair);
        if (bv_prune) vocab = Prune(vocab, bv_prune_pair, bv_prune_unigram);
        vocab.Save(bv_out);
        err << "vocabulary: " << vocab.size() << " tokens, "
            << vocab.merges().size() << " merges, fingerprint "
            << vocab.Fingerprint() << "\n";
      };
    });
  }

  // train
  std::vector<std::string> tr_inputs;
  std::string tr_vocab, tr_out;
  ModelConfig tr_config;
  MlmTrainOptions tr_opts;
  {
    CLI::App* sub = command(&app, "train", "Pre-train the masked language model");
    sub->add_option("--input", tr_inputs, "Corpus JSONL files")->required();
    sub->add_option("--vocab", tr_vocab, "Vocabulary file")->required();
    sub->add_option("--out", tr_out, "Checkpoint path")->required();
    AddModelFlags(sub, tr_config);
    sub->add_option("--epochs", tr_opts.epochs, "Training epochs");
    sub->add_option("--lr", tr_opts.lr, "Peak learning rate");
    sub->add_option("--batch", tr_opts.batch, "Batch size");
    sub->add_flag("--intent-prefixed-copies", tr_opts.intent_prefixed_copies,
                  "Also train on intent-prefixed copies of labeled utterances");
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        const Vocabulary vocab = Vocabulary::Load(tr_vocab);
        const Dataset corpus = LoadDatasets(tr_inputs);
        tr_config.vocab_size = static_cast<int>(vocab.size());
        tr_config.seed = seed;
        tr_opts.seed = seed;
        Model<float> model(tr_config);
        const MlmTrainReport report = MlmTrain(model, corpus, vocab, tr_opts);
        for (size_t e = 0; e < report.epoch_loss.size(); ++e) {
          err << "epoch " << e + 1 << " loss " << report.epoch_loss[e] << "\n";
        }
        SaveModel(model, tr_out);
      };
    });
  }

  // finetune
  std::string ft_model, ft_vocab, ft_out, ft_negative_file;
  std::vector<std::string> ft_inputs;
  FinetuneOptions ft_opts;
  {
    CLI::App* sub = command(&app, "finetune", "Intent-aware fine-tuning of a trained model");
    sub->add_option("--model", ft_model, "Pre-trained checkpoint")->required();
    sub->add_option("--vocab", ft_vocab, "Vocabulary file")->required();
    sub->add_option("--input", ft_inputs, "Intent-labeled JSONL files")->required();
    sub->add_option("--out", ft_out, "Fine-tuned checkpoint path")->required();
    sub->add_option("--negatives", ft_opts.negatives_per_example, "Negative utterances per example");
    sub->add_option("--epochs", ft_opts.epochs, "Training epochs");
    sub->add_option("--lr", ft_opts.lr, "Peak learning rate");
    sub->add_option("--batch", ft_opts.batch, "Batch size");
    sub->add_option("--negative-intents", ft_negative_file,
                    "Curated negatives: lines 'intent<TAB>neg1,neg2'");
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        const Vocabulary vocab = Vocabulary::Load(ft_vocab);
        Model<float> model = LoadModel(ft_model, &vocab);
        const Dataset corpus = LoadDatasets(ft_inputs);
        ft_opts.seed = seed;
        if (!ft_negative_file.empty()) {
          ft_opts.negative_intents = LoadNegativeIntents(ft_negative_file);
        }
        const FinetuneReport report = Finetune(model, corpus, vocab, ft_opts);
        for (size_t e = 0; e < report.epoch_loss.size(); ++e) {
          err << "epoch " << e + 1 << " loss " << report.epoch_loss[e] << "\n";
        }
        SaveModel(model, ft_out);
      };
    });
  }

  // rephrase
  std::string rp_model, rp_vocab, rp_text, rp_intent;
  RephraseFlags rp_flags;
  {
    CLI::App* sub = command(&app, "rephrase", "Rephrase one utterance to standard output");
    sub->add_option("--model", rp_model, "Checkpoint")->required();
    sub->add_option("--vocab", rp_vocab, "Vocabulary file")->required();
    sub->add_option("--text", rp_text, "Utterance text")->required();
    sub->add_option("--intent", rp_intent, "Intent label of the utterance");
    rp_flags.Add(sub);
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        const Vocabulary vocab = Vocabulary::Load(rp_vocab);
        const Model<float> model = LoadModel(rp_model, &vocab);
        Utterance u;
        u.id = "cli";
        u.words = Normalize(rp_text);
        if (u.words.empty()) UsageError("rephrase: text has no words");
        if (!rp_intent.empty()) u.intent = rp_intent;
        const auto r = RephraseOne(model, vocab, u, rp_flags.Options(), seed);
        out << (r ? JoinWords(r->words) : std::string("NO_CANDIDATE")) << "\n";
      };
    });
  }

  // augment
  std::string au_model, au_vocab, au_input, au_out;
  int au_per_input = 1;
  RephraseFlags au_flags;
  {
    CLI::App* sub = command(&app, "augment", "Rephrase every utterance of a dataset");
    sub->add_option("--model", au_model, "Checkpoint")->required();
    sub->add_option("--vocab", au_vocab, "Vocabulary file")->required();
    sub->add_option("--input", au_input, "Labeled JSONL")->required();
    sub->add_option("--out", au_out, "Augmented JSONL")->required();
    sub->add_option("--per-input", au_per_input, "Rephrases per utterance");
    au_flags.Add(sub);
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        const Vocabulary vocab = Vocabulary::Load(au_vocab);
        const Model<float> model = LoadModel(au_model, &vocab);
        const Dataset data = LoadDataset(au_input);
        const auto pairs = Augment(data, model, vocab, au_per_input, au_flags.Options(), seed);
        SaveAugmented(pairs, au_out);
        err << "augment: " << pairs.size() << " rephrases from " << data.size()
            << " utterances\n";
      };
    });
  }

  // eda
  std::string eda_input, eda_out, eda_ops = "sr,ri,rs,rd", eda_synonyms, eda_stopwords;
  double eda_alpha = 0.1;
  {
    CLI::App* sub = command(&app, "eda", "Easy data augmentation baseline");
    sub->add_option("--input", eda_input, "Labeled JSONL")->required();
    sub->add_option("--out", eda_out, "Augmented JSONL")->required();
    sub->add_option("--ops", eda_ops, "Comma list of sr, ri, rs, rd");
    sub->add_option("--alpha", eda_alpha, "Edit ratio");
    sub->add_option("--synonyms", eda_synonyms, "Synonym file 'word<TAB>syn1,syn2'");
    sub->add_option("--stopwords", eda_stopwords, "Stopword file; built-in list if unset");
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        EdaOptions o;
        o.ops = ParseEdaOps(eda_ops);
        o.alpha = eda_alpha;
        const SynonymTable syn = eda_synonyms.empty() ? SynonymTable{} : LoadSynonyms(eda_synonyms);
        const auto stop = eda_stopwords.empty() ? DefaultStopwords() : LoadStopwords(eda_stopwords);
        const Dataset data = LoadDataset(eda_input);
        const auto pairs = AugmentEda(data, o, syn, stop, seed);
        SaveAugmented(pairs, eda_out);
        err << "eda: " << pairs.size() << " changed utterances of " << data.size() << "\n";
      };
    });
  }

  // phrase-sub
  std::string ps_input, ps_out, ps_table;
  {
    CLI::App* sub = command(&app, "phrase-sub", "Phrase-table substitution baseline");
    sub->add_option("--input", ps_input, "Labeled JSONL")->required();
    sub->add_option("--out", ps_out, "Augmented JSONL")->required();
    sub->add_option("--table", ps_table, "PPDB-format phrase table")->required();
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        const PhraseTable table = LoadPhraseTable(ps_table);
        err << "phrase table: " << table.size() << " rules, " << table.skipped()
            << " lines skipped\n";
        const Dataset data = LoadDataset(ps_input);
        const auto pairs = AugmentPhrase(data, table, seed);
        SaveAugmented(pairs, ps_out);
        err << "phrase-sub: " << pairs.size() << " rephrases of " << data.size() << "\n";
      };
    });
  }

  // metrics
  std::string mt_orig, mt_aug, mt_emb, mt_out;
  {
    CLI::App* sub = command(&app, "metrics", "Automatic metrics for rephrase pairs");
    sub->add_option("--orig", mt_orig, "Original JSONL")->required();
    sub->add_option("--aug", mt_aug, "Augmented JSONL")->required();
    sub->add_option("--embeddings", mt_emb, "Word vectors 'word v1 .. vd'");
    sub->add_option("--out", mt_out, "Report path; standard output if unset");
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        const Dataset orig = LoadDataset(mt_orig);
        const auto pairs = LoadAugmented(mt_aug, orig);
        std::unique_ptr<EmbeddingTable> emb;
        if (!mt_emb.empty()) emb = std::make_unique<EmbeddingTable>(LoadEmbeddings(mt_emb));
        const std::string json = Report(pairs, emb.get()).ToJson().dump(2) + "\n";
        if (mt_out.empty()) {
          out << json;
        } else {
          WriteText(mt_out, json);
        }
      };
    });
  }

  // classify
  ClassifierConfig cl_config;
  std::string cl_label = "intent";
  std::string ct_train, ct_heldout, ct_out, ct_report;
  std::string ce_model, ce_test, ce_out;
  std::string cc_train, cc_heldout, cc_test, cc_out;
  std::vector<std::string> cc_augs;
  bool cc_duplicate = false;
  int cc_seeds = 5;
  {
    CLI::App* classify = command(&app, "classify", "Intent / domain classifier harness");
    classify->require_subcommand(1);
    auto add_training = [&](CLI::App* sub) {
      sub->add_option("--label", cl_label, "Label kind")
          ->check(CLI::IsMember({"intent", "domain"}));
      AddModelFlags(sub, cl_config.encoder);
      sub->add_option("--epochs", cl_config.epochs, "Training epochs");
      sub->add_option("--lr", cl_config.lr, "Peak learning rate");
      sub->add_option("--batch", cl_config.batch, "Batch size");
    };

    CLI::App* train = command(classify, "train", "Train one classifier");
    train->add_option("--train", ct_train, "Training JSONL")->required();
    train->add_option("--heldout", ct_heldout, "Heldout JSONL for epoch selection")->required();
    train->add_option("--out", ct_out, "Classifier checkpoint")->required();
    train->add_option("--report", ct_report, "Training report JSON; standard output if unset");
    add_training(train);
    train->callback([&, train] {
      selected = train;
      action = [&] {
        cl_config.seed = seed;
        TrainReport report;
        const Classifier c = TrainClassifier(LoadDataset(ct_train), LoadDataset(ct_heldout),
                                             ParseLabelKind(cl_label), cl_config, &report);
        SaveClassifier(c, ct_out);
        const std::string json = report.ToJson().dump(2) + "\n";
        if (ct_report.empty()) {
          out << json;
        } else {
          WriteText(ct_report, json);
        }
      };
    });

    CLI::App* eval = command(classify, "eval", "Evaluate a classifier");
    eval->add_option("--model", ce_model, "Classifier checkpoint")->required();
    eval->add_option("--test", ce_test, "Test JSONL")->required();
    eval->add_option("--out", ce_out, "Result JSON; standard output if unset");
    eval->callback([&, eval] {
      selected = eval;
      action = [&] {
        const Classifier c = LoadClassifier(ce_model);
        const std::string json = Evaluate(c, LoadDataset(ce_test)).ToJson(c.labels).dump(2) + "\n";
        if (ce_out.empty()) {
          out << json;
        } else {
          WriteText(ce_out, json);
        }
      };
    });

    CLI::App* compare = command(classify, "compare", "Compare augmenters over several seeds");
    compare->add_option("--train", cc_train, "Base training JSONL")->required();
    compare->add_option("--heldout", cc_heldout, "Heldout JSONL")->required();
    compare->add_option("--test", cc_test, "Test JSONL")->required();
    compare->add_option("--aug", cc_augs, "Augmenter rows as name=augmented.jsonl");
    compare->add_flag("--duplicate", cc_duplicate, "Add the duplication-only control");
    compare->add_option("--seeds", cc_seeds, "Number of seeds, starting at --seed")
        ->check(CLI::PositiveNumber);
    compare->add_option("--out", cc_out, "Comparison JSON");
    add_training(compare);
    compare->callback([&, compare] {
      selected = compare;
      action = [&] {
        const Dataset train = LoadDataset(cc_train);
        std::vector<AugmenterRows> augs;
        for (const std::string& spec : cc_augs) {
          const size_t eq = spec.find('=');
          if (eq == std::string::npos || eq == 0) {
            UsageError("--aug expects name=path, got '" + spec + "'");
          }
          AugmenterRows rows{spec.substr(0, eq), {}};
          for (AugmentedPair& p : LoadAugmented(spec.substr(eq + 1), train)) {
            rows.rows.push_back(std::move(p.rephrase));
          }
          augs.push_back(std::move(rows));
        }
        if (cc_duplicate) {
          AugmenterRows dup{"duplicate", {}};
          for (Utterance u : train.utterances()) {
            u.id = AugmentedId(u.id, "dup", 0);
            dup.rows.push_back(std::move(u));
          }
          augs.push_back(std::move(dup));
        }
        std::vector<uint64_t> seeds;
        for (int s = 0; s < cc_seeds; ++s) seeds.push_back(seed + static_cast<uint64_t>(s));
        const Comparison cmp = Compare(train, augs, LoadDataset(cc_heldout), LoadDataset(cc_test),
                                       ParseLabelKind(cl_label), cl_config, seeds);
        out << cmp.ToText();
        if (!cc_out.empty()) WriteText(cc_out, cmp.ToJson().dump(2) + "\n");
      };
    });
  }

  // split
  std::string sp_input, sp_train, sp_heldout;
  double sp_fraction = 0.1;
  {
    CLI::App* sub = command(&app, "split", "Stratified train / heldout split");
    sub->add_option("--input", sp_input, "Labeled JSONL")->required();
    sub->add_option("--fraction", sp_fraction, "Heldout fraction");
    sub->add_option("--train-out", sp_train, "Train JSONL")->required();
    sub->add_option("--heldout-out", sp_heldout, "Heldout JSONL")->required();
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        const SplitResult r = Split(LoadDataset(sp_input), sp_fraction, seed);
        SaveDataset(r.train, sp_train);
        SaveDataset(r.heldout, sp_heldout);
      };
    });
  }

  // synth
  std::string sy_out, sy_sets;
  int sy_intents = 5, sy_templates = 50;
  SynthOptions sy_opts;
  {
    CLI::App* sub = command(&app, "synth", "Generate a synthetic labeled dataset");
    sub->add_option("--out", sy_out, "Output JSONL")->required();
    sub->add_option("--intents", sy_intents, "Number of intents");
    sub->add_option("--templates", sy_templates, "Utterances per intent");
    sub->add_option("--sets", sy_sets, "Interchangeable sets file; built-in sets if unset");
    sub->add_option("--content-words", sy_opts.content_words, "Intent-specific words per utterance");
    sub->add_option("--content-pool", sy_opts.content_pool, "Distinct content words per intent");
    sub->add_option("--shared-content", sy_opts.shared_content, "Chance a content word is shared");
    sub->add_option("--member-skew", sy_opts.member_skew, "Zipf exponent over set members");
    sub->add_option("--content-seed", sy_opts.content_seed,
                    "Seed for content word pools; --seed when unset");
    sub->callback([&, sub] {
      selected = sub;
      action = [&] {
        std::vector<InterchangeableSet> sets;
        if (sy_sets.empty()) {
          // Built-in sets bound to intents beyond --intents are left out.
          for (InterchangeableSet& s : DefaultInterchangeableSets()) {
            if (!s.intent || *s.intent < sy_intents) sets.push_back(std::move(s));
          }
        } else {
          sets = LoadInterchangeableSets(sy_sets);
        }
        SaveDataset(SynthDataset(sy_intents, sy_templates, sets, seed, sy_opts).dataset, sy_out);
      };
    });
  }

  try {
    const std::vector<std::string> args = ApplyConfigFile(raw_args);
    std::vector<const char*> argv{"iraug"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : static_cast<int>(ErrorKind::kUsage);
    }
    if (!action || !selected) return static_cast<int>(ErrorKind::kUsage);
    const std::string settings = selected->config_to_str(true, false);
    err << "iraug " << kVersion << " command=" << selected->get_name()
        << " seed=" << seed << " config_hash="
        << Hex(Fnv1a(settings + "seed=" + std::to_string(seed))) << "\n";
    action();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::kData);
  }
}

}  // namespace iraug
