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

#include "iraug/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "iraug/error.h"
#include "iraug/random.h"
#include "json.hpp"

namespace iraug {
namespace {

using ordered_json = nlohmann::ordered_json;

// Decodes one UTF-8 codepoint starting at s[i] and advances i. Invalid bytes
// decode to U+FFFD and consume one byte.
char32_t DecodeUtf8(std::string_view s, size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    const int c = cont(k);
    if (c < 0) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | static_cast<char32_t>(c);
  }
  i += len;
  return cp;
}

void AppendUtf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool IsSpace(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == 0xA0 || (c >= 0x2000 && c <= 0x200A) ||
         c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F ||
         c == 0x3000;
}

bool IsApostrophe(char32_t c) { return c == '\'' || c == 0x2019; }

// Letters and digits. Outside ASCII this is a block-level approximation:
// Latin-1 punctuation/symbols, general punctuation, the symbol blocks
// (which contain the token separator), CJK punctuation and specials are
// rejected; everything else counts as a letter.
bool IsWordChar(char32_t c) {
  if (c < 0x80) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9');
  }
  if (c < 0xC0 || c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE00 && c <= 0xFE6F) return false;
  if (c >= 0xFF00 && c <= 0xFF20) return false;
  if (c >= 0xFFF0 && c <= 0xFFFF) return false;
  if (c >= 0xE000 && c <= 0xF8FF) return false;  // private use
  return true;
}

char32_t ToLower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

std::vector<std::string> BuildLabelList(
    const std::vector<Utterance>& utterances,
    const std::optional<std::string> Utterance::*field) {
  std::vector<std::string> labels;
  std::unordered_set<std::string> seen;
  for (const Utterance& u : utterances) {
    const auto& label = u.*field;
    if (label && seen.insert(*label).second) labels.push_back(*label);
  }
  return labels;
}

}  // namespace

Dataset::Dataset(std::vector<Utterance> utterances)
    : utterances_(std::move(utterances)) {
  std::unordered_set<std::string> ids;
  for (const Utterance& u : utterances_) {
    if (!ids.insert(u.id).second) DataError("duplicate utterance id '" + u.id + "'");
    if (u.words.empty()) DataError("utterance '" + u.id + "' has no words");
    for (const std::string& w : u.words) {
      if (!IsNormalizedWord(w)) {
        DataError("utterance '" + u.id + "' has unnormalized word '" + w + "'");
      }
    }
  }
  domain_labels_ = BuildLabelList(utterances_, &Utterance::domain);
  intent_labels_ = BuildLabelList(utterances_, &Utterance::intent);
}

WordList Normalize(std::string_view raw_text) {
  WordList words;
  std::string current;
  size_t i = 0;
  while (i < raw_text.size()) {
    const char32_t c = DecodeUtf8(raw_text, i);
    if (IsSpace(c)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else if (IsApostrophe(c)) {
      current.push_back('\'');
    } else if (IsWordChar(c)) {
      AppendUtf8(ToLower(c), current);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::string JoinWords(const WordList& words, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out.append(sep);
    out.append(words[i]);
  }
  return out;
}

bool IsNormalizedWord(std::string_view word) {
  if (word.empty()) return false;
  const WordList w = Normalize(word);
  return w.size() == 1 && w[0] == word;
}

Utterance ParseRecord(std::string_view line, size_t line_number) {
  const std::string where = "line " + std::to_string(line_number) + ": ";
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    DataError(where + "malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) DataError(where + "record is not a JSON object");
  auto get_string = [&](const char* key) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) DataError(where + "field '" + key + "' is not a string");
    return it->get<std::string>();
  };
  Utterance u;
  const auto text = get_string("text");
  if (!text) DataError(where + "missing required field 'text'");
  u.words = Normalize(*text);
  if (u.words.empty()) DataError(where + "text has no words after normalization");
  u.id = get_string("id").value_or("u" + std::to_string(line_number));
  u.domain = get_string("domain");
  u.intent = get_string("intent");
  return u;
}

std::string SerializeRecord(const Utterance& u) {
  ordered_json j;
  j["id"] = u.id;
  j["text"] = JoinWords(u.words);
  if (u.domain) j["domain"] = *u.domain;
  if (u.intent) j["intent"] = *u.intent;
  return j.dump();
}

Dataset LoadDatasets(const std::vector<std::string>& paths) {
  std::vector<Utterance> utterances;
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) DataError("cannot open dataset file '" + path + "'");
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        utterances.push_back(ParseRecord(line, line_number));
      } catch (const Error& e) {
        DataError(path + ": " + e.what());
      }
    }
  }
  return Dataset(std::move(utterances));
}

Dataset LoadDataset(const std::string& path) { return LoadDatasets({path}); }

void SaveDataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) DataError("cannot write dataset file '" + path + "'");
  for (const Utterance& u : dataset.utterances()) {
    out << SerializeRecord(u) << '\n';
  }
}

SplitResult Split(const Dataset& dataset, double heldout_fraction,
                  uint64_t seed) {
  if (!(heldout_fraction > 0.0 && heldout_fraction < 1.0)) {
    UsageError("heldout fraction must be in (0,1)");
  }
  if (dataset.empty()) UsageError("cannot split an empty dataset");

  const auto& utts = dataset.utterances();
  const bool by_intent = !dataset.intent_labels().empty();
  const bool by_domain = !by_intent && !dataset.domain_labels().empty();

  std::map<std::string, std::vector<size_t>> strata;
  std::vector<std::string> order;  // first-appearance order of strata
  for (size_t i = 0; i < utts.size(); ++i) {
    std::string key;
    if (by_intent) key = utts[i].intent.value_or("");
    if (by_domain) key = utts[i].domain.value_or("");
    auto [it, inserted] = strata.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(i);
  }

  Rng rng(seed);
  std::vector<bool> heldout(utts.size(), false);
  for (const std::string& key : order) {
    std::vector<size_t> members = strata[key];
    Shuffle(members, rng);
    const auto take = static_cast<size_t>(
        std::lround(heldout_fraction * static_cast<double>(members.size())));
    for (size_t k = 0; k < take; ++k) heldout[members[k]] = true;
  }

  std::vector<Utterance> train, held;
  for (size_t i = 0; i < utts.size(); ++i) {
    (heldout[i] ? held : train).push_back(utts[i]);
  }
  return {Dataset(std::move(train)), Dataset(std::move(held))};
}

std::string IntentName(int index) { return "intent_" + std::to_string(index); }

namespace {

// Pronounceable pseudo-words for synthetic content slots.
std::string PseudoWord(uint64_t key) {
  static constexpr std::string_view kOnsets = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  std::string w;
  const int syllables = 2 + static_cast<int>(key % 2);
  key /= 2;
  for (int s = 0; s < syllables; ++s) {
    w.push_back(kOnsets[key % kOnsets.size()]);
    key /= kOnsets.size();
    w.push_back(kVowels[key % kVowels.size()]);
    key /= kVowels.size();
  }
  return w;
}

size_t DrawWeighted(const std::vector<double>& cumulative, Rng& rng) {
  const double x = UniformReal(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
  return std::min<size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

}  // namespace

SynthResult SynthDataset(int n_intents, int templates_per_intent,
                         const std::vector<InterchangeableSet>& sets,
                         uint64_t seed, const SynthOptions& options) {
  if (n_intents < 1) UsageError("synth: need at least one intent");
  if (templates_per_intent < 1) UsageError("synth: need at least one template");
  if (options.content_words < 0 || options.content_pool < 1) {
    UsageError("synth: bad content word options");
  }
  std::set<std::string> reserved;
  for (const InterchangeableSet& s : sets) {
    if (s.members.empty()) UsageError("synth: empty interchangeable set");
    if (s.members.size() < 2) {
      UsageError("synth: interchangeable set needs at least two members");
    }
    if (s.intent && (*s.intent < 0 || *s.intent >= n_intents)) {
      UsageError("synth: set bound to unknown intent");
    }
    for (const WordList& m : s.members) {
      if (m.empty()) UsageError("synth: empty set member");
      for (const std::string& w : m) {
        if (!IsNormalizedWord(w)) UsageError("synth: unnormalized member word '" + w + "'");
        reserved.insert(w);
      }
    }
  }

  Rng rng(seed);
  uint64_t word_key = DeriveSeed(options.content_seed.value_or(seed), "content");
  auto fresh_word = [&]() {
    for (;;) {
      std::string w = PseudoWord(word_key++ % 1000003ULL);
      if (reserved.insert(w).second) return w;
    }
  };
  std::vector<std::vector<std::string>> pools(n_intents);
  for (auto& pool : pools) {
    for (int k = 0; k < options.content_pool; ++k) pool.push_back(fresh_word());
  }
  std::vector<std::string> shared_pool;
  if (options.shared_content > 0.0) {
    for (int k = 0; k < options.content_pool; ++k) shared_pool.push_back(fresh_word());
  }

  std::vector<std::vector<double>> cumulative(sets.size());
  for (size_t s = 0; s < sets.size(); ++s) {
    double acc = 0.0;
    for (size_t r = 0; r < sets[s].members.size(); ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), options.member_skew);
      cumulative[s].push_back(acc);
    }
  }

  std::vector<Utterance> utterances;
  for (int intent = 0; intent < n_intents; ++intent) {
    std::vector<size_t> refs;
    size_t largest = 0;
    for (size_t s = 0; s < sets.size(); ++s) {
      if (!sets[s].intent || *sets[s].intent == intent) {
        refs.push_back(s);
        largest = std::max(largest, sets[s].members.size());
      }
    }
    const size_t count =
        std::max(static_cast<size_t>(templates_per_intent), largest);
    std::set<WordList> seen;
    for (size_t j = 0; j < count; ++j) {
      WordList words;
      for (int attempt = 0; attempt < 64; ++attempt) {
        words.clear();
        for (size_t s : refs) {
          const auto& members = sets[s].members;
          const size_t m =
              j < members.size() ? j : DrawWeighted(cumulative[s], rng);
          words.insert(words.end(), members[m].begin(), members[m].end());
        }
        for (int c = 0; c < options.content_words; ++c) {
          const bool shared = !shared_pool.empty() &&
                              UniformReal(rng) < options.shared_content;
          const auto& pool = shared ? shared_pool : pools[intent];
          words.push_back(pool[UniformIndex(rng, pool.size())]);
        }
        if (!words.empty() && !seen.count(words)) break;
      }
      if (words.empty()) words.push_back(pools[intent][0]);
      seen.insert(words);
      Utterance u;
      u.id = "s" + std::to_string(intent) + "_" + std::to_string(j);
      u.words = std::move(words);
      u.intent = IntentName(intent);
      utterances.push_back(std::move(u));
    }
  }
  return {Dataset(std::move(utterances)), sets};
}

std::vector<InterchangeableSet> DefaultInterchangeableSets() {
  auto make = [](std::initializer_list<const char*> members,
                 std::optional<int> intent) {
    InterchangeableSet s;
    for (const char* m : members) s.members.push_back(Normalize(m));
    s.intent = intent;
    return s;
  };
  return {
      make({"please", "can you", "could you", "would you", "i need you to", "hey"},
           std::nullopt),
      make({"how do i make", "show me how to cook", "teach me to make",
            "tell me how to cook", "how to make", "how can i cook",
            "give me a recipe for", "walk me through making"},
           0),
      make({"turn on", "switch on", "power on", "start", "activate", "enable",
            "fire up", "boot up"},
           1),
      make({"turn off", "switch off", "power off", "stop", "deactivate",
            "disable", "shut down", "kill"},
           2),
      make({"what is", "tell me", "i want to know", "give me", "look up",
            "find out", "check", "let me know"},
           3),
      make({"delete", "get rid of", "remove", "erase", "clear", "discard",
            "throw away", "wipe"},
           4),
  };
}

std::vector<InterchangeableSet> LoadInterchangeableSets(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) DataError("cannot open interchangeable set file '" + path + "'");
  std::vector<InterchangeableSet> sets;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    InterchangeableSet s;
    const size_t tab = line.find('\t');
    std::string body = line;
    if (tab != std::string::npos) {
      try {
        s.intent = std::stoi(line.substr(0, tab));
      } catch (const std::exception&) {
        DataError(path + ": line " + std::to_string(line_number) +
                  ": bad intent index");
      }
      body = line.substr(tab + 1);
    }
    std::stringstream ss(body);
    std::string member;
    while (std::getline(ss, member, '|')) {
      WordList words = Normalize(member);
      if (!words.empty()) s.members.push_back(std::move(words));
    }
    sets.push_back(std::move(s));
  }
  return sets;
}

}  // namespace iraug
