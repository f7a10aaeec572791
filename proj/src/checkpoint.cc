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

#include "iraug/checkpoint.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "iraug/error.h"

namespace iraug {
namespace {

void PutFloatLe(float f, std::string& out) {
  uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

float GetFloatLe(const unsigned char* p) {
  uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) bits |= static_cast<uint32_t>(p[b]) << (8 * b);
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

}  // namespace

void WriteCheckpoint(const std::string& path, const ModelConfig& config,
                     const Params<float>& params,
                     const std::string& vocab_fingerprint,
                     const nlohmann::ordered_json& meta) {
  nlohmann::ordered_json header;
  header["config"] = config.ToJson();
  header["vocab_fingerprint"] = vocab_fingerprint;
  for (const auto& [key, value] : meta.items()) header[key] = value;

  std::string payload;
  nlohmann::ordered_json directory = nlohmann::ordered_json::array();
  for (const auto& [name, m] : params.Tensors()) {
    directory.push_back({{"name", name},
                         {"shape", {m->rows, m->cols}},
                         {"offset", payload.size()}});
    for (float f : m->data) PutFloatLe(f, payload);
  }
  header["tensors"] = directory;
  header["payload_bytes"] = payload.size();

  std::ofstream out(path, std::ios::binary);
  if (!out) DataError("cannot write checkpoint '" + path + "'");
  out << kCheckpointMagic << header.dump() << '\n' << payload;
  if (!out) DataError("failed writing checkpoint '" + path + "'");
}

CheckpointData ReadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) DataError("cannot open checkpoint '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  if (!std::string_view(bytes).starts_with(kCheckpointMagic)) {
    DataError("checkpoint '" + path + "': bad magic");
  }
  const size_t header_end = bytes.find('\n', kCheckpointMagic.size());
  if (header_end == std::string::npos) DataError("checkpoint '" + path + "': truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(
        bytes.substr(kCheckpointMagic.size(), header_end - kCheckpointMagic.size()));
  } catch (const nlohmann::json::exception& e) {
    DataError("checkpoint '" + path + "': malformed header (" + e.what() + ")");
  }
  if (!header.is_object() || !header.contains("config") || !header.contains("tensors")) {
    DataError("checkpoint '" + path + "': header lacks config or tensors");
  }

  CheckpointData data;
  data.config = ModelConfig::FromJson(header["config"]);
  try {
    data.config.Validate();
  } catch (const Error& e) {
    DataError("checkpoint '" + path + "': " + e.what());
  }
  data.vocab_fingerprint = header.value("vocab_fingerprint", "");

  const auto& directory = header["tensors"];
  if (!directory.is_array() || directory.empty()) DataError("checkpoint '" + path + "': empty tensor directory");
  const auto& last = directory.back();
  if (!last.contains("shape") || !last["shape"].is_array() || last["shape"].size() != 2) {
    DataError("checkpoint '" + path + "': bad head shape");
  }
  const int head_size = last["shape"][1].get<int>();
  data.params = Params<float>::Zeros(data.config, head_size);

  const size_t payload_start = header_end + 1;
  const size_t payload_size = bytes.size() - payload_start;
  const auto* payload = reinterpret_cast<const unsigned char*>(bytes.data() + payload_start);
  auto tensors = data.params.Tensors();
  if (directory.size() != tensors.size()) {
    DataError("checkpoint '" + path + "': tensor directory does not match config");
  }
  for (size_t i = 0; i < tensors.size(); ++i) {
    const auto& entry = directory[i];
    Matrix<float>& m = *tensors[i].tensor;
    try {
      if (entry.at("name").get<std::string>() != tensors[i].name ||
          entry.at("shape")[0].get<int>() != m.rows ||
          entry.at("shape")[1].get<int>() != m.cols) {
        DataError("checkpoint '" + path + "': unexpected tensor '" +
                  entry.at("name").get<std::string>() + "'");
      }
      const size_t offset = entry.at("offset").get<size_t>();
      if (offset + m.size() * 4 > payload_size) {
        DataError("checkpoint '" + path + "': truncated payload");
      }
      for (size_t k = 0; k < m.size(); ++k) m.data[k] = GetFloatLe(payload + offset + 4 * k);
    } catch (const nlohmann::json::exception& e) {
      DataError("checkpoint '" + path + "': bad tensor entry (" + e.what() + ")");
    }
  }
  for (const auto& [key, value] : header.items()) {
    if (key != "config" && key != "vocab_fingerprint" && key != "tensors" &&
        key != "payload_bytes") {
      data.meta[key] = value;
    }
  }
  return data;
}

void SaveModel(const Model<float>& model, const std::string& path) {
  nlohmann::ordered_json meta;
  meta["head"] = "mlm";
  meta["finetuned"] = model.finetuned;
  if (model.finetuned) {
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    for (const auto& [intent, id] : model.intent_tokens) table[intent] = id;
    meta["intent_tokens"] = table;
  }
  WriteCheckpoint(path, model.config, model.params, model.vocab_fingerprint, meta);
}

Model<float> LoadModel(const std::string& path, const Vocabulary* vocab) {
  CheckpointData data = ReadCheckpoint(path);
  if (data.meta.value("head", "") != "mlm") {
    DataError("checkpoint '" + path + "' is not a masked-LM model");
  }
  if (data.params.head_w.cols != data.config.vocab_size) {
    DataError("checkpoint '" + path + "': head size differs from vocab_size");
  }
  if (vocab != nullptr) {
    if (vocab->Fingerprint() != data.vocab_fingerprint ||
        static_cast<int>(vocab->size()) != data.config.vocab_size) {
      MismatchError("checkpoint '" + path + "' was trained with a different vocabulary");
    }
  }
  Model<float> model;
  model.config = data.config;
  model.params = std::move(data.params);
  model.vocab_fingerprint = data.vocab_fingerprint;
  model.finetuned = data.meta.value("finetuned", false);
  if (data.meta.contains("intent_tokens")) {
    for (const auto& [intent, id] : data.meta["intent_tokens"].items()) {
      model.intent_tokens[intent] = id.get<TokenId>();
    }
  }
  return model;
}

}  // namespace iraug
