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

#ifndef IRAUG_CHECKPOINT_H_
#define IRAUG_CHECKPOINT_H_

// Binary checkpoint file:
//   "IRCKPT1\n"
//   one line of compact UTF-8 JSON (config, vocab_fingerprint, metadata and
//   a tensor directory of {name, shape, offset}), terminated by '\n'
//   raw tensor payloads, row-major little-endian float32; offsets are bytes
//   from the start of the payload section.

#include <string>

#include "iraug/encoder.h"
#include "json.hpp"

namespace iraug {

inline constexpr std::string_view kCheckpointMagic = "IRCKPT1\n";

struct CheckpointData {
  ModelConfig config;
  std::string vocab_fingerprint;
  nlohmann::ordered_json meta;  // header fields beyond config and tensors
  Params<float> params;
};

void WriteCheckpoint(const std::string& path, const ModelConfig& config,
                     const Params<float>& params,
                     const std::string& vocab_fingerprint,
                     const nlohmann::ordered_json& meta);

// Throws a data error on a bad magic, malformed header, unexpected tensor
// directory or truncated payload.
CheckpointData ReadCheckpoint(const std::string& path);

void SaveModel(const Model<float>& model, const std::string& path);

// When `vocab` is given its fingerprint must match the one stored in the
// checkpoint (mismatch error otherwise).
Model<float> LoadModel(const std::string& path,
                       const Vocabulary* vocab = nullptr);

}  // namespace iraug

#endif  // IRAUG_CHECKPOINT_H_
