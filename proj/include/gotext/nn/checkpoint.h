// Copyright 2026 The gotext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOTEXT_NN_CHECKPOINT_H_
#define GOTEXT_NN_CHECKPOINT_H_

#include <filesystem>
#include <stdexcept>

#include "json.hpp"
#include "gotext/nn/tensor.h"

namespace gotext::nn {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Path of the JSON manifest paired with a tensor file: "x.bin" -> "x.json".
std::filesystem::path ManifestPath(const std::filesystem::path& tensor_path);

// Tensor file layout (little-endian):
//   "GTXCKPT\0" u32 version u32 count
//   per tensor: u32 name_len, name, u32 rank, u32 dims[rank], f32 values
//   (row-major)
// The manifest gets "format_version" and "tensors" keys added.
void SaveCheckpoint(const std::filesystem::path& tensor_path, const ParameterStore& store,
                    nlohmann::json manifest);

// Fills every parameter of `store` from the file; names and shapes must
// match. Returns the manifest.
nlohmann::json LoadCheckpoint(const std::filesystem::path& tensor_path, ParameterStore& store);

// Manifest only.
nlohmann::json LoadManifest(const std::filesystem::path& tensor_path);

}  // namespace gotext::nn

#endif  // GOTEXT_NN_CHECKPOINT_H_
