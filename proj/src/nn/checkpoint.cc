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

#include "gotext/nn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <vector>

namespace gotext::nn {
namespace {

constexpr char kMagic[8] = {'G', 'T', 'X', 'C', 'K', 'P', 'T', '\0'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

void PutU32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

std::uint32_t GetU32(std::istream& in) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), 4)) throw CheckpointError("truncated checkpoint");
  return v;
}

struct RawTensor {
  std::vector<std::uint32_t> shape;
  std::vector<float> values;
};

}  // namespace

std::filesystem::path ManifestPath(const std::filesystem::path& tensor_path) {
  std::filesystem::path p = tensor_path;
  p.replace_extension(".json");
  return p;
}

void SaveCheckpoint(const std::filesystem::path& tensor_path, const ParameterStore& store,
                    nlohmann::json manifest) {
  if (tensor_path.has_parent_path()) std::filesystem::create_directories(tensor_path.parent_path());
  std::ofstream out(tensor_path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + tensor_path.string());
  out.write(kMagic, sizeof(kMagic));
  PutU32(out, kCheckpointVersion);
  PutU32(out, static_cast<std::uint32_t>(store.size()));
  nlohmann::json tensors = nlohmann::json::array();
  for (const Parameter* p : store.All()) {
    PutU32(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    PutU32(out, 2);
    PutU32(out, static_cast<std::uint32_t>(p->value.rows()));
    PutU32(out, static_cast<std::uint32_t>(p->value.cols()));
    std::vector<float> buf;
    buf.reserve(static_cast<std::size_t>(p->value.size()));
    for (Eigen::Index i = 0; i < p->value.rows(); ++i) {
      for (Eigen::Index j = 0; j < p->value.cols(); ++j) buf.push_back(static_cast<float>(p->value(i, j)));
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 4));
    tensors.push_back({{"name", p->name}, {"shape", {p->value.rows(), p->value.cols()}}});
  }
  if (!out) throw CheckpointError("write failed for " + tensor_path.string());
  manifest["format_version"] = kCheckpointVersion;
  manifest["tensors"] = std::move(tensors);
  std::ofstream mout(ManifestPath(tensor_path));
  if (!mout) throw CheckpointError("cannot write manifest for " + tensor_path.string());
  mout << manifest.dump(2) << "\n";
}

nlohmann::json LoadManifest(const std::filesystem::path& tensor_path) {
  std::ifstream in(ManifestPath(tensor_path));
  if (!in) throw CheckpointError("missing manifest for " + tensor_path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("bad manifest: ") + e.what());
  }
}

nlohmann::json LoadCheckpoint(const std::filesystem::path& tensor_path, ParameterStore& store) {
  std::ifstream in(tensor_path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read " + tensor_path.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw CheckpointError("not a checkpoint: " + tensor_path.string());
  }
  const std::uint32_t version = GetU32(in);
  if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version");
  const std::uint32_t count = GetU32(in);
  std::map<std::string, RawTensor> raw;
  for (std::uint32_t k = 0; k < count; ++k) {
    std::string name(GetU32(in), '\0');
    if (!in.read(name.data(), static_cast<std::streamsize>(name.size()))) throw CheckpointError("truncated checkpoint");
    RawTensor t;
    const std::uint32_t rank = GetU32(in);
    std::size_t n = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      t.shape.push_back(GetU32(in));
      n *= t.shape.back();
    }
    t.values.resize(n);
    if (!in.read(reinterpret_cast<char*>(t.values.data()), static_cast<std::streamsize>(n * 4))) {
      throw CheckpointError("truncated checkpoint");
    }
    raw.emplace(std::move(name), std::move(t));
  }
  for (Parameter* p : store.All()) {
    const auto it = raw.find(p->name);
    if (it == raw.end()) throw CheckpointError("checkpoint lacks tensor " + p->name);
    const RawTensor& t = it->second;
    if (t.shape.size() != 2 || t.shape[0] != p->value.rows() || t.shape[1] != p->value.cols()) {
      throw ShapeMismatch("checkpoint shape mismatch for " + p->name);
    }
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < p->value.rows(); ++i) {
      for (Eigen::Index j = 0; j < p->value.cols(); ++j) p->value(i, j) = t.values[idx++];
    }
  }
  return LoadManifest(tensor_path);
}

}  // namespace gotext::nn
