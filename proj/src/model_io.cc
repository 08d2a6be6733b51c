// Copyright 2026 The corefkit Authors.
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

#include "corefkit/model_io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace corefkit {
namespace {

constexpr char kMagic[4] = {'C', 'F', 'K', '1'};

void PutU64(std::ostream &out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t GetU64(std::istream &in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char *>(buf), 8)) {
    throw ModelFormatError("truncated model header");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

int GetInt(std::istream &in) {
  const std::uint64_t v = GetU64(in);
  if (v > 0x7fffffff) throw ModelFormatError("header field out of range");
  return static_cast<int>(v);
}

}  // namespace

void SaveModel(const ModelParams &params, std::uint64_t trained_steps,
               std::ostream &out) {
  const HyperParams &hp = params.hp();
  out.write(kMagic, 4);
  out.put(static_cast<char>(kModelFormatVersion));
  for (int v : {hp.token_dim, hp.deprel_dim, hp.hidden_dim, hp.width_dim,
                hp.form_buckets, hp.max_span_width, hp.tree_depth}) {
    PutU64(out, static_cast<std::uint64_t>(v));
  }
  PutU64(out, std::bit_cast<std::uint64_t>(hp.prune_ratio));
  PutU64(out, static_cast<std::uint64_t>(hp.max_antecedents));
  PutU64(out, static_cast<std::uint64_t>(hp.head_variant));
  PutU64(out, std::bit_cast<std::uint64_t>(hp.head_threshold));
  PutU64(out, std::bit_cast<std::uint64_t>(hp.head_loss_weight));
  PutU64(out, static_cast<std::uint64_t>(hp.segment_length));
  PutU64(out, static_cast<std::uint64_t>(hp.max_segments));
  PutU64(out, std::bit_cast<std::uint64_t>(hp.learning_rate));
  PutU64(out, std::bit_cast<std::uint64_t>(hp.clip_norm));
  PutU64(out, trained_steps);
  PutU64(out, params.values().size());
  for (double v : params.values()) {
    const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(buf, 4);
  }
  if (!out) throw std::runtime_error("failed to write model");
}

SavedModel LoadModel(std::istream &in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw ModelFormatError("not a model file (bad magic)");
  }
  const int version = in.get();
  if (version != kModelFormatVersion) {
    throw ModelFormatError("unsupported model format version " +
                           std::to_string(version));
  }
  HyperParams hp;
  hp.token_dim = GetInt(in);
  hp.deprel_dim = GetInt(in);
  hp.hidden_dim = GetInt(in);
  hp.width_dim = GetInt(in);
  hp.form_buckets = GetInt(in);
  hp.max_span_width = GetInt(in);
  hp.tree_depth = GetInt(in);
  hp.prune_ratio = std::bit_cast<double>(GetU64(in));
  hp.max_antecedents = GetInt(in);
  const int variant = GetInt(in);
  if (variant > 2) throw ModelFormatError("unknown head variant");
  hp.head_variant = static_cast<HeadVariant>(variant);
  hp.head_threshold = std::bit_cast<double>(GetU64(in));
  hp.head_loss_weight = std::bit_cast<double>(GetU64(in));
  hp.segment_length = GetInt(in);
  hp.max_segments = GetInt(in);
  hp.learning_rate = std::bit_cast<double>(GetU64(in));
  hp.clip_norm = std::bit_cast<double>(GetU64(in));
  try {
    hp.Validate();
  } catch (const std::invalid_argument &e) {
    throw ModelFormatError(std::string("bad model header: ") + e.what());
  }
  SavedModel saved;
  saved.trained_steps = GetU64(in);
  const std::uint64_t count = GetU64(in);
  saved.params = ModelParams(hp);
  std::vector<double> &values = saved.params.values();
  if (count != values.size()) {
    throw ModelFormatError("parameter count does not match the header");
  }
  std::vector<unsigned char> raw(count * 4);
  if (!in.read(reinterpret_cast<char *>(raw.data()),
               static_cast<std::streamsize>(raw.size()))) {
    throw ModelFormatError("truncated parameter block");
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= std::uint32_t{raw[4 * i + b]} << (8 * b);
    values[i] = std::bit_cast<float>(bits);
    if (!std::isfinite(values[i])) {
      throw ModelFormatError("non-finite parameter value");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ModelFormatError("trailing bytes after parameters");
  }
  return saved;
}

void SaveModelFile(const ModelParams &params, std::uint64_t trained_steps,
                   const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  SaveModel(params, trained_steps, out);
}

SavedModel LoadModelFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  try {
    return LoadModel(in);
  } catch (const ModelFormatError &e) {
    throw ModelFormatError(path + ": " + e.what());
  }
}

}  // namespace corefkit
