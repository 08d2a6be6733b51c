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

// Binary model files.
//
// Layout, all integers little-endian:
//   "CFK1", version byte (1),
//   u64 header fields in the order of kHeaderFields (doubles by bit pattern),
//   u64 trained steps, u64 parameter count,
//   parameter values as binary32 in ParamLayout order.

#ifndef COREFKIT_MODEL_IO_H_
#define COREFKIT_MODEL_IO_H_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "corefkit/model_params.h"

namespace corefkit {

inline constexpr std::uint8_t kModelFormatVersion = 1;

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SavedModel {
  ModelParams params;
  std::uint64_t trained_steps = 0;
};

void SaveModel(const ModelParams &params, std::uint64_t trained_steps,
               std::ostream &out);
SavedModel LoadModel(std::istream &in);

void SaveModelFile(const ModelParams &params, std::uint64_t trained_steps,
                   const std::string &path);
SavedModel LoadModelFile(const std::string &path);

}  // namespace corefkit

#endif  // COREFKIT_MODEL_IO_H_
