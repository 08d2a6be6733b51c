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

#ifndef COREFKIT_VALIDATION_H_
#define COREFKIT_VALIDATION_H_

#include <string>
#include <vector>

#include "corefkit/document.h"

namespace corefkit {

struct Violation {
  std::string rule;   // e.g. "head not in mention"
  std::string where;  // entity id or token label

  bool operator==(const Violation &) const = default;
};

std::string ToString(const Violation &v);

// Checks every structural invariant of the document model. An empty result
// means the document is safe to serialize and to feed to the model.
std::vector<Violation> ValidateDocument(const Document &doc);

// Sorts mentions inside each entity by token list and entities by their
// first mention. The reader always produces documents in this order.
Document Canonicalize(Document doc);

}  // namespace corefkit

#endif  // COREFKIT_VALIDATION_H_
