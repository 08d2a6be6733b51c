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

// Turning antecedent decisions into entities and documents.

#ifndef COREFKIT_DECODE_H_
#define COREFKIT_DECODE_H_

#include <span>
#include <vector>

#include "corefkit/document.h"
#include "corefkit/model.h"
#include "corefkit/model_params.h"

namespace corefkit {

// Links every span to its most probable candidate (the dummy wins ties) and
// returns the connected components with at least two spans. Each cluster
// lists span indices in ascending order; clusters are ordered by their
// first span.
std::vector<std::vector<int>> DecodeClusters(
    std::span<const AntecedentFrame> frames);

// Predicted head positions of one mention, relative to its first token.
struct HeadChoice {
  std::vector<int> positions;  // ascending
  int best = 0;                // most probable position
};

// Replaces every mention by its predicted head tokens; heads[e][m] belongs
// to entities[e].mentions[m]. Mentions of one entity that collapse onto the
// same tokens are kept once.
std::vector<Entity> EmitHeadMentions(
    std::span<const Entity> entities,
    const std::vector<std::vector<HeadChoice>> &heads);

// Full prediction: the document is split into windows, each window is
// decoded independently, and the resulting entities are attached to a copy
// of doc (its own entities are discarded). With heads_only every mention is
// reduced to its head word(s): predicted ones when a head variant is
// trained, the dependency head otherwise.
Document PredictDocument(const Document &doc, const ModelParams &params,
                         bool heads_only);

struct HeadAccuracy {
  int correct = 0;
  int total = 0;

  double value() const { return total ? double(correct) / total : 0.0; }
};

// Fraction of gold mentions (contiguous, at most max_span_width wide) whose
// most probable predicted head is the gold head.
HeadAccuracy EvaluateHeads(std::span<const Document> docs,
                           const ModelParams &params);

}  // namespace corefkit

#endif  // COREFKIT_DECODE_H_
