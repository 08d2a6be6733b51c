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

// Basic dependency tree queries over CoNLL-U sentences: paths to the root,
// mention heads, treelet and contiguity tests, and the per-token ancestor
// slots consumed by the tree encoder.

#ifndef COREFKIT_DEP_TREE_H_
#define COREFKIT_DEP_TREE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corefkit/document.h"

namespace corefkit {

// Label used for tree slots past the root.
inline constexpr const char kPadDeprel[] = "PAD";

struct ChainStep {
  std::optional<TokenId> parent;  // nullopt is ROOT
  std::string deprel;             // relation of the edge entered at this step

  bool operator==(const ChainStep &) const = default;
};

struct ParentChain {
  std::vector<ChainStep> steps;
};

// Walks up from tok for at most max_depth edges, stopping at ROOT.
ParentChain GetParentChain(const Sentence &sentence, const TokenId &tok,
                           int max_depth);

// Number of edges from tok up to and including the edge into ROOT; the
// sentence root has depth 1.
int DepthToRoot(const Sentence &sentence, const TokenId &tok);

// Word index of some token on a dependency cycle, if any.
std::optional<int> FindCycle(const Sentence &sentence);

// Head of a token set: the token whose parent lies outside the set (ROOT
// counts as outside). With several such tokens the shallowest wins, then the
// earliest. Input order does not matter.
TokenId FindHead(const Document &doc, std::span<const TokenId> tokens);
inline TokenId FindHead(const Document &doc, const Mention &mention) {
  return FindHead(doc, mention.tokens);
}

// True iff exactly one token of the set has a parent outside the set.
bool IsTreelet(const Document &doc, std::span<const TokenId> tokens);
inline bool IsTreelet(const Document &doc, const Mention &mention) {
  return IsTreelet(doc, mention.tokens);
}

// True unless the tokens form one consecutive run of regular tokens inside a
// single sentence.
bool IsDiscontinuous(std::span<const TokenId> tokens);
inline bool IsDiscontinuous(const Mention &mention) {
  return IsDiscontinuous(mention.tokens);
}

struct TreeSlot {
  enum class Kind { kToken, kRoot, kPad };
  Kind kind = Kind::kPad;
  int word = 0;  // ancestor word index when kind == kToken
  std::string deprel = kPadDeprel;

  bool operator==(const TreeSlot &) const = default;
};

struct TreeFeature {
  std::vector<TreeSlot> slots;  // exactly `depth` entries
};

// Ancestor slots 1..depth for tok. Slot d names the d-th ancestor (or ROOT)
// and the relation of the edge entered at step d; slots beyond ROOT are
// padding.
TreeFeature GetTreeFeature(const Sentence &sentence, const TokenId &tok,
                           int depth);

// Width of the realized tree encoding.
constexpr int TreeFeatureWidth(int depth, int token_dim, int deprel_dim) {
  return depth * (token_dim + deprel_dim);
}

}  // namespace corefkit

#endif  // COREFKIT_DEP_TREE_H_
