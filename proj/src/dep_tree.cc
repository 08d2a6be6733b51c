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

#include "corefkit/dep_tree.h"

#include <algorithm>
#include <stdexcept>

namespace corefkit {
namespace {

const Token &RegularToken(const Sentence &sentence, const TokenId &tok) {
  if (tok.is_empty_node()) {
    throw std::invalid_argument("no dependency edges for empty node " +
                                ToString(tok));
  }
  const Token *t = sentence.word(tok.word);
  if (t == nullptr) {
    throw std::invalid_argument("unknown token " + ToString(tok));
  }
  return *t;
}

const Token &ResolveRegular(const Document &doc, const TokenId &tok) {
  if (tok.sentence < 0 ||
      tok.sentence >= static_cast<int>(doc.sentences.size())) {
    throw std::invalid_argument("unknown token " + ToString(tok));
  }
  return RegularToken(doc.sentences[tok.sentence], tok);
}

std::vector<TokenId> Canonical(std::span<const TokenId> tokens) {
  if (tokens.empty()) throw std::invalid_argument("empty mention");
  std::vector<TokenId> sorted(tokens.begin(), tokens.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return sorted;
}

bool ParentOutside(const Token &t, const std::vector<TokenId> &set) {
  if (!t.parent) return true;
  return !std::binary_search(set.begin(), set.end(), *t.parent);
}

}  // namespace

ParentChain GetParentChain(const Sentence &sentence, const TokenId &tok,
                           int max_depth) {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  ParentChain chain;
  const Token *cur = &RegularToken(sentence, tok);
  // A valid tree reaches ROOT within size() steps.
  const int limit = std::min(max_depth, sentence.size());
  while (static_cast<int>(chain.steps.size()) < limit) {
    chain.steps.push_back({cur->parent, cur->deprel});
    if (!cur->parent) break;
    cur = &RegularToken(sentence, *cur->parent);
  }
  return chain;
}

int DepthToRoot(const Sentence &sentence, const TokenId &tok) {
  const int n = sentence.size();
  const Token *cur = &RegularToken(sentence, tok);
  for (int depth = 1; depth <= n; ++depth) {
    if (!cur->parent) return depth;
    cur = &RegularToken(sentence, *cur->parent);
  }
  throw std::invalid_argument("dependency cycle through " + ToString(tok));
}

std::optional<int> FindCycle(const Sentence &sentence) {
  const int n = sentence.size();
  // 0 unvisited, 1 on current path, 2 known to reach ROOT.
  std::vector<int> state(n + 1, 0);
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int w = start;
    while (w != 0 && state[w] == 0) {
      state[w] = 1;
      path.push_back(w);
      const Token *t = sentence.word(w);
      if (t == nullptr || !t->parent || t->parent->is_empty_node() ||
          t->parent->word < 1 || t->parent->word > n) {
        w = 0;
      } else {
        w = t->parent->word;
      }
    }
    if (w != 0 && state[w] == 1) return w;
    for (int p : path) state[p] = 2;
  }
  return std::nullopt;
}

TokenId FindHead(const Document &doc, std::span<const TokenId> tokens) {
  const std::vector<TokenId> set = Canonical(tokens);
  std::optional<TokenId> best;
  int best_depth = 0;
  for (const TokenId &id : set) {
    const Token &t = ResolveRegular(doc, id);
    if (!ParentOutside(t, set)) continue;
    const int depth = DepthToRoot(doc.sentences[id.sentence], id);
    if (!best || depth < best_depth) {
      best = id;
      best_depth = depth;
    }
  }
  // Unreachable for acyclic trees: the topmost token always leaves the set.
  return best ? *best : set.front();
}

bool IsTreelet(const Document &doc, std::span<const TokenId> tokens) {
  const std::vector<TokenId> set = Canonical(tokens);
  int external = 0;
  for (const TokenId &id : set) {
    if (ParentOutside(ResolveRegular(doc, id), set)) ++external;
  }
  return external == 1;
}

bool IsDiscontinuous(std::span<const TokenId> tokens) {
  if (tokens.empty()) return false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].is_empty_node()) return true;
    if (i == 0) continue;
    if (tokens[i].sentence != tokens[0].sentence) return true;
    if (tokens[i].word != tokens[i - 1].word + 1) return true;
  }
  return false;
}

TreeFeature GetTreeFeature(const Sentence &sentence, const TokenId &tok,
                           int depth) {
  if (depth < 1) throw std::invalid_argument("tree depth must be >= 1");
  const ParentChain chain = GetParentChain(sentence, tok, depth);
  TreeFeature feature;
  feature.slots.resize(depth);
  for (std::size_t d = 0; d < chain.steps.size(); ++d) {
    TreeSlot &slot = feature.slots[d];
    const ChainStep &step = chain.steps[d];
    if (step.parent) {
      slot.kind = TreeSlot::Kind::kToken;
      slot.word = step.parent->word;
    } else {
      slot.kind = TreeSlot::Kind::kRoot;
    }
    slot.deprel = step.deprel;
  }
  return feature;
}

}  // namespace corefkit
