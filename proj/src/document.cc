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

#include "corefkit/document.h"

#include <algorithm>

namespace corefkit {

std::string ToString(const TokenId &id) {
  std::string s = "S" + std::to_string(id.sentence + 1) + ":" +
                   std::to_string(id.word);
  if (id.empty > 0) s += "." + std::to_string(id.empty);
  return s;
}

int Sentence::size() const {
  int n = 0;
  for (const Token &t : tokens) {
    if (!t.id.is_empty_node()) ++n;
  }
  return n;
}

const Token *Sentence::word(int index) const {
  auto it = std::lower_bound(
      tokens.begin(), tokens.end(), index, [](const Token &t, int w) {
        return t.id.word < w || (t.id.word == w && t.id.empty > 0);
      });
  // Empty nodes "w.k" sort after "w", so the lower bound lands on the word.
  for (; it != tokens.end() && it->id.word == index; ++it) {
    if (!it->id.is_empty_node()) return &*it;
  }
  return nullptr;
}

const Token *Document::FindToken(const TokenId &id) const {
  if (id.sentence < 0 || id.sentence >= static_cast<int>(sentences.size())) {
    return nullptr;
  }
  const auto &tokens = sentences[id.sentence].tokens;
  auto it = std::lower_bound(
      tokens.begin(), tokens.end(), id,
      [](const Token &t, const TokenId &key) { return t.id < key; });
  if (it == tokens.end() || it->id != id) return nullptr;
  return &*it;
}

int Document::word_count() const {
  int n = 0;
  for (const Sentence &s : sentences) n += s.size();
  return n;
}

TokenIndex::TokenIndex(const Document &doc) {
  for (const Sentence &s : doc.sentences) {
    sentence_starts_.push_back(static_cast<int>(ids_.size()));
    for (const Token &t : s.tokens) {
      if (!t.id.is_empty_node()) ids_.push_back(t.id);
    }
  }
  sentence_starts_.push_back(static_cast<int>(ids_.size()));
}

int TokenIndex::position(const TokenId &id) const {
  if (id.is_empty_node()) return -1;
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return -1;
  return static_cast<int>(it - ids_.begin());
}

Document ReduceToHeads(const Document &doc) {
  Document out = doc;
  for (Entity &e : out.entities) {
    for (Mention &m : e.mentions) m.tokens = {m.head};
  }
  return out;
}

}  // namespace corefkit
