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

#include "corefkit/validation.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "corefkit/dep_tree.h"

namespace corefkit {
namespace {

void CheckSentence(const Document &doc, int s,
                   std::vector<Violation> *out) {
  const Sentence &sentence = doc.sentences[s];
  const std::size_t first = out->size();
  int expected_word = 1;
  for (const Token &t : sentence.tokens) {
    const std::string where = ToString(t.id);
    if (t.id.sentence != s) out->push_back({"misplaced token id", where});
    if (t.id.is_empty_node()) continue;
    if (t.id.word != expected_word) {
      out->push_back({"non-consecutive token ids", where});
    }
    expected_word = t.id.word + 1;
    if (!t.parent) continue;
    const TokenId &p = *t.parent;
    if (p.sentence != s) {
      out->push_back({"cross-sentence dependency", where});
    } else if (p.is_empty_node()) {
      out->push_back({"parent is empty node", where});
    } else if (p == t.id) {
      out->push_back({"self-loop", where});
    } else if (sentence.word(p.word) == nullptr) {
      out->push_back({"unknown parent", where});
    }
  }
  if (!std::is_sorted(sentence.tokens.begin(), sentence.tokens.end(),
                      [](const Token &a, const Token &b) {
                        return a.id < b.id;
                      })) {
    out->push_back({"tokens out of order", "S" + std::to_string(s + 1)});
  }
  // Cycle search needs local, resolvable edges.
  const bool edges_ok = std::none_of(
      out->begin() + first, out->end(), [](const Violation &v) {
        return v.rule == "cross-sentence dependency" ||
               v.rule == "parent is empty node" || v.rule == "self-loop" ||
               v.rule == "unknown parent";
      });
  if (edges_ok) {
    if (auto w = FindCycle(sentence)) {
      out->push_back({"dependency cycle", ToString(TokenId{s, *w, 0})});
    }
  }
}

}  // namespace

std::string ToString(const Violation &v) { return v.rule + ": " + v.where; }

std::vector<Violation> ValidateDocument(const Document &doc) {
  std::vector<Violation> out;
  for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
    CheckSentence(doc, s, &out);
  }
  std::set<std::string> ids;
  for (const Entity &e : doc.entities) {
    if (!ids.insert(e.id).second) out.push_back({"duplicate entity id", e.id});
    if (e.mentions.empty()) out.push_back({"empty entity", e.id});
    for (const Mention &m : e.mentions) {
      if (m.tokens.empty()) {
        out.push_back({"empty mention", e.id});
        continue;
      }
      for (std::size_t i = 0; i < m.tokens.size(); ++i) {
        const TokenId &id = m.tokens[i];
        if (doc.FindToken(id) == nullptr) {
          out.push_back({"unknown mention token", e.id + " " + ToString(id)});
        } else if (id.is_empty_node()) {
          out.push_back({"empty node in mention", e.id + " " + ToString(id)});
        }
        if (i > 0 && !(m.tokens[i - 1] < id)) {
          out.push_back({"mention tokens not strictly increasing", e.id});
        }
      }
      if (std::find(m.tokens.begin(), m.tokens.end(), m.head) ==
          m.tokens.end()) {
        out.push_back({"head not in mention", e.id + " " + ToString(m.head)});
      }
    }
  }
  return out;
}

Document Canonicalize(Document doc) {
  auto mention_less = [](const Mention &a, const Mention &b) {
    if (a.tokens != b.tokens) return a.tokens < b.tokens;
    return a.head < b.head;
  };
  for (Entity &e : doc.entities) {
    std::stable_sort(e.mentions.begin(), e.mentions.end(), mention_less);
  }
  std::stable_sort(doc.entities.begin(), doc.entities.end(),
                   [&](const Entity &a, const Entity &b) {
                     if (a.mentions.empty() || b.mentions.empty()) {
                       return a.mentions.size() > b.mentions.size();
                     }
                     const Mention &ma = a.mentions[0];
                     const Mention &mb = b.mentions[0];
                     return std::tie(ma.tokens, ma.head, a.id) <
                            std::tie(mb.tokens, mb.head, b.id);
                   });
  return doc;
}

}  // namespace corefkit
