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

#ifndef COREFKIT_DOCUMENT_H_
#define COREFKIT_DOCUMENT_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace corefkit {

// Position of a node in a document. Regular tokens have empty == 0; an empty
// node "7.2" has word == 7 and empty == 2.
struct TokenId {
  int sentence = 0;
  int word = 1;
  int empty = 0;

  bool is_empty_node() const { return empty > 0; }

  auto operator<=>(const TokenId &) const = default;
  bool operator==(const TokenId &) const = default;
};

// "S1:3" style label (1-based sentence number) used in diagnostics.
std::string ToString(const TokenId &id);

struct MiscItem {
  std::string key;
  std::optional<std::string> value;  // nullopt for bare items without '='

  bool operator==(const MiscItem &) const = default;
};

struct Token {
  TokenId id;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::string feats;
  // nullopt is the ROOT sentinel for regular tokens; empty nodes never have a
  // basic-tree parent.
  std::optional<TokenId> parent;
  std::string deprel;
  std::string deps;
  // Everything from the MISC column except the Entity key.
  std::vector<MiscItem> misc;

  bool operator==(const Token &) const = default;
};

// Multiword token line ("3-4 du _ ...") kept verbatim for output.
struct MultiwordToken {
  int first = 0;
  int last = 0;
  std::string line;

  bool operator==(const MultiwordToken &) const = default;
};

struct Sentence {
  std::vector<std::string> comments;  // without the leading "# "
  // Regular tokens and empty nodes in file order, i.e. sorted by TokenId.
  std::vector<Token> tokens;
  std::vector<MultiwordToken> multiword_tokens;

  // Number of regular tokens.
  int size() const;
  // Regular token with the given 1-based word index, or nullptr.
  const Token *word(int index) const;

  bool operator==(const Sentence &) const = default;
};

struct Mention {
  std::vector<TokenId> tokens;  // strictly increasing
  TokenId head;
  // Annotation fields carried through serialization untouched: the entity
  // type slot and anything after the head index.
  std::string entity_type;
  std::vector<std::string> extra;

  bool operator==(const Mention &) const = default;
};

struct Entity {
  std::string id;
  std::vector<Mention> mentions;

  bool is_singleton() const { return mentions.size() == 1; }

  bool operator==(const Entity &) const = default;
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::vector<Entity> entities;

  // Token lookup; nullptr when the id does not resolve.
  const Token *FindToken(const TokenId &id) const;
  // Regular tokens in the whole document.
  int word_count() const;

  bool operator==(const Document &) const = default;
};

// Flat view of the regular tokens of a document in reading order.
class TokenIndex {
 public:
  explicit TokenIndex(const Document &doc);

  int size() const { return static_cast<int>(ids_.size()); }
  const TokenId &id(int position) const { return ids_[position]; }
  // Global position of a regular token, or -1.
  int position(const TokenId &id) const;
  // Global position of the first token of each sentence; one extra entry
  // holding size() at the end.
  const std::vector<int> &sentence_starts() const { return sentence_starts_; }

 private:
  std::vector<TokenId> ids_;
  std::vector<int> sentence_starts_;
};

// Returns a copy of doc where every mention is reduced to its head token.
Document ReduceToHeads(const Document &doc);

}  // namespace corefkit

#endif  // COREFKIT_DOCUMENT_H_
