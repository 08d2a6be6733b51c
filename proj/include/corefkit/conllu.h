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

// CoNLL-U reader and writer with coreference brackets in MISC.
//
// The Entity value is a concatenation of bracket items:
//   "(e1-type-2-x"    opens a mention of e1 whose head is its 2nd token
//   "e1)"             closes the most recent open mention of e1
//   "(e1-type-1)"     single-token mention
//   "(e3[1/2]-...-1"  first part of a discontinuous mention, closed by
//                     "e3[1/2])"
// Fields after the head index are kept in Mention::extra.

#ifndef COREFKIT_CONLLU_H_
#define COREFKIT_CONLLU_H_

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "corefkit/document.h"

namespace corefkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string &message);

  int line() const { return line_; }
  const std::string &message() const { return message_; }

 private:
  int line_;
  std::string message_;
};

// Thrown by the writer when a document breaks an invariant.
class InvalidDocument : public std::runtime_error {
 public:
  explicit InvalidDocument(std::vector<std::string> diagnostics);

  const std::vector<std::string> &diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// Non-fatal observations made while reading.
struct ParseReport {
  // Mentions touching empty nodes whose empty-node tokens were removed.
  int empty_node_mentions_trimmed = 0;
  // Mentions made only of empty nodes; dropped.
  int empty_node_mentions_dropped = 0;
  std::vector<std::string> warnings;
};

std::vector<Document> ParseConllu(std::istream &in,
                                  ParseReport *report = nullptr);
std::vector<Document> ParseConlluString(const std::string &text,
                                        ParseReport *report = nullptr);
// Throws std::runtime_error when the file cannot be opened. Parse errors are
// rethrown with the path prepended to the message.
std::vector<Document> ReadConlluFile(const std::string &path,
                                     ParseReport *report = nullptr);

std::string SerializeDocument(const Document &doc);
std::string SerializeCorpus(const std::vector<Document> &docs);
void WriteConlluFile(const std::string &path,
                     const std::vector<Document> &docs);

}  // namespace corefkit

#endif  // COREFKIT_CONLLU_H_
