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

#ifndef COREFKIT_CORPUS_STATS_H_
#define COREFKIT_CORPUS_STATS_H_

#include <cstdint>
#include <span>
#include <string>

#include "corefkit/document.h"

namespace corefkit {

// Treebank size summary. Raw counts are kept so that shards can be summed;
// the percentages are derived from them.
struct CorpusStats {
  std::int64_t docs = 0;
  std::int64_t sents = 0;
  std::int64_t words = 0;  // regular tokens
  std::int64_t empty = 0;  // empty nodes
  std::int64_t entities = 0;
  std::int64_t singleton_entities = 0;
  std::int64_t mentions = 0;
  std::int64_t discontinuous_mentions = 0;

  // Share of entities with a single mention, 0 for an empty corpus.
  double singleton_pct() const;
  // Share of mentions that are not one run of tokens in one sentence.
  double discontinuous_pct() const;

  CorpusStats &operator+=(const CorpusStats &other);
  bool operator==(const CorpusStats &) const = default;
};

CorpusStats ComputeStats(std::span<const Document> corpus);

// Percentage with one decimal, rounded half up ("6.1").
std::string FormatPercent(double pct);

// Tab-separated header and row: docs sents words empty singletons discont.
std::string StatsHeader();
std::string StatsRow(const std::string &name, const CorpusStats &stats);

}  // namespace corefkit

#endif  // COREFKIT_CORPUS_STATS_H_
