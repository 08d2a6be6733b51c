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

#include "corefkit/corpus_stats.h"

#include <cmath>
#include <cstdio>

#include "corefkit/dep_tree.h"

namespace corefkit {
namespace {

double Percent(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / den;
}

}  // namespace

double CorpusStats::singleton_pct() const {
  return Percent(singleton_entities, entities);
}

double CorpusStats::discontinuous_pct() const {
  return Percent(discontinuous_mentions, mentions);
}

CorpusStats &CorpusStats::operator+=(const CorpusStats &o) {
  docs += o.docs;
  sents += o.sents;
  words += o.words;
  empty += o.empty;
  entities += o.entities;
  singleton_entities += o.singleton_entities;
  mentions += o.mentions;
  discontinuous_mentions += o.discontinuous_mentions;
  return *this;
}

CorpusStats ComputeStats(std::span<const Document> corpus) {
  CorpusStats stats;
  for (const Document &doc : corpus) {
    ++stats.docs;
    stats.sents += static_cast<std::int64_t>(doc.sentences.size());
    for (const Sentence &s : doc.sentences) {
      for (const Token &t : s.tokens) {
        if (t.id.is_empty_node()) {
          ++stats.empty;
        } else {
          ++stats.words;
        }
      }
    }
    for (const Entity &e : doc.entities) {
      ++stats.entities;
      if (e.is_singleton()) ++stats.singleton_entities;
      for (const Mention &m : e.mentions) {
        ++stats.mentions;
        if (IsDiscontinuous(m)) ++stats.discontinuous_mentions;
      }
    }
  }
  return stats;
}

std::string FormatPercent(double pct) {
  // Half up at one decimal; the epsilon absorbs binary representation error
  // of values like 0.05.
  const double rounded = std::floor(pct * 10.0 + 0.5 + 1e-9) / 10.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", rounded);
  return buf;
}

std::string StatsHeader() {
  return "name\tdocs\tsents\twords\tempty\tsingletons\tdiscont.";
}

std::string StatsRow(const std::string &name, const CorpusStats &s) {
  return name + "\t" + std::to_string(s.docs) + "\t" + std::to_string(s.sents) +
         "\t" + std::to_string(s.words) + "\t" + std::to_string(s.empty) +
         "\t" + FormatPercent(s.singleton_pct()) + "%\t" +
         FormatPercent(s.discontinuous_pct()) + "%";
}

}  // namespace corefkit
