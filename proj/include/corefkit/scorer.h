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

// Coreference evaluation with head-based partial mention matching.
//
// A system mention s may stand for a gold mention g when every token of s is
// in g and the gold head is among them. Gold and system mentions are paired
// one-to-one, the pairs become shared mention identities, and MUC, B-cubed
// and entity CEAF are computed over the resulting partitions. All counts are
// exact rationals; documents are combined by summing numerators and
// denominators before any ratio is taken.

#ifndef COREFKIT_SCORER_H_
#define COREFKIT_SCORER_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "corefkit/document.h"

namespace corefkit {

using Rational = boost::multiprecision::cpp_rational;

std::vector<Entity> FilterSingletons(std::span<const Entity> entities);

bool Admissible(const Mention &gold, const Mention &sys);

struct MentionRef {
  int entity = 0;
  int mention = 0;

  auto operator<=>(const MentionRef &) const = default;
};

struct MentionAlignment {
  std::vector<std::pair<MentionRef, MentionRef>> pairs;  // (gold, system)
  std::vector<MentionRef> unmatched_gold;
  std::vector<MentionRef> unmatched_sys;
};

// Maximum-cardinality one-to-one matching over admissible pairs. Among
// maximum matchings, exact span matches are preferred, then larger system
// mentions. Remaining ties are broken lexicographically: mentions are put
// in document order ((tokens, head)) and each gold mention, in turn, takes
// the earliest system mention that still allows an optimal matching.
MentionAlignment AlignMentions(std::span<const Entity> gold,
                               std::span<const Entity> sys);

struct MetricScore {
  Rational recall_num = 0;
  Rational recall_den = 0;
  Rational precision_num = 0;
  Rational precision_den = 0;

  Rational recall() const;
  Rational precision() const;
  Rational f1() const;

  MetricScore &operator+=(const MetricScore &other);
  bool operator==(const MetricScore &) const = default;
};

struct EvalReport {
  MetricScore muc;
  MetricScore b3;
  MetricScore ceaf_e;

  Rational conll_f1() const;

  EvalReport &operator+=(const EvalReport &other);
  bool operator==(const EvalReport &) const = default;
};

// Clusters over abstract mention ids.
using Clustering = std::vector<std::vector<int>>;

MetricScore Muc(const Clustering &key, const Clustering &response);
MetricScore BCubed(const Clustering &key, const Clustering &response);
MetricScore CeafE(const Clustering &key, const Clustering &response);
EvalReport ScoreClusterings(const Clustering &key, const Clustering &response);

// Scores one document. Unless keep_singletons is set both sides lose their
// singleton entities first.
EvalReport Evaluate(std::span<const Entity> gold, std::span<const Entity> sys,
                    bool keep_singletons = false);

// Same, after checking that every system mention resolves to a token of the
// gold document. Throws std::invalid_argument otherwise.
EvalReport Evaluate(const Document &gold, const Document &sys,
                    bool keep_singletons = false);

// Micro-averaged over documents paired by position; doc ids must agree.
EvalReport EvaluateCorpus(std::span<const Document> gold,
                          std::span<const Document> sys,
                          bool keep_singletons = false);

// "70.55": value * 100 with two decimals, rounded half up.
std::string FormatPercent2(const Rational &value);

// Human-readable table with one row per metric and a CoNLL F1 footer.
std::string FormatReportTable(const EvalReport &report);
// key=value lines carrying the exact rationals.
std::string FormatReportMachine(const EvalReport &report);
// Inverse of FormatReportMachine; throws std::invalid_argument.
EvalReport ParseReportMachine(const std::string &text);

}  // namespace corefkit

#endif  // COREFKIT_SCORER_H_
