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

// Document windowing. A document of more than max_segments *
// segment_length tokens is cut to a random block of whole segments for
// training, and into consecutive independent pieces for prediction.
// Document-level helpers move cuts back to the nearest sentence boundary so
// that sentences stay whole whenever one fits in the budget.

#ifndef COREFKIT_SEGMENTER_H_
#define COREFKIT_SEGMENTER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "corefkit/document.h"

namespace corefkit {

struct SegmentWindow {
  int start = 0;   // global regular-token offset
  int length = 0;

  int end() const { return start + length; }
  bool operator==(const SegmentWindow &) const = default;
};

// Token-count window; start is a multiple of segment_length.
SegmentWindow SampleTrainingWindow(int doc_length, int segment_length,
                                   int max_segments, std::uint64_t seed);

// Consecutive windows of max_segments * segment_length tokens (the last
// one shorter) covering [0, doc_length).
std::vector<SegmentWindow> PlanPredictionSplits(int doc_length,
                                                int segment_length,
                                                int max_segments);

// Sentence-aware variants. `boundaries` holds the first-token offset of every
// sentence plus the total length at the end (TokenIndex::sentence_starts()).
SegmentWindow SnapToSentences(std::span<const int> boundaries,
                              SegmentWindow raw, int budget);
std::vector<SegmentWindow> PlanPredictionSplits(std::span<const int> boundaries,
                                                int segment_length,
                                                int max_segments);

// A window cut out of a document, renumbered from scratch.
struct SubDocument {
  Document doc;
  SegmentWindow window;
  // Original id of each regular token of `doc`, in reading order.
  std::vector<TokenId> origin;
  // Position in `origin` of the first token of each local sentence.
  std::vector<int> sentence_starts;
  // Mentions that straddled the window edge and were removed.
  int dropped_mentions = 0;

  TokenId Original(const TokenId &local) const;
};

// Copies the tokens of `window`. Sentences cut by the window keep only the
// covered tokens, and edges leaving the window are reattached to ROOT.
// Mentions not fully inside are dropped; entities keep their surviving
// mentions.
SubDocument ExtractWindow(const Document &doc, SegmentWindow window);

SubDocument SampleTrainingDocument(const Document &doc, int segment_length,
                                   int max_segments, std::uint64_t seed);

struct SplitResult {
  std::vector<SubDocument> parts;
  int dropped_mentions = 0;
};

SplitResult SplitForPrediction(const Document &doc, int segment_length,
                               int max_segments);

}  // namespace corefkit

#endif  // COREFKIT_SEGMENTER_H_
