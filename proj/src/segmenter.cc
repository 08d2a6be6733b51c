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

#include "corefkit/segmenter.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "corefkit/random.h"

namespace corefkit {
namespace {

void CheckShape(int segment_length, int max_segments) {
  if (segment_length < 1 || max_segments < 1) {
    throw std::invalid_argument("segment length and count must be positive");
  }
}

// Largest boundary b with lo < b <= hi, or hi when there is none.
int BoundaryAtOrBelow(std::span<const int> boundaries, int lo, int hi) {
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), hi);
  if (it != boundaries.begin()) {
    int b = *(it - 1);
    if (b > lo) return b;
  }
  return hi;
}

}  // namespace

SegmentWindow SampleTrainingWindow(int doc_length, int segment_length,
                                   int max_segments, std::uint64_t seed) {
  CheckShape(segment_length, max_segments);
  if (doc_length < 1) throw std::invalid_argument("empty document");
  const int budget = segment_length * max_segments;
  if (doc_length <= budget) return {0, doc_length};
  const std::uint64_t offsets = (doc_length - budget) / segment_length + 1;
  std::mt19937_64 rng = MakeRng({seed});
  const int k = static_cast<int>(UniformBelow(rng, offsets));
  return {k * segment_length, budget};
}

std::vector<SegmentWindow> PlanPredictionSplits(int doc_length,
                                                int segment_length,
                                                int max_segments) {
  CheckShape(segment_length, max_segments);
  const int budget = segment_length * max_segments;
  std::vector<SegmentWindow> out;
  for (int start = 0; start < doc_length; start += budget) {
    out.push_back({start, std::min(budget, doc_length - start)});
  }
  return out;
}

SegmentWindow SnapToSentences(std::span<const int> boundaries,
                              SegmentWindow raw, int budget) {
  const int total = boundaries.empty() ? raw.end() : boundaries.back();
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), raw.start);
  const int start = it == boundaries.begin() ? raw.start : *(it - 1);
  const int limit = std::min(start + budget, total);
  const int end = BoundaryAtOrBelow(boundaries, start, limit);
  return {start, end - start};
}

std::vector<SegmentWindow> PlanPredictionSplits(std::span<const int> boundaries,
                                                int segment_length,
                                                int max_segments) {
  CheckShape(segment_length, max_segments);
  const int budget = segment_length * max_segments;
  const int total = boundaries.empty() ? 0 : boundaries.back();
  std::vector<SegmentWindow> out;
  for (int start = 0; start < total;) {
    const int end =
        BoundaryAtOrBelow(boundaries, start, std::min(start + budget, total));
    out.push_back({start, end - start});
    start = end;
  }
  return out;
}

TokenId SubDocument::Original(const TokenId &local) const {
  if (local.sentence < 0 ||
      local.sentence + 1 >= static_cast<int>(sentence_starts.size())) {
    throw std::out_of_range("token outside sub-document: " + ToString(local));
  }
  const int pos = sentence_starts[local.sentence] + local.word - 1;
  if (local.word < 1 || pos >= sentence_starts[local.sentence + 1]) {
    throw std::out_of_range("token outside sub-document: " + ToString(local));
  }
  return origin[pos];
}

SubDocument ExtractWindow(const Document &doc, SegmentWindow window) {
  const TokenIndex index(doc);
  const auto &starts = index.sentence_starts();
  const int begin = std::max(0, window.start);
  const int end = std::min(index.size(), window.end());

  SubDocument out;
  out.window = {begin, std::max(0, end - begin)};
  out.doc.doc_id = doc.doc_id;
  // Original id -> local id, regular tokens only.
  std::map<TokenId, TokenId> local;

  for (int s = 0; s + 1 < static_cast<int>(starts.size()); ++s) {
    const int lo = std::max(begin, starts[s]);
    const int hi = std::min(end, starts[s + 1]);
    if (lo >= hi) continue;
    const Sentence &src = doc.sentences[s];
    const int first_word = lo - starts[s] + 1;
    const int last_word = hi - starts[s];
    const bool whole = lo == starts[s] && hi == starts[s + 1];
    const int offset = first_word - 1;
    const int ls = static_cast<int>(out.doc.sentences.size());

    Sentence dst;
    if (lo == starts[s]) dst.comments = src.comments;
    if (whole) dst.multiword_tokens = src.multiword_tokens;
    out.sentence_starts.push_back(static_cast<int>(out.origin.size()));
    for (const Token &t : src.tokens) {
      const int w = t.id.word;
      if (t.id.is_empty_node() ? (w < first_word - (whole ? 1 : 0) ||
                                  w > last_word)
                               : (w < first_word || w > last_word)) {
        continue;
      }
      Token copy = t;
      copy.id = {ls, w - offset, t.id.empty};
      if (t.parent) {
        const int pw = t.parent->word;
        if (pw < first_word || pw > last_word) {
          copy.parent.reset();
        } else {
          copy.parent = TokenId{ls, pw - offset, 0};
        }
      }
      if (!t.id.is_empty_node()) {
        local[t.id] = copy.id;
        out.origin.push_back(t.id);
      }
      dst.tokens.push_back(std::move(copy));
    }
    out.doc.sentences.push_back(std::move(dst));
  }
  out.sentence_starts.push_back(static_cast<int>(out.origin.size()));

  for (const Entity &e : doc.entities) {
    Entity kept;
    kept.id = e.id;
    for (const Mention &m : e.mentions) {
      int inside = 0;
      for (const TokenId &id : m.tokens) inside += local.count(id) ? 1 : 0;
      if (inside == 0) continue;
      if (inside < static_cast<int>(m.tokens.size())) {
        ++out.dropped_mentions;
        continue;
      }
      Mention copy = m;
      for (TokenId &id : copy.tokens) id = local.at(id);
      copy.head = local.at(m.head);
      kept.mentions.push_back(std::move(copy));
    }
    if (!kept.mentions.empty()) out.doc.entities.push_back(std::move(kept));
  }
  return out;
}

SubDocument SampleTrainingDocument(const Document &doc, int segment_length,
                                   int max_segments, std::uint64_t seed) {
  const TokenIndex index(doc);
  if (index.size() == 0) return ExtractWindow(doc, {0, 0});
  const SegmentWindow raw =
      SampleTrainingWindow(index.size(), segment_length, max_segments, seed);
  return ExtractWindow(doc, SnapToSentences(index.sentence_starts(), raw,
                                            segment_length * max_segments));
}

SplitResult SplitForPrediction(const Document &doc, int segment_length,
                               int max_segments) {
  const TokenIndex index(doc);
  SplitResult result;
  const int budget = segment_length * max_segments;
  if (index.size() <= budget) {
    CheckShape(segment_length, max_segments);
    SubDocument whole;
    whole.doc = doc;
    whole.window = {0, index.size()};
    for (int i = 0; i < index.size(); ++i) whole.origin.push_back(index.id(i));
    whole.sentence_starts = index.sentence_starts();
    result.parts.push_back(std::move(whole));
    return result;
  }
  const std::vector<SegmentWindow> windows = PlanPredictionSplits(
      index.sentence_starts(), segment_length, max_segments);
  for (const SegmentWindow &w : windows) {
    result.parts.push_back(ExtractWindow(doc, w));
  }
  // A mention is lost once, however many parts it touches.
  auto part_of = [&](const TokenId &id) {
    const int pos = index.position(id);
    int k = 0;
    while (pos >= windows[k].end()) ++k;
    return k;
  };
  for (const Entity &e : doc.entities) {
    for (const Mention &m : e.mentions) {
      if (!m.tokens.empty() &&
          part_of(m.tokens.front()) != part_of(m.tokens.back())) {
        ++result.dropped_mentions;
      }
    }
  }
  return result;
}

}  // namespace corefkit
