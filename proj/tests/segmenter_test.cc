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

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "testing/testing.h"

namespace corefkit {
namespace {

// Flat sentences of the given lengths, renumbered into one document.
Document MultiSentenceDocument(const std::vector<int> &lengths) {
  Document doc;
  doc.doc_id = "multi";
  for (std::size_t s = 0; s < lengths.size(); ++s) {
    Sentence sent = testing::MakeFlatDocument("x", lengths[s]).sentences[0];
    for (Token &t : sent.tokens) {
      t.id.sentence = static_cast<int>(s);
      if (t.parent) t.parent->sentence = static_cast<int>(s);
    }
    doc.sentences.push_back(std::move(sent));
  }
  return doc;
}

Mention Single(int sentence, int word) {
  Mention m;
  m.tokens = {{sentence, word, 0}};
  m.head = m.tokens[0];
  return m;
}

TEST(SampleTrainingWindowTest, LongDocumentGetsWholeSegments) {
  std::set<int> starts;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SegmentWindow w = SampleTrainingWindow(4000, 512, 6, seed);
    EXPECT_EQ(w.length, 3072);
    starts.insert(w.start);
  }
  EXPECT_EQ(starts, (std::set<int>{0, 512}));
}

TEST(SampleTrainingWindowTest, ShortDocumentIsKept) {
  EXPECT_EQ(SampleTrainingWindow(100, 512, 6, 7), (SegmentWindow{0, 100}));
  EXPECT_EQ(SampleTrainingWindow(3072, 512, 6, 7), (SegmentWindow{0, 3072}));
}

TEST(SampleTrainingWindowTest, IsDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(SampleTrainingWindow(9000, 100, 3, seed),
              SampleTrainingWindow(9000, 100, 3, seed));
  }
}

TEST(SampleTrainingWindowTest, RejectsBadShapes) {
  EXPECT_THROW(SampleTrainingWindow(10, 0, 6, 1), std::invalid_argument);
  EXPECT_THROW(SampleTrainingWindow(10, 512, 0, 1), std::invalid_argument);
  EXPECT_THROW(SampleTrainingWindow(0, 512, 6, 1), std::invalid_argument);
}

TEST(PlanPredictionSplitsTest, LongDocument) {
  EXPECT_EQ(PlanPredictionSplits(4000, 512, 6),
            (std::vector<SegmentWindow>{{0, 3072}, {3072, 928}}));
}

TEST(PlanPredictionSplitsTest, ShortDocumentIsOnePart) {
  EXPECT_EQ(PlanPredictionSplits(100, 512, 6),
            (std::vector<SegmentWindow>{{0, 100}}));
  EXPECT_TRUE(PlanPredictionSplits(0, 512, 6).empty());
}

TEST(PlanPredictionSplitsTest, SentenceAwareCutsAtBoundaries) {
  const std::vector<int> boundaries = {0, 4, 9, 12, 20};
  EXPECT_EQ(PlanPredictionSplits(boundaries, 5, 2),
            (std::vector<SegmentWindow>{{0, 9}, {9, 3}, {12, 8}}));
  // A sentence longer than the budget is cut inside.
  const std::vector<int> one = {0, 25};
  EXPECT_EQ(PlanPredictionSplits(one, 5, 2),
            (std::vector<SegmentWindow>{{0, 10}, {10, 10}, {20, 5}}));
}

TEST(SnapToSentencesTest, MovesStartBackAndEndBack) {
  const std::vector<int> boundaries = {0, 4, 9, 12, 20};
  EXPECT_EQ(SnapToSentences(boundaries, {5, 6}, 6), (SegmentWindow{4, 5}));
  EXPECT_EQ(SnapToSentences(boundaries, {0, 20}, 20), (SegmentWindow{0, 20}));
}

TEST(SplitForPredictionTest, FlatDocumentSplitsByTokens) {
  const Document doc = testing::MakeFlatDocument("long", 4000);
  const SplitResult split = SplitForPrediction(doc, 512, 6);
  ASSERT_EQ(split.parts.size(), 2u);
  EXPECT_EQ(split.parts[0].window, (SegmentWindow{0, 3072}));
  EXPECT_EQ(split.parts[1].window, (SegmentWindow{3072, 928}));
  EXPECT_EQ(split.parts[0].doc.word_count(), 3072);
  EXPECT_EQ(split.parts[1].doc.word_count(), 928);
  // Words past the cut point at ROOT when their parent is on the other side.
  for (const Token &t : split.parts[1].doc.sentences[0].tokens) {
    EXPECT_FALSE(t.parent.has_value());
  }
  EXPECT_EQ(split.parts[1].Original({0, 1, 0}), (TokenId{0, 3073, 0}));
}

TEST(SplitForPredictionTest, ShortDocumentIsReturnedWhole) {
  const Document doc = testing::MakeSyntheticCorpus(1, 3)[0];
  const SplitResult split = SplitForPrediction(doc, 512, 6);
  ASSERT_EQ(split.parts.size(), 1u);
  EXPECT_EQ(split.parts[0].doc, doc);
  EXPECT_EQ(split.dropped_mentions, 0);
}

TEST(SplitForPredictionTest, EntityAcrossCutBecomesTwo) {
  Document doc = testing::MakeFlatDocument("long", 4000);
  Entity e;
  e.id = "e1";
  e.mentions = {Single(0, 10), Single(0, 3500)};
  doc.entities = {e};
  const SplitResult split = SplitForPrediction(doc, 512, 6);
  ASSERT_EQ(split.parts.size(), 2u);
  for (const SubDocument &part : split.parts) {
    ASSERT_EQ(part.doc.entities.size(), 1u);
    EXPECT_EQ(part.doc.entities[0].mentions.size(), 1u);
  }
  EXPECT_EQ(split.parts[1].doc.entities[0].mentions[0].head,
            (TokenId{0, 3500 - 3072, 0}));
}

TEST(SplitForPredictionTest, StraddlingMentionIsDropped) {
  Document doc = testing::MakeFlatDocument("long", 4000);
  Entity e;
  e.id = "e1";
  Mention m;
  m.tokens = {{0, 3072, 0}, {0, 3073, 0}};
  m.head = m.tokens[0];
  e.mentions = {m, Single(0, 5)};
  doc.entities = {e};
  const SplitResult split = SplitForPrediction(doc, 512, 6);
  EXPECT_EQ(split.dropped_mentions, 1);
}

TEST(SampleTrainingDocumentTest, KeepsWholeSentences) {
  const Document doc = MultiSentenceDocument({40, 40, 40, 40, 40});
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SubDocument sub = SampleTrainingDocument(doc, 30, 3, seed);
    EXPECT_LE(sub.window.length, 90);
    EXPECT_EQ(sub.window.start % 40, 0);
    EXPECT_EQ(sub.window.length % 40, 0);
    for (const Sentence &s : sub.doc.sentences) EXPECT_EQ(s.size(), 40);
  }
}

TEST(SegmenterPropertyTest, RandomShapes) {
  std::mt19937_64 rng(20261014);
  for (int c = 0; c < 1000; ++c) {
    const int n = 1 + static_cast<int>(rng() % 20000);
    const int length = 1 + static_cast<int>(rng() % 600);
    const int segments = 1 + static_cast<int>(rng() % 8);
    const int budget = length * segments;

    const SegmentWindow w = SampleTrainingWindow(n, length, segments, rng());
    EXPECT_GE(w.start, 0);
    EXPECT_LE(w.end(), n);
    EXPECT_EQ(w.start % length, 0);
    EXPECT_EQ(w.length, std::min(n, budget));

    int next = 0;
    for (const SegmentWindow &p : PlanPredictionSplits(n, length, segments)) {
      EXPECT_EQ(p.start, next);
      EXPECT_GT(p.length, 0);
      EXPECT_LE(p.length, budget);
      next = p.end();
    }
    EXPECT_EQ(next, n);

    // Sentence-aware plan over random sentence lengths.
    std::vector<int> boundaries = {0};
    while (boundaries.back() < n) {
      boundaries.push_back(
          std::min(n, boundaries.back() + 1 + static_cast<int>(rng() % 80)));
    }
    const std::set<int> cuts(boundaries.begin(), boundaries.end());
    next = 0;
    for (const SegmentWindow &p :
         PlanPredictionSplits(boundaries, length, segments)) {
      EXPECT_EQ(p.start, next);
      EXPECT_GT(p.length, 0);
      EXPECT_LE(p.length, budget);
      // Cuts land on sentence ends unless the sentence overflows the budget.
      if (!cuts.count(p.end())) EXPECT_EQ(p.length, budget);
      next = p.end();
    }
    EXPECT_EQ(next, n);
  }
}

}  // namespace
}  // namespace corefkit
