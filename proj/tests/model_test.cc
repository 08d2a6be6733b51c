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


#include "corefkit/model.h"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "corefkit/conllu.h"
#include "corefkit/dep_tree.h"
#include "corefkit/gradient_check.h"
#include "testing/testing.h"

namespace corefkit {
namespace {

Document Fixture() {
  return ReadConlluFile(std::string(COREFKIT_TEST_DATA) + "/f1.conllu")[0];
}

HyperParams Small() {
  HyperParams hp;
  hp.token_dim = 6;
  hp.deprel_dim = 3;
  hp.hidden_dim = 5;
  hp.width_dim = 3;
  hp.form_buckets = 64;
  hp.max_span_width = 4;
  return hp;
}

struct Forward {
  WindowInput in;
  EncodedWindow enc;
  SpanSet spans;
  std::vector<AntecedentFrame> frames;
};

Forward RunForward(const Document &doc, const ModelParams &params) {
  Forward f;
  f.in = PrepareWindow(doc, params.hp());
  f.enc = EncodeTokens(f.in, params);
  f.spans = EnumerateSpans(f.in, f.enc, params);
  f.frames = AntecedentDistribution(f.in, f.spans, params);
  AssignGold(f.in, f.spans, &f.frames);
  return f;
}

Document TwoWordCoreference() {
  Document doc = testing::MakeFlatDocument("two", 2);
  Entity e;
  e.id = "e1";
  for (int w : {1, 2}) {
    Mention m;
    m.tokens = {{0, w, 0}};
    m.head = m.tokens[0];
    e.mentions.push_back(m);
  }
  doc.entities = {e};
  return doc;
}

TEST(PrepareWindowTest, FixtureGold) {
  HyperParams hp = Small();
  hp.tree_depth = 2;
  const WindowInput in = PrepareWindow(Fixture(), hp);
  EXPECT_EQ(in.size(), 8);
  EXPECT_EQ(in.sentence_starts, (std::vector<int>{0, 5, 8}));
  EXPECT_EQ(in.tree_ancestor.size(), 16u);
  EXPECT_EQ(in.skipped_gold, 0);
  bool found = false;
  for (const GoldSpan &g : in.gold) {
    if (g.start == 2 && g.end == 4) {
      EXPECT_EQ(g.head_offset, 2);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(PrepareWindowTest, SkipsTooWideMentions) {
  HyperParams hp = Small();
  hp.max_span_width = 2;
  EXPECT_EQ(PrepareWindow(Fixture(), hp).skipped_gold, 1);
}

TEST(EnumerateSpansTest, CountsCandidatesWithinWidth) {
  HyperParams hp = Small();
  hp.max_span_width = 2;
  hp.prune_ratio = 1.0;
  const ModelParams params = ModelParams::Random(hp, 1);
  const Forward f = RunForward(testing::MakeFlatDocument("five", 5), params);
  EXPECT_EQ(f.spans.spans.size(), 9u);
  EXPECT_EQ(f.spans.retained.size(), 9u);
  EXPECT_EQ(f.spans.Find(3, 4), 7);
  EXPECT_EQ(f.spans.Find(0, 2), -1);
}

TEST(EnumerateSpansTest, SpansStayInsideSentences) {
  HyperParams hp = Small();
  const Forward f = RunForward(Fixture(), ModelParams::Random(hp, 1));
  // Sentences of 5 and 3 words with width 4: 14 + 6 candidates.
  EXPECT_EQ(f.spans.spans.size(), 20u);
  for (const SpanCandidate &c : f.spans.spans) {
    EXPECT_EQ(f.in.sentence[c.start], f.in.sentence[c.end]);
  }
}

TEST(EnumerateSpansTest, KeepsTheBestScored) {
  HyperParams hp = Small();
  hp.prune_ratio = 0.4;
  const Forward f = RunForward(Fixture(), ModelParams::Random(hp, 2));
  ASSERT_EQ(f.spans.retained.size(), 4u);  // ceil(0.4 * 8)
  EXPECT_TRUE(std::is_sorted(f.spans.retained.begin(), f.spans.retained.end()));
  double worst_kept = 1e300;
  for (int r : f.spans.retained) {
    worst_kept = std::min(worst_kept, f.spans.spans[r].mention_score);
  }
  for (std::size_t n = 0; n < f.spans.spans.size(); ++n) {
    if (std::find(f.spans.retained.begin(), f.spans.retained.end(),
                  static_cast<int>(n)) == f.spans.retained.end()) {
      EXPECT_LE(f.spans.spans[n].mention_score, worst_kept);
    }
  }
}

TEST(RetainedCountTest, Examples) {
  EXPECT_EQ(RetainedCount(100, 1000, 0.4), 40);
  EXPECT_EQ(RetainedCount(101, 1000, 0.4), 41);
  EXPECT_EQ(RetainedCount(100, 30, 0.4), 30);
  EXPECT_EQ(RetainedCount(100, 1000, 1.0), 1000);
  EXPECT_EQ(RetainedCount(3, 6, 0.5), 2);
}

TEST(AntecedentTest, FirstSpanOnlyHasTheDummy) {
  HyperParams hp = Small();
  hp.prune_ratio = 1.0;
  const Forward f = RunForward(Fixture(), ModelParams::Random(hp, 3));
  ASSERT_FALSE(f.frames.empty());
  EXPECT_EQ(f.frames[0].candidates, (std::vector<int>{kDummyAntecedent}));
  EXPECT_DOUBLE_EQ(f.frames[0].probs[0], 1.0);
  for (const AntecedentFrame &frame : f.frames) {
    EXPECT_EQ(frame.scores[0], 0.0);
    EXPECT_NEAR(std::accumulate(frame.probs.begin(), frame.probs.end(), 0.0),
                1.0, 1e-12);
    // Nearest candidate first.
    for (std::size_t c = 2; c < frame.candidates.size(); ++c) {
      EXPECT_LT(frame.candidates[c], frame.candidates[c - 1]);
    }
    for (std::size_t c = 1; c < frame.candidates.size(); ++c) {
      EXPECT_LT(frame.candidates[c], frame.span);
    }
  }
}

TEST(AntecedentTest, ZeroWeightsGiveUniformProbabilities) {
  HyperParams hp = Small();
  hp.max_span_width = 1;
  hp.prune_ratio = 1.0;
  const ModelParams zero(hp);
  const Forward f = RunForward(TwoWordCoreference(), zero);
  ASSERT_EQ(f.frames.size(), 2u);
  EXPECT_EQ(f.frames[1].probs, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(f.frames[1].gold_mask, (std::vector<char>{0, 1}));
  EXPECT_EQ(f.frames[0].gold_mask, (std::vector<char>{1}));
  EXPECT_DOUBLE_EQ(FrameLoss(f.frames[0]), 0.0);
  EXPECT_NEAR(FrameLoss(f.frames[1]), std::log(2.0), 1e-12);
  const LossResult loss = ComputeLoss(f.in, zero, nullptr);
  EXPECT_NEAR(loss.coref, 0.6931, 1e-4);
  EXPECT_EQ(loss.frames, 2);
}

TEST(AntecedentTest, CandidateListIsTruncated) {
  HyperParams hp = Small();
  hp.prune_ratio = 1.0;
  hp.max_antecedents = 1;
  const Forward f = RunForward(Fixture(), ModelParams::Random(hp, 4));
  for (std::size_t r = 0; r < f.frames.size(); ++r) {
    EXPECT_EQ(f.frames[r].candidates.size(), r == 0 ? 1u : 2u);
  }
}

TEST(AntecedentTest, ShiftingScoresKeepsTheLoss) {
  HyperParams hp = Small();
  hp.prune_ratio = 1.0;
  Forward f = RunForward(Fixture(), ModelParams::Random(hp, 5));
  for (AntecedentFrame &frame : f.frames) {
    const double before = FrameLoss(frame);
    for (double &s : frame.scores) s += 3.5;
    EXPECT_NEAR(FrameLoss(frame), before, 1e-9);
    EXPECT_GE(before, 0.0);
  }
}

TEST(ComputeLossTest, NonNegativeAndDeterministic) {
  for (HeadVariant v : {HeadVariant::kOff, HeadVariant::kPositional,
                        HeadVariant::kPairwise}) {
    HyperParams hp = Small();
    hp.head_variant = v;
    hp.tree_depth = 2;
    const ModelParams params = ModelParams::Random(hp, 6);
    const WindowInput in = PrepareWindow(Fixture(), hp);
    ModelParams g1(hp), g2(hp);
    const LossResult a = ComputeLoss(in, params, &g1);
    const LossResult b = ComputeLoss(in, params, &g2);
    EXPECT_GE(a.coref, 0.0);
    EXPECT_GE(a.head, 0.0);
    EXPECT_EQ(a.total, b.total);
    EXPECT_EQ(g1, g2);
    EXPECT_NEAR(a.total, a.coref + hp.head_loss_weight * a.head, 1e-12);
    if (v == HeadVariant::kOff) EXPECT_EQ(a.head, 0.0);
  }
}

TEST(GradientTest, MatchesFiniteDifferences) {
  for (HeadVariant v : {HeadVariant::kOff, HeadVariant::kPositional,
                        HeadVariant::kPairwise}) {
    for (int depth : {0, 2}) {
      HyperParams hp = Small();
      hp.head_variant = v;
      hp.tree_depth = depth;
      hp.prune_ratio = 1.0;
      const ModelParams params = ModelParams::Random(hp, 7);
      for (bool nonzero : {false, true}) {
        GradientCheckOptions opt;
        opt.seed = 11;
        opt.nonzero_only = nonzero;
        const GradientCheckReport r = CheckGradients(Fixture(), params, opt);
        EXPECT_EQ(r.coords.size(), 100u);
        EXPECT_LT(r.max_rel_error, 1e-3)
            << ToString(v) << " depth " << depth << " nonzero " << nonzero;
      }
    }
  }
}

TEST(GradientTest, RelativeError) {
  EXPECT_DOUBLE_EQ(RelativeError(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(RelativeError(1.0, -1.0), 1.0);
  EXPECT_DOUBLE_EQ(RelativeError(0.0, 0.0), 0.0);
}

TEST(HeadLossTest, UniformLogits) {
  const std::vector<double> logits = {0.0, 0.0};
  std::vector<double> d;
  EXPECT_NEAR(HeadLoss(logits, 0, &d), std::log(2.0), 1e-12);
  EXPECT_NEAR(d[0], -0.25, 1e-12);
  EXPECT_NEAR(d[1], 0.25, 1e-12);
  EXPECT_THROW(HeadLoss(logits, 2), std::invalid_argument);
  EXPECT_THROW(HeadLoss(logits, -1), std::invalid_argument);
}

TEST(HeadLossTest, ConfidentCorrectLogitsCostLittle) {
  const std::vector<double> logits = {-20.0, 20.0, -20.0};
  EXPECT_LT(HeadLoss(logits, 1), 1e-8);
  EXPECT_GT(HeadLoss(logits, 0), 10.0);
}

TEST(SelectHeadsTest, ThresholdAndFallback) {
  EXPECT_EQ(SelectHeads(std::vector<double>{0.9, 0.7, 0.1}, 0.5),
            (std::vector<int>{0, 1}));
  EXPECT_EQ(SelectHeads(std::vector<double>{0.2, 0.4, 0.1}, 0.5),
            (std::vector<int>{1}));
  EXPECT_EQ(SelectHeads(std::vector<double>{0.3}, 0.5), (std::vector<int>{0}));
  EXPECT_TRUE(SelectHeads(std::vector<double>{}, 0.5).empty());
}

TEST(PredictHeadsTest, OneProbabilityPerPosition) {
  for (HeadVariant v : {HeadVariant::kPositional, HeadVariant::kPairwise}) {
    HyperParams hp = Small();
    hp.head_variant = v;
    hp.prune_ratio = 1.0;
    const ModelParams params = ModelParams::Random(hp, 8);
    const Forward f = RunForward(Fixture(), params);
    for (std::size_t n = 0; n < f.spans.spans.size(); ++n) {
      const HeadPrediction p =
          PredictHeads(f.spans, static_cast<int>(n), f.enc, params);
      ASSERT_EQ(static_cast<int>(p.probs.size()), f.spans.spans[n].width());
      EXPECT_FALSE(p.heads.empty());
      EXPECT_GE(p.best, 0);
      EXPECT_LT(p.best, f.spans.spans[n].width());
      if (f.spans.spans[n].width() == 1) EXPECT_EQ(p.best, 0);
    }
  }
}

TEST(ModelParamsTest, TreeWidths) {
  EXPECT_EQ(TreeFeatureWidth(3, 8, 4), 36);
  HyperParams hp;
  hp.token_dim = 8;
  hp.deprel_dim = 4;
  hp.width_dim = 2;
  hp.tree_depth = 3;
  EXPECT_EQ(hp.token_rep_width(), 44);
  EXPECT_EQ(hp.span_rep_width(), 134);
  EXPECT_EQ(hp.pair_input_width(), 404);
}

TEST(ModelParamsTest, RandomIsDeterministicAndFloatExact) {
  const HyperParams hp = Small();
  const ModelParams a = ModelParams::Random(hp, 9);
  EXPECT_EQ(a, ModelParams::Random(hp, 9));
  EXPECT_NE(a, ModelParams::Random(hp, 10));
  for (double v : a.values()) {
    EXPECT_EQ(v, static_cast<double>(static_cast<float>(v)));
  }
}

TEST(ModelParamsTest, Vocabularies) {
  EXPECT_EQ(UposIndex("ADJ"), 1);
  EXPECT_EQ(UposIndex("BOGUS"), 0);
  EXPECT_EQ(DeprelIndex("nmod:poss"), DeprelIndex("nmod"));
  EXPECT_EQ(DeprelIndex("whatever"), 1);
  EXPECT_EQ(DistanceBucket(0), 0);
  EXPECT_EQ(DistanceBucket(4), 4);
  EXPECT_EQ(DistanceBucket(7), 5);
  EXPECT_EQ(DistanceBucket(8), 6);
  EXPECT_EQ(DistanceBucket(64), 9);
  EXPECT_EQ(DistanceBucket(100000), 9);
  EXPECT_EQ(FormBucket("dog", 64), FormBucket("dog", 64));
  EXPECT_THROW(ParseHeadVariant("both"), std::invalid_argument);
  EXPECT_EQ(ParseHeadVariant(ToString(HeadVariant::kPairwise)),
            HeadVariant::kPairwise);
}

TEST(ModelParamsTest, ValidateNamesTheField) {
  HyperParams hp;
  hp.prune_ratio = 0;
  try {
    hp.Validate();
    FAIL();
  } catch (const std::invalid_argument &e) {
    EXPECT_NE(std::string(e.what()).find("prune_ratio"), std::string::npos);
  }
}

}  // namespace
}  // namespace corefkit
