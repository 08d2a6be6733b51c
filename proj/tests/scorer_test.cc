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


#include "corefkit/scorer.h"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "corefkit/conllu.h"
#include "testing/testing.h"

namespace corefkit {
namespace {

Mention Span(std::vector<int> words, int head) {
  Mention m;
  for (int w : words) m.tokens.push_back({0, w, 0});
  m.head = {0, head, 0};
  return m;
}

Entity MakeEntity(const std::string &id, std::vector<Mention> mentions) {
  Entity e;
  e.id = id;
  e.mentions = std::move(mentions);
  return e;
}

// Gold K1 = {m1, m2, m3}, K2 = {m4, m5}; system R1 = {m1, m2},
// R2 = {m3, m4}, R3 = {m5}. Mention mi is the single word i.
testing::Instance HandInstance() {
  auto m = [](int i) { return Span({i}, i); };
  testing::Instance inst;
  inst.gold = {MakeEntity("K1", {m(1), m(2), m(3)}),
               MakeEntity("K2", {m(4), m(5)})};
  inst.sys = {MakeEntity("R1", {m(1), m(2)}), MakeEntity("R2", {m(3), m(4)}),
              MakeEntity("R3", {m(5)})};
  return inst;
}

void ExpectMatchesOracle(const EvalReport &r,
                         const testing::OracleScores &o) {
  const MetricScore *metrics[3] = {&r.muc, &r.b3, &r.ceaf_e};
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(metrics[k]->recall(), o.recall[k]) << "metric " << k;
    EXPECT_EQ(metrics[k]->precision(), o.precision[k]) << "metric " << k;
    EXPECT_EQ(metrics[k]->f1(), o.f1[k]) << "metric " << k;
  }
}

TEST(AdmissibleTest, SubsetContainingTheHead) {
  const Mention gold = Span({5, 6, 7}, 6);
  EXPECT_TRUE(Admissible(gold, Span({6, 7}, 7)));
  EXPECT_TRUE(Admissible(gold, Span({6}, 6)));
  EXPECT_TRUE(Admissible(gold, gold));
  EXPECT_FALSE(Admissible(gold, Span({5, 7}, 5)));
  EXPECT_FALSE(Admissible(gold, Span({5, 6, 7, 8}, 6)));
  EXPECT_FALSE(Admissible(gold, Span({7}, 7)));
}

TEST(FilterSingletonsTest, DropsOneMentionEntities) {
  const std::vector<Entity> in = {MakeEntity("a", {Span({1}, 1)}),
                                  MakeEntity("b", {Span({2}, 2), Span({3}, 3)})};
  const std::vector<Entity> out = FilterSingletons(in);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].id, "b");
}

TEST(AlignMentionsTest, PrefersExactThenLarger) {
  const std::vector<Entity> gold = {
      MakeEntity("g", {Span({1, 2, 3}, 2), Span({5}, 5)})};
  const std::vector<Entity> sys = {
      MakeEntity("s", {Span({2}, 2), Span({1, 2, 3}, 2), Span({2, 3}, 2)})};
  const MentionAlignment a = AlignMentions(gold, sys);
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(a.pairs[0].second, (MentionRef{0, 1}));
  EXPECT_EQ(a.unmatched_gold.size(), 1u);
  EXPECT_EQ(a.unmatched_sys.size(), 2u);

  const std::vector<Entity> partial = {
      MakeEntity("s", {Span({2}, 2), Span({2, 3}, 2)})};
  const MentionAlignment b = AlignMentions(gold, partial);
  ASSERT_EQ(b.pairs.size(), 1u);
  EXPECT_EQ(b.pairs[0].second, (MentionRef{0, 1}));
}

TEST(AlignMentionsTest, MaximizesCardinalityFirst) {
  // Gold A = {1,2} head 1 and B = {1,2,3} head 2. System {1,2} is exact for
  // A, but {2} can only serve B, so both get matched.
  const std::vector<Entity> gold = {
      MakeEntity("g", {Span({1, 2}, 1), Span({1, 2, 3}, 2)})};
  const std::vector<Entity> sys = {
      MakeEntity("s", {Span({1, 2}, 1), Span({2}, 2)})};
  EXPECT_EQ(AlignMentions(gold, sys).pairs.size(), 2u);
}

TEST(EvaluateTest, HandInstance) {
  const testing::Instance inst = HandInstance();
  const EvalReport r = Evaluate(inst.gold, inst.sys, /*keep_singletons=*/true);
  EXPECT_EQ(r.muc.recall(), Rational(1, 3));
  EXPECT_EQ(r.muc.precision(), Rational(1, 2));
  EXPECT_EQ(r.muc.f1(), Rational(2, 5));
  EXPECT_EQ(r.b3.recall(), Rational(8, 15));
  EXPECT_EQ(r.b3.precision(), Rational(4, 5));
  EXPECT_EQ(r.b3.f1(), Rational(16, 25));
  EXPECT_EQ(r.ceaf_e.recall(), Rational(11, 15));
  EXPECT_EQ(r.ceaf_e.precision(), Rational(22, 45));
  EXPECT_EQ(r.ceaf_e.f1(), Rational(44, 75));
  EXPECT_EQ(r.conll_f1(), Rational(122, 225));
  ExpectMatchesOracle(r, testing::OracleEvaluate(inst.gold, inst.sys, true));
  EXPECT_EQ(ScoreClusterings({{1, 2, 3}, {4, 5}}, {{1, 2}, {3, 4}, {5}}), r);
}

TEST(EvaluateTest, PerfectMatchIsOne) {
  const testing::Instance inst = HandInstance();
  const EvalReport r = Evaluate(inst.gold, inst.gold);
  EXPECT_EQ(r.conll_f1(), Rational(1));
  EXPECT_EQ(FormatPercent2(r.conll_f1()), "100.00");
}

TEST(EvaluateTest, EmptySidesScoreZero) {
  const testing::Instance inst = HandInstance();
  EXPECT_EQ(Evaluate(inst.gold, std::vector<Entity>{}).conll_f1(), Rational(0));
  EXPECT_EQ(Evaluate(std::vector<Entity>{}, inst.sys).conll_f1(), Rational(0));
  EXPECT_EQ(Evaluate(std::vector<Entity>{}, std::vector<Entity>{}).conll_f1(), Rational(0));
}

TEST(EvaluateTest, RandomInstancesMatchOracle) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const testing::Instance inst = testing::RandomInstance(seed);
    for (bool keep : {false, true}) {
      SCOPED_TRACE("seed " + std::to_string(seed));
      ExpectMatchesOracle(Evaluate(inst.gold, inst.sys, keep),
                          testing::OracleEvaluate(inst.gold, inst.sys, keep));
    }
  }
}

TEST(EvaluateTest, SingletonsDoNotMatterByDefault) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::Instance inst = testing::RandomInstance(seed);
    const EvalReport base = Evaluate(inst.gold, inst.sys);
    const int count = 1 + static_cast<int>(seed % 20);
    std::vector<Entity> gold = inst.gold;
    std::vector<Entity> sys = inst.sys;
    testing::AddSingletons(seed % 2 ? &gold : &sys, count, seed);
    EXPECT_EQ(Evaluate(gold, sys), base) << "seed " << seed;
    testing::AddSingletons(seed % 2 ? &sys : &gold, count, seed + 1000);
    EXPECT_EQ(Evaluate(gold, sys), base) << "seed " << seed;
  }
}

bool HasDuplicateSpans(const std::vector<Entity> &entities) {
  std::vector<std::pair<std::vector<TokenId>, TokenId>> seen;
  for (const Entity &e : entities) {
    for (const Mention &m : e.mentions) seen.push_back({m.tokens, m.head});
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) != seen.end();
}

TEST(EvaluateTest, MentionOrderDoesNotMatter) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::Instance inst = testing::RandomInstance(seed);
    const EvalReport base = Evaluate(inst.gold, inst.sys);
    for (auto *side : {&inst.gold, &inst.sys}) {
      for (Entity &e : *side) {
        std::shuffle(e.mentions.begin(), e.mentions.end(), rng);
      }
    }
    EXPECT_EQ(Evaluate(inst.gold, inst.sys), base) << "seed " << seed;
  }
}

// With the same span in two entities the tie-break follows entity order,
// so only duplicate-free instances are order independent.
TEST(EvaluateTest, EntityOrderDoesNotMatter) {
  std::mt19937_64 rng(4);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testing::Instance inst = testing::RandomInstance(seed);
    if (HasDuplicateSpans(inst.gold) || HasDuplicateSpans(inst.sys)) continue;
    ++checked;
    const EvalReport base = Evaluate(inst.gold, inst.sys);
    std::shuffle(inst.gold.begin(), inst.gold.end(), rng);
    std::shuffle(inst.sys.begin(), inst.sys.end(), rng);
    EXPECT_EQ(Evaluate(inst.gold, inst.sys), base) << "seed " << seed;
  }
  EXPECT_GT(checked, 50);
}

TEST(EvaluateTest, HeadsAloneScorePerfectly) {
  std::vector<Document> docs;
  for (const char *name : {"/f1.conllu", "/f2_features.conllu"}) {
    for (Document &d : ReadConlluFile(std::string(COREFKIT_TEST_DATA) + name)) {
      docs.push_back(std::move(d));
    }
  }
  for (Document &d : testing::MakeSyntheticCorpus(5, 11)) docs.push_back(d);
  for (const Document &d : docs) {
    for (bool keep : {false, true}) {
      const EvalReport r = Evaluate(d, ReduceToHeads(d), keep);
      EXPECT_EQ(FormatPercent2(r.conll_f1()),
                r.muc.recall_den == 0 && !keep ? "0.00" : "100.00")
          << d.doc_id;
    }
  }
}

TEST(EvaluateTest, UnknownSystemTokenIsRejected) {
  const Document gold = testing::MakeFlatDocument("d", 5);
  Document sys = gold;
  sys.entities = {MakeEntity("e", {Span({9}, 9), Span({1}, 1)})};
  EXPECT_THROW(Evaluate(gold, sys), std::invalid_argument);
}

TEST(EvaluateCorpusTest, SumsCountsBeforeDividing) {
  const testing::Instance a = HandInstance();
  const testing::Instance b = testing::RandomInstance(5);
  auto doc = [](const std::string &id, const std::vector<Entity> &entities) {
    Document d = testing::MakeFlatDocument(id, 40);
    d.entities = entities;
    return d;
  };
  const std::vector<Document> gold = {doc("a", a.gold), doc("b", b.gold)};
  const std::vector<Document> sys = {doc("a", a.sys), doc("b", b.sys)};
  EvalReport expected = Evaluate(a.gold, a.sys);
  expected += Evaluate(b.gold, b.sys);
  EXPECT_EQ(EvaluateCorpus(gold, sys), expected);

  const std::vector<Document> renamed = {doc("a", a.sys), doc("c", b.sys)};
  EXPECT_THROW(EvaluateCorpus(gold, renamed), std::invalid_argument);
  EXPECT_THROW(EvaluateCorpus(gold, std::span(sys).first(1)),
               std::invalid_argument);
}

TEST(FormatPercent2Test, RoundsHalfUp) {
  EXPECT_EQ(FormatPercent2(Rational(0)), "0.00");
  EXPECT_EQ(FormatPercent2(Rational(1)), "100.00");
  EXPECT_EQ(FormatPercent2(Rational(122, 225)), "54.22");
  EXPECT_EQ(FormatPercent2(Rational(44, 75)), "58.67");
  EXPECT_EQ(FormatPercent2(Rational(1, 20000)), "0.01");
  EXPECT_EQ(FormatPercent2(Rational(1, 20001)), "0.00");
}

TEST(MachineFormatTest, RoundTrips) {
  const testing::Instance inst = HandInstance();
  const EvalReport r = Evaluate(inst.gold, inst.sys, true);
  EXPECT_EQ(ParseReportMachine(FormatReportMachine(r)), r);
  EXPECT_THROW(ParseReportMachine("muc.recall_num=1\n"), std::invalid_argument);
  EXPECT_THROW(ParseReportMachine("garbage"), std::invalid_argument);
}

TEST(TableFormatTest, ListsEveryMetric) {
  const testing::Instance inst = HandInstance();
  const std::string table =
      FormatReportTable(Evaluate(inst.gold, inst.sys, true));
  EXPECT_NE(table.find("MUC\t33.33\t50.00\t40.00"), std::string::npos);
  EXPECT_NE(table.find("B3\t53.33\t80.00\t64.00"), std::string::npos);
  EXPECT_NE(table.find("CEAF-e\t73.33\t48.89\t58.67"), std::string::npos);
  EXPECT_NE(table.find("CoNLL F1\t54.22"), std::string::npos);
}

}  // namespace
}  // namespace corefkit
