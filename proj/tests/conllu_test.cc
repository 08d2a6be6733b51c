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

#include "corefkit/conllu.h"

#include <string>

#include <gtest/gtest.h>

#include "corefkit/dep_tree.h"
#include "corefkit/validation.h"
#include "testing/testing.h"

namespace corefkit {
namespace {

const std::string kData = COREFKIT_TEST_DATA;

TokenId W(int sentence, int word) { return {sentence, word, 0}; }

const Entity *FindEntity(const Document &doc, const std::string &id) {
  for (const Entity &e : doc.entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::string Line(const std::string &id, const std::string &form, int head,
                 const std::string &deprel, const std::string &misc) {
  return id + "\t" + form + "\t" + form + "\tX\t_\t_\t" +
         std::to_string(head) + "\t" + deprel + "\t_\t" + misc + "\n";
}

int ErrorLine(const std::string &text, std::string *message) {
  try {
    ParseConlluString(text);
  } catch (const ParseError &e) {
    *message = e.message();
    return e.line();
  }
  return -1;
}

TEST(ConlluTest, ParsesFixtureOne) {
  const std::vector<Document> docs = ReadConlluFile(kData + "/f1.conllu");
  ASSERT_EQ(docs.size(), 1u);
  const Document &doc = docs[0];
  EXPECT_EQ(doc.doc_id, "f1");
  EXPECT_EQ(doc.sentences.size(), 2u);
  EXPECT_EQ(doc.word_count(), 8);
  ASSERT_EQ(doc.entities.size(), 3u);
  const Entity *e2 = FindEntity(doc, "e2");
  ASSERT_NE(e2, nullptr);
  ASSERT_EQ(e2->mentions.size(), 2u);
  EXPECT_EQ(e2->mentions[0].tokens,
            (std::vector<TokenId>{W(0, 3), W(0, 4), W(0, 5)}));
  EXPECT_EQ(e2->mentions[0].head, W(0, 5));
  EXPECT_TRUE(FindEntity(doc, "e3")->is_singleton());
  EXPECT_TRUE(ValidateDocument(doc).empty());
}

TEST(ConlluTest, EmptyInputGivesNoDocuments) {
  EXPECT_TRUE(ParseConlluString("").empty());
}

TEST(ConlluTest, ParsesFeatureFixture) {
  ParseReport report;
  const std::vector<Document> docs =
      ReadConlluFile(kData + "/f2_features.conllu", &report);
  ASSERT_EQ(docs.size(), 2u);
  const Document &a = docs[0];
  EXPECT_EQ(a.doc_id, "doc-a");
  // The empty node 4.1 carries the only mention that is dropped.
  EXPECT_EQ(report.empty_node_mentions_dropped, 1);
  const Entity *e1 = FindEntity(a, "e1");
  ASSERT_NE(e1, nullptr);
  EXPECT_EQ(e1->mentions[0].tokens,
            (std::vector<TokenId>{W(0, 1), W(0, 2), W(0, 3)}));
  EXPECT_EQ(e1->mentions[0].extra, std::vector<std::string>{"new"});
  const Entity *e2 = FindEntity(a, "e2");
  ASSERT_NE(e2, nullptr);
  EXPECT_EQ(e2->mentions[0].tokens, (std::vector<TokenId>{W(1, 5), W(1, 7)}));
  EXPECT_EQ(e2->mentions[0].head, W(1, 7));
  EXPECT_EQ(e2->mentions[0].entity_type, "thing");
  EXPECT_TRUE(IsDiscontinuous(e2->mentions[0]));
  ASSERT_EQ(a.sentences[1].multiword_tokens.size(), 1u);
  EXPECT_EQ(a.sentences[1].multiword_tokens[0].first, 2);
  const Token *big = a.FindToken(W(1, 6));
  ASSERT_NE(big, nullptr);
  ASSERT_EQ(big->misc.size(), 2u);
  EXPECT_EQ(big->misc[1].key, "Bare");
  EXPECT_FALSE(big->misc[1].value.has_value());
  const Token *empty = a.FindToken({0, 4, 1});
  ASSERT_NE(empty, nullptr);
  EXPECT_FALSE(empty->parent.has_value());
  const Document &b = docs[1];
  EXPECT_EQ(FindEntity(b, "e2")->mentions.size(), 2u);
  EXPECT_EQ(b.FindToken(W(0, 4))->deprel, "nmod:poss");
}

TEST(ConlluTest, RoundTripIsIdentityOnFixtures) {
  for (const char *name : {"/f1.conllu", "/f2_features.conllu"}) {
    const std::vector<Document> first = ReadConlluFile(kData + name);
    const std::string text = SerializeCorpus(first);
    const std::vector<Document> second = ParseConlluString(text);
    EXPECT_EQ(first, second) << name;
    EXPECT_EQ(SerializeCorpus(second), text) << name;
  }
}

TEST(ConlluTest, RoundTripOnSyntheticCorpus) {
  const std::vector<Document> corpus = testing::MakeSyntheticCorpus(20, 3);
  EXPECT_EQ(ParseConlluString(SerializeCorpus(corpus)), corpus);
}

TEST(ConlluTest, DiscontinuousMentionWritesPartMarkers) {
  Document doc = testing::MakeFlatDocument("d", 4);
  Mention m;
  m.tokens = {W(0, 1), W(0, 3)};
  m.head = W(0, 1);
  doc.entities = {{"e1", {m}}};
  const std::string text = SerializeDocument(doc);
  EXPECT_NE(text.find("(e1[1/2]"), std::string::npos);
  EXPECT_NE(text.find("(e1[2/2]"), std::string::npos);
  EXPECT_EQ(ParseConlluString(text).at(0).entities, doc.entities);
}

TEST(ConlluTest, NoEntitiesMeansNoEntityKeys) {
  const Document doc = testing::MakeFlatDocument("plain", 3);
  const std::string text = SerializeDocument(doc);
  EXPECT_EQ(text.find("Entity="), std::string::npos);
  EXPECT_EQ(ParseConlluString(text).at(0), doc);
}

TEST(ConlluTest, WriterRejectsInvalidDocument) {
  Document doc = testing::MakeFlatDocument("d", 3);
  Mention m;
  m.tokens = {W(0, 1)};
  m.head = W(0, 2);
  doc.entities = {{"e1", {m}}};
  EXPECT_THROW(SerializeDocument(doc), InvalidDocument);
}

TEST(ConlluTest, ReportsStructuralErrorsWithLines) {
  const std::string head = "# newdoc id = x\n";
  std::string msg;
  EXPECT_EQ(ErrorLine(head + "1\tw\tw\tX\t_\t_\t0\troot\t_\n", &msg), 2);
  EXPECT_TRUE(msg.starts_with("malformed column count")) << msg;
  EXPECT_EQ(ErrorLine(head + Line("1", "a", 0, "root", "_") +
                          Line("3", "b", 1, "dep", "_"),
                      &msg),
            3);
  EXPECT_TRUE(msg.starts_with("non-consecutive token id")) << msg;
  EXPECT_EQ(ErrorLine(head + Line("1", "a", 1, "root", "_"), &msg), 2);
  EXPECT_TRUE(msg.starts_with("dependency self-loop")) << msg;
  EXPECT_EQ(ErrorLine(head + Line("1", "a", 0, "root", "_") +
                          Line("2", "b", 7, "dep", "_"),
                      &msg),
            3);
  EXPECT_TRUE(msg.starts_with("head out of sentence range")) << msg;
  EXPECT_EQ(ErrorLine(head + "1\ta\ta\tX\t_\t_\tzz\troot\t_\t_\n", &msg), 2);
  EXPECT_TRUE(msg.starts_with("invalid head")) << msg;
  ErrorLine(head + Line("1", "a", 2, "dep", "_") + Line("2", "b", 1, "dep", "_"),
            &msg);
  EXPECT_TRUE(msg.starts_with("dependency cycle")) << msg;
}

TEST(ConlluTest, ReportsUnbalancedBrackets) {
  const std::string head = "# newdoc id = x\n";
  std::string msg;
  ErrorLine(head + Line("1", "a", 0, "root", "Entity=(e1-x-1") +
                Line("2", "b", 1, "dep", "_"),
            &msg);
  EXPECT_TRUE(msg.starts_with("unbalanced entity bracket")) << msg;
  EXPECT_EQ(ErrorLine(head + Line("1", "a", 0, "root", "Entity=e1)"), &msg), 2);
  EXPECT_TRUE(msg.starts_with("unbalanced entity bracket")) << msg;
  ErrorLine(head + Line("1", "a", 0, "root", "Entity=(e1-x-5)"), &msg);
  EXPECT_TRUE(msg.starts_with("head index out of mention range")) << msg;
}

TEST(ConlluTest, MissingHeadIndexFallsBackToTree) {
  const std::string text = "# newdoc id = x\n" +
                           Line("1", "the", 2, "det", "Entity=(e1") +
                           Line("2", "dog", 0, "root", "Entity=e1)");
  const Document doc = ParseConlluString(text).at(0);
  EXPECT_EQ(doc.entities.at(0).mentions.at(0).head, W(0, 2));
}

TEST(ConlluTest, FileErrorsNameThePath) {
  EXPECT_THROW(ReadConlluFile(kData + "/does-not-exist.conllu"),
               std::runtime_error);
}

TEST(ValidationTest, FixtureIsClean) {
  EXPECT_TRUE(ValidateDocument(ReadConlluFile(kData + "/f1.conllu")[0]).empty());
}

TEST(ValidationTest, HeadOutsideMention) {
  Document doc = testing::MakeFlatDocument("d", 3);
  Mention m;
  m.tokens = {W(0, 1), W(0, 2)};
  m.head = W(0, 3);
  doc.entities = {{"e1", {m}}};
  const std::vector<Violation> v = ValidateDocument(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, "head not in mention");
}

TEST(ValidationTest, CrossSentenceDependency) {
  Document doc = testing::MakeFlatDocument("d", 2);
  doc.sentences.push_back(doc.sentences[0]);
  for (Token &t : doc.sentences[1].tokens) t.id.sentence = 1;
  doc.sentences[1].tokens[1].parent = W(0, 1);
  const std::vector<Violation> v = ValidateDocument(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, "cross-sentence dependency");
}

TEST(ValidationTest, CanonicalizeIsIdempotent) {
  for (const Document &doc : testing::MakeSyntheticCorpus(5, 9)) {
    Document shuffled = doc;
    std::reverse(shuffled.entities.begin(), shuffled.entities.end());
    for (Entity &e : shuffled.entities) {
      std::reverse(e.mentions.begin(), e.mentions.end());
    }
    const Document once = Canonicalize(shuffled);
    EXPECT_EQ(once, doc);
    EXPECT_EQ(Canonicalize(once), once);
  }
}

TEST(ReduceToHeadsTest, KeepsOnlyHeads) {
  const Document doc = ReadConlluFile(kData + "/f1.conllu")[0];
  const Document reduced = ReduceToHeads(doc);
  const Entity *e2 = FindEntity(reduced, "e2");
  ASSERT_NE(e2, nullptr);
  EXPECT_EQ(e2->mentions[0].tokens, std::vector<TokenId>{W(0, 5)});
  EXPECT_EQ(e2->mentions[0].head, W(0, 5));
  EXPECT_EQ(FindEntity(reduced, "e1")->mentions,
            FindEntity(doc, "e1")->mentions);
  EXPECT_EQ(ReduceToHeads(reduced), reduced);
}

}  // namespace
}  // namespace corefkit
