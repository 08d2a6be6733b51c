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

#include "corefkit/decode.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "corefkit/dep_tree.h"
#include "corefkit/segmenter.h"
#include "corefkit/validation.h"

namespace corefkit {
namespace {

int FindRoot(std::map<int, int> &parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Mention over the window tokens [start, end], in original ids.
std::vector<TokenId> SpanTokens(const SubDocument &part, const WindowInput &in,
                                const SpanCandidate &c) {
  std::vector<TokenId> out;
  for (int t = c.start; t <= c.end; ++t) out.push_back(part.Original(in.ids[t]));
  return out;
}

}  // namespace

std::vector<std::vector<int>> DecodeClusters(
    std::span<const AntecedentFrame> frames) {
  std::map<int, int> parent;
  for (const AntecedentFrame &f : frames) {
    parent.emplace(f.span, f.span);
    const int best = static_cast<int>(
        std::max_element(f.probs.begin(), f.probs.end()) - f.probs.begin());
    if (best == 0) continue;
    const int ante = f.candidates[best];
    parent.emplace(ante, ante);
    const int a = FindRoot(parent, f.span);
    const int b = FindRoot(parent, ante);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, std::vector<int>> groups;
  for (const auto &[span, unused] : parent) {
    groups[FindRoot(parent, span)].push_back(span);
  }
  std::vector<std::vector<int>> out;
  for (auto &[root, members] : groups) {
    if (members.size() >= 2) out.push_back(std::move(members));
  }
  // Roots are the smallest member, so map order is first-span order.
  return out;
}

std::vector<Entity> EmitHeadMentions(
    std::span<const Entity> entities,
    const std::vector<std::vector<HeadChoice>> &heads) {
  std::vector<Entity> out;
  for (std::size_t e = 0; e < entities.size(); ++e) {
    Entity reduced;
    reduced.id = entities[e].id;
    for (std::size_t m = 0; m < entities[e].mentions.size(); ++m) {
      const Mention &src = entities[e].mentions[m];
      const HeadChoice &h = heads[e][m];
      Mention dst;
      for (int p : h.positions) dst.tokens.push_back(src.tokens[p]);
      dst.head = src.tokens[h.best];
      dst.entity_type = src.entity_type;
      dst.extra = src.extra;
      const bool seen = std::any_of(
          reduced.mentions.begin(), reduced.mentions.end(),
          [&](const Mention &x) { return x.tokens == dst.tokens; });
      if (!seen) reduced.mentions.push_back(std::move(dst));
    }
    out.push_back(std::move(reduced));
  }
  return out;
}

Document PredictDocument(const Document &doc, const ModelParams &params,
                         bool heads_only) {
  const HyperParams &hp = params.hp();
  const bool head_model = hp.head_variant != HeadVariant::kOff;
  Document out = doc;
  out.entities.clear();
  const SplitResult split =
      SplitForPrediction(doc, hp.segment_length, hp.max_segments);
  std::vector<Entity> spans;
  std::vector<std::vector<HeadChoice>> heads;
  for (const SubDocument &part : split.parts) {
    const WindowInput in = PrepareWindow(part.doc, hp);
    if (in.size() == 0) continue;
    const EncodedWindow enc = EncodeTokens(in, params);
    const SpanSet set = EnumerateSpans(in, enc, params);
    const std::vector<AntecedentFrame> frames =
        AntecedentDistribution(in, set, params);
    for (const std::vector<int> &cluster : DecodeClusters(frames)) {
      Entity entity;
      std::vector<HeadChoice> choices;
      for (int s : cluster) {
        const SpanCandidate &c = set.spans[s];
        Mention m;
        m.tokens = SpanTokens(part, in, c);
        HeadChoice choice;
        if (head_model) {
          const HeadPrediction p = PredictHeads(set, s, enc, params);
          choice.positions = p.heads;
          choice.best = p.best;
          m.head = m.tokens[p.best];
        } else {
          m.head = FindHead(doc, m.tokens);
          choice.best = static_cast<int>(
              std::find(m.tokens.begin(), m.tokens.end(), m.head) -
              m.tokens.begin());
          choice.positions = {choice.best};
        }
        entity.mentions.push_back(std::move(m));
        choices.push_back(std::move(choice));
      }
      spans.push_back(std::move(entity));
      heads.push_back(std::move(choices));
    }
  }
  out.entities = heads_only ? EmitHeadMentions(spans, heads) : std::move(spans);
  for (std::size_t e = 0; e < out.entities.size(); ++e) {
    out.entities[e].id = "e" + std::to_string(e + 1);
  }
  return Canonicalize(std::move(out));
}

HeadAccuracy EvaluateHeads(std::span<const Document> docs,
                           const ModelParams &params) {
  const HyperParams &hp = params.hp();
  HeadAccuracy acc;
  for (const Document &doc : docs) {
    const SplitResult split =
        SplitForPrediction(doc, hp.segment_length, hp.max_segments);
    for (const SubDocument &part : split.parts) {
      const WindowInput in = PrepareWindow(part.doc, hp);
      if (in.size() == 0 || in.gold.empty()) continue;
      const EncodedWindow enc = EncodeTokens(in, params);
      const SpanSet set = EnumerateSpans(in, enc, params);
      for (const GoldSpan &g : in.gold) {
        const int s = set.Find(g.start, g.end);
        if (s < 0) continue;
        ++acc.total;
        int best = 0;
        if (hp.head_variant != HeadVariant::kOff) {
          best = PredictHeads(set, s, enc, params).best;
        } else {
          const std::vector<TokenId> tokens(in.ids.begin() + g.start,
                                            in.ids.begin() + g.end + 1);
          best = static_cast<int>(
              std::find(tokens.begin(), tokens.end(),
                        FindHead(part.doc, tokens)) -
              tokens.begin());
        }
        if (best == g.head_offset) ++acc.correct;
      }
    }
  }
  return acc;
}

}  // namespace corefkit
