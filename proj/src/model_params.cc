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

#include "corefkit/model_params.h"

#include <array>
#include <cmath>
#include <stdexcept>

#include "corefkit/dep_tree.h"
#include "corefkit/random.h"

namespace corefkit {
namespace {

constexpr std::array<std::string_view, 17> kUpos = {
    "ADJ", "ADP",  "ADV",   "AUX",   "CCONJ", "DET",  "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

constexpr std::array<std::string_view, 37> kDeprels = {
    "acl",        "advcl",    "advmod",     "amod",      "appos",
    "aux",        "case",     "cc",         "ccomp",     "clf",
    "compound",   "conj",     "cop",        "csubj",     "dep",
    "det",        "discourse", "dislocated", "expl",     "fixed",
    "flat",       "goeswith", "iobj",       "list",      "mark",
    "nmod",       "nsubj",    "nummod",     "obj",       "obl",
    "orphan",     "parataxis", "punct",     "reparandum", "root",
    "vocative",   "xcomp"};

// Sentence positions reuse the distance buckets.
constexpr int kPositionBuckets = kDistanceBuckets;

}  // namespace

std::string ToString(HeadVariant v) {
  switch (v) {
    case HeadVariant::kOff:
      return "off";
    case HeadVariant::kPositional:
      return "positional";
    case HeadVariant::kPairwise:
      return "pairwise";
  }
  return "off";
}

HeadVariant ParseHeadVariant(std::string_view text) {
  if (text == "off") return HeadVariant::kOff;
  if (text == "positional") return HeadVariant::kPositional;
  if (text == "pairwise") return HeadVariant::kPairwise;
  throw std::invalid_argument("unknown head variant '" + std::string(text) +
                              "'");
}

void HyperParams::Validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw std::invalid_argument(std::string("invalid ") + what);
  };
  require(token_dim > 0, "token_dim");
  require(deprel_dim > 0, "deprel_dim");
  require(hidden_dim > 0, "hidden_dim");
  require(width_dim > 0, "width_dim");
  require(form_buckets > 0, "form_buckets");
  require(max_span_width > 0, "max_span_width");
  require(tree_depth >= 0, "tree_depth");
  require(prune_ratio > 0 && prune_ratio <= 1, "prune_ratio");
  require(max_antecedents > 0, "max_antecedents");
  require(head_threshold > 0 && head_threshold < 1, "head_threshold");
  require(head_loss_weight >= 0, "head_loss_weight");
  require(segment_length > 0, "segment_length");
  require(max_segments > 0, "max_segments");
  require(learning_rate > 0, "learning_rate");
  require(clip_norm > 0, "clip_norm");
}

int HyperParams::token_rep_width() const {
  return token_dim + TreeFeatureWidth(tree_depth, token_dim, deprel_dim);
}

int HyperParams::span_rep_width() const {
  return 3 * token_rep_width() + width_dim;
}

int HyperParams::pair_input_width() const {
  return 3 * span_rep_width() + width_dim;
}

int UposIndex(std::string_view upos) {
  for (std::size_t i = 0; i < kUpos.size(); ++i) {
    if (kUpos[i] == upos) return static_cast<int>(i) + 1;
  }
  return 0;
}

int UposVocabSize() { return static_cast<int>(kUpos.size()) + 1; }

int DeprelIndex(std::string_view deprel) {
  if (deprel == kPadDeprel) return 0;
  auto colon = deprel.find(':');
  if (colon != std::string_view::npos) deprel = deprel.substr(0, colon);
  for (std::size_t i = 0; i < kDeprels.size(); ++i) {
    if (kDeprels[i] == deprel) return static_cast<int>(i) + 2;
  }
  return 1;
}

int DeprelVocabSize() { return static_cast<int>(kDeprels.size()) + 2; }

int DistanceBucket(int distance) {
  if (distance < 5) return std::max(0, distance);
  int bucket = 5;
  for (int limit = 8; bucket < kDistanceBuckets - 1 && distance >= limit;
       limit *= 2) {
    ++bucket;
  }
  return bucket;
}

int FormBucket(std::string_view form, int buckets) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : form) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return static_cast<int>(h % static_cast<std::uint64_t>(buckets));
}

ParamLayout ParamLayout::For(const HyperParams &hp) {
  ParamLayout l;
  std::size_t offset = 0;
  auto add = [&](TensorSlot &slot, const char *name, int rows, int cols) {
    slot = {name, offset, rows, cols};
    offset += slot.size();
  };
  const int td = hp.token_dim;
  const int wd = hp.width_dim;
  const int H = hp.hidden_dim;
  const int R = hp.token_rep_width();
  const int G = hp.span_rep_width();
  add(l.form_emb, "form_emb", td, hp.form_buckets);
  add(l.upos_emb, "upos_emb", td, UposVocabSize());
  add(l.pos_emb, "pos_emb", td, kPositionBuckets);
  add(l.deprel_emb, "deprel_emb", hp.deprel_dim, DeprelVocabSize());
  add(l.width_emb, "width_emb", wd, hp.max_span_width);
  add(l.dist_emb, "dist_emb", wd, kDistanceBuckets);
  add(l.mix_w, "mix_w", td, kMixerTaps * 3 * td);
  add(l.mix_b, "mix_b", td, 1);
  add(l.ment_w1, "ment_w1", H, G);
  add(l.ment_b1, "ment_b1", H, 1);
  add(l.ment_w2, "ment_w2", H, 1);
  add(l.ment_b2, "ment_b2", 1, 1);
  add(l.ante_w1, "ante_w1", H, hp.pair_input_width());
  add(l.ante_b1, "ante_b1", H, 1);
  add(l.ante_w2, "ante_w2", H, 1);
  add(l.ante_b2, "ante_b2", 1, 1);
  add(l.hpos_w1, "hpos_w1", H, G);
  add(l.hpos_b1, "hpos_b1", H, 1);
  add(l.hpos_w2, "hpos_w2", hp.max_span_width, H);
  add(l.hpos_b2, "hpos_b2", hp.max_span_width, 1);
  add(l.hpair_w1, "hpair_w1", H, G + R);
  add(l.hpair_b1, "hpair_b1", H, 1);
  add(l.hpair_w2, "hpair_w2", H, 1);
  add(l.hpair_b2, "hpair_b2", 1, 1);
  l.total = offset;
  return l;
}

std::vector<const TensorSlot *> ParamLayout::slots() const {
  return {&form_emb, &upos_emb, &pos_emb,  &deprel_emb, &width_emb,
          &dist_emb, &mix_w,    &mix_b,    &ment_w1,    &ment_b1,
          &ment_w2,  &ment_b2,  &ante_w1,  &ante_b1,    &ante_w2,
          &ante_b2,  &hpos_w1,  &hpos_b1,  &hpos_w2,    &hpos_b2,
          &hpair_w1, &hpair_b1, &hpair_w2, &hpair_b2};
}

ModelParams::ModelParams(const HyperParams &hp)
    : hp_(hp), layout_(ParamLayout::For(hp)), values_(layout_.total, 0.0) {}

ModelParams ModelParams::Random(const HyperParams &hp, std::uint64_t seed) {
  hp.Validate();
  ModelParams p(hp);
  std::mt19937_64 rng = MakeRng({seed, 0x1a2b3c4dULL});
  const ParamLayout &l = p.layout();
  auto fill = [&](const TensorSlot &slot, double scale) {
    auto m = p.Vec(slot);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m[i] = scale * (2.0 * UniformUnit(rng) - 1.0);
    }
  };
  auto glorot = [&](const TensorSlot &slot, int fan_in, int fan_out) {
    fill(slot, std::sqrt(6.0 / (fan_in + fan_out)));
  };
  for (const TensorSlot *s :
       {&l.form_emb, &l.upos_emb, &l.pos_emb, &l.deprel_emb, &l.width_emb,
        &l.dist_emb}) {
    fill(*s, 0.5);
  }
  glorot(l.mix_w, kMixerTaps * 3 * hp.token_dim, hp.token_dim);
  glorot(l.ment_w1, hp.span_rep_width(), hp.hidden_dim);
  glorot(l.ment_w2, hp.hidden_dim, 1);
  glorot(l.ante_w1, hp.pair_input_width(), hp.hidden_dim);
  glorot(l.ante_w2, hp.hidden_dim, 1);
  glorot(l.hpos_w1, hp.span_rep_width(), hp.hidden_dim);
  glorot(l.hpos_w2, hp.hidden_dim, hp.max_span_width);
  glorot(l.hpair_w1, hp.span_rep_width() + hp.token_rep_width(),
         hp.hidden_dim);
  glorot(l.hpair_w2, hp.hidden_dim, 1);
  p.RoundToFloat();
  return p;
}

void ModelParams::SetZero() { std::fill(values_.begin(), values_.end(), 0.0); }

bool ModelParams::AllFinite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double ModelParams::Norm() const {
  double sum = 0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

void ModelParams::RoundToFloat() {
  for (double &v : values_) v = static_cast<double>(static_cast<float>(v));
}

}  // namespace corefkit
