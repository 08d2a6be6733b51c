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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "corefkit/dep_tree.h"

namespace corefkit {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double LogSumExp(const std::vector<double> &v, const std::vector<char> *mask) {
  double hi = -INFINITY;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!mask || (*mask)[i]) hi = std::max(hi, v[i]);
  }
  double sum = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!mask || (*mask)[i]) sum += std::exp(v[i] - hi);
  }
  return hi + std::log(sum);
}

int PairBucket(const SpanSet &spans, int i, int j) {
  return DistanceBucket(spans.spans[i].start - spans.spans[j].start);
}

// Column blocks of the first antecedent layer, matching the pair input
// [g_i, g_j, g_i * g_j, distance embedding].
struct PairBlocks {
  explicit PairBlocks(const ModelParams &params)
      : G(params.hp().span_rep_width()),
        w(params.Mat(params.layout().ante_w1)),
        left(w.middleCols(0, G)),
        right(w.middleCols(G, G)),
        product(w.middleCols(2 * G, G)),
        dist(w.middleCols(3 * G, params.hp().width_dim)) {}

  int G;
  Eigen::Map<const MatrixXd> w;
  MatrixXd left, right, product, dist;
};

// Representations of candidates[1..] as columns.
MatrixXd GatherReps(const SpanSet &spans, const std::vector<int> &candidates) {
  MatrixXd out(spans.reps.rows(), candidates.size() - 1);
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    out.col(c - 1) = spans.reps.col(candidates[c]);
  }
  return out;
}

// Gold entity of every candidate span, or -1.
std::vector<int> SpanEntities(const WindowInput &in, const SpanSet &spans) {
  std::vector<int> out(spans.spans.size(), -1);
  for (const GoldSpan &g : in.gold) {
    const int idx = spans.Find(g.start, g.end);
    if (idx >= 0 && out[idx] < 0) out[idx] = g.entity;
  }
  return out;
}

// Head network forward pass for one span; hidden is filled for backprop.
std::vector<double> HeadLogits(const SpanSet &spans, int span,
                               const EncodedWindow &enc,
                               const ModelParams &params,
                               std::vector<VectorXd> *hidden) {
  const HyperParams &hp = params.hp();
  const ParamLayout &l = params.layout();
  const SpanCandidate &c = spans.spans[span];
  const int w = c.width();
  std::vector<double> logits(w);
  hidden->clear();
  if (hp.head_variant == HeadVariant::kPositional) {
    VectorXd z = (params.Mat(l.hpos_w1) * spans.reps.col(span) +
                  params.Vec(l.hpos_b1))
                     .array()
                     .tanh();
    VectorXd out = params.Mat(l.hpos_w2).topRows(w) * z +
                   params.Vec(l.hpos_b2).head(w);
    for (int k = 0; k < w; ++k) logits[k] = out[k];
    hidden->push_back(std::move(z));
  } else if (hp.head_variant == HeadVariant::kPairwise) {
    const int G = static_cast<int>(spans.reps.rows());
    const int R = static_cast<int>(enc.reps.rows());
    VectorXd q(G + R);
    q.head(G) = spans.reps.col(span);
    for (int k = 0; k < w; ++k) {
      q.tail(R) = enc.reps.col(c.start + k);
      VectorXd z = (params.Mat(l.hpair_w1) * q + params.Vec(l.hpair_b1))
                       .array()
                       .tanh();
      logits[k] = params.Vec(l.hpair_w2).dot(z) + params.Vec(l.hpair_b2)[0];
      hidden->push_back(std::move(z));
    }
  } else {
    throw std::invalid_argument("head prediction is disabled");
  }
  return logits;
}

}  // namespace

WindowInput PrepareWindow(const Document &doc, const HyperParams &hp) {
  WindowInput in;
  TokenIndex index(doc);
  const int T = index.size();
  const int D = hp.tree_depth;
  in.sentence_starts = index.sentence_starts();
  in.ids.reserve(T);
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const Sentence &sentence = doc.sentences[s];
    for (const Token &t : sentence.tokens) {
      if (t.id.is_empty_node()) continue;
      in.ids.push_back(t.id);
      in.form.push_back(FormBucket(t.form, hp.form_buckets));
      in.upos.push_back(UposIndex(t.upos));
      in.position.push_back(DistanceBucket(t.id.word - 1));
      in.sentence.push_back(static_cast<int>(s));
      if (D == 0) continue;
      const TreeFeature f = GetTreeFeature(sentence, t.id, D);
      for (const TreeSlot &slot : f.slots) {
        in.tree_ancestor.push_back(slot.kind == TreeSlot::Kind::kToken
                                       ? in.sentence_starts[s] + slot.word - 1
                                       : -1);
        in.tree_deprel.push_back(DeprelIndex(slot.deprel));
      }
    }
  }
  for (std::size_t e = 0; e < doc.entities.size(); ++e) {
    for (const Mention &m : doc.entities[e].mentions) {
      if (m.tokens.empty() || IsDiscontinuous(m) ||
          static_cast<int>(m.tokens.size()) > hp.max_span_width ||
          m.tokens.front().sentence != m.tokens.back().sentence) {
        ++in.skipped_gold;
        continue;
      }
      GoldSpan g;
      g.start = index.position(m.tokens.front());
      g.end = index.position(m.tokens.back());
      g.entity = static_cast<int>(e);
      const int head = index.position(m.head);
      if (g.start < 0 || g.end < 0 || head < g.start || head > g.end) {
        ++in.skipped_gold;
        continue;
      }
      g.head_offset = head - g.start;
      in.gold.push_back(g);
    }
  }
  return in;
}

EncodedWindow EncodeTokens(const WindowInput &in, const ModelParams &params) {
  const HyperParams &hp = params.hp();
  const ParamLayout &l = params.layout();
  const int T = in.size();
  const int td = hp.token_dim;
  const int dd = hp.deprel_dim;
  const int D = hp.tree_depth;
  EncodedWindow enc;
  enc.inputs.resize(3 * td, T);
  for (int t = 0; t < T; ++t) {
    enc.inputs.col(t).segment(0, td) = params.Mat(l.form_emb).col(in.form[t]);
    enc.inputs.col(t).segment(td, td) = params.Mat(l.upos_emb).col(in.upos[t]);
    enc.inputs.col(t).segment(2 * td, td) =
        params.Mat(l.pos_emb).col(in.position[t]);
  }
  const auto mix_w = params.Mat(l.mix_w);
  MatrixXd pre = params.Vec(l.mix_b).replicate(1, T);
  for (int t = 0; t < T; ++t) {
    for (int o = -kMixerRadius; o <= kMixerRadius; ++o) {
      const int u = t + o;
      if (u < 0 || u >= T || in.sentence[u] != in.sentence[t]) continue;
      pre.col(t).noalias() +=
          mix_w.middleCols((o + kMixerRadius) * 3 * td, 3 * td) *
          enc.inputs.col(u);
    }
  }
  enc.hidden = pre.array().tanh();
  enc.reps.resize(hp.token_rep_width(), T);
  enc.reps.topRows(td) = enc.hidden;
  const auto deprel_emb = params.Mat(l.deprel_emb);
  for (int t = 0; t < T; ++t) {
    for (int d = 0; d < D; ++d) {
      const int base = td + d * (td + dd);
      const int anc = in.tree_ancestor[t * D + d];
      if (anc >= 0) {
        enc.reps.col(t).segment(base, td) = enc.hidden.col(anc);
      } else {
        enc.reps.col(t).segment(base, td).setZero();
      }
      enc.reps.col(t).segment(base + td, dd) =
          deprel_emb.col(in.tree_deprel[t * D + d]);
    }
  }
  return enc;
}

int SpanSet::Find(int start, int end) const {
  auto it = std::lower_bound(
      spans.begin(), spans.end(), std::make_pair(start, end),
      [](const SpanCandidate &c, const std::pair<int, int> &key) {
        return std::make_pair(c.start, c.end) < key;
      });
  if (it == spans.end() || it->start != start || it->end != end) return -1;
  return static_cast<int>(it - spans.begin());
}

int RetainedCount(int tokens, int candidates, double ratio) {
  if (ratio >= 1.0) return candidates;
  // The small slack keeps exact products such as 0.4 * 100 from rounding up.
  const int k = static_cast<int>(std::ceil(ratio * tokens - 1e-9));
  return std::clamp(k, 0, candidates);
}

SpanSet EnumerateSpans(const WindowInput &in, const EncodedWindow &enc,
                       const ModelParams &params) {
  const HyperParams &hp = params.hp();
  const ParamLayout &l = params.layout();
  const int T = in.size();
  const int R = hp.token_rep_width();
  const int wd = hp.width_dim;
  SpanSet out;
  for (std::size_t s = 0; s + 1 < in.sentence_starts.size(); ++s) {
    const int first = in.sentence_starts[s];
    const int last = in.sentence_starts[s + 1];
    for (int a = first; a < last; ++a) {
      for (int b = a; b < last && b - a < hp.max_span_width; ++b) {
        out.spans.push_back({a, b, 0.0});
      }
    }
  }
  const int N = static_cast<int>(out.spans.size());
  out.reps.resize(hp.span_rep_width(), N);
  const auto width_emb = params.Mat(l.width_emb);
  for (int n = 0; n < N; ++n) {
    const SpanCandidate &c = out.spans[n];
    auto col = out.reps.col(n);
    col.segment(0, R) = enc.reps.col(c.start);
    col.segment(R, R) = enc.reps.col(c.end);
    col.segment(2 * R, R) =
        enc.reps.middleCols(c.start, c.width()).rowwise().sum() /
        static_cast<double>(c.width());
    col.segment(3 * R, wd) = width_emb.col(c.width() - 1);
  }
  MatrixXd pre = params.Mat(l.ment_w1) * out.reps;
  pre.colwise() += params.Vec(l.ment_b1);
  out.mention_hidden = pre.array().tanh();
  const VectorXd scores = out.mention_hidden.transpose() * params.Vec(l.ment_w2);
  const double bias = params.Vec(l.ment_b2)[0];
  for (int n = 0; n < N; ++n) out.spans[n].mention_score = scores[n] + bias;

  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  const int keep = RetainedCount(T, N, hp.prune_ratio);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return out.spans[x].mention_score > out.spans[y].mention_score;
  });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  out.retained = std::move(order);
  return out;
}

std::vector<AntecedentFrame> AntecedentDistribution(const WindowInput &in,
                                                    const SpanSet &spans,
                                                    const ModelParams &params) {
  (void)in;
  const HyperParams &hp = params.hp();
  const ParamLayout &l = params.layout();
  const PairBlocks w1(params);
  const auto b1 = params.Vec(l.ante_b1);
  const auto w2 = params.Vec(l.ante_w2);
  const double b2 = params.Vec(l.ante_b2)[0];
  // The first layer is linear in each input block, so the g_i and g_j parts
  // are computed once per span instead of once per pair.
  const MatrixXd left = w1.left * spans.reps;
  const MatrixXd right = w1.right * spans.reps;
  const MatrixXd dist = w1.dist * params.Mat(l.dist_emb);
  std::vector<AntecedentFrame> frames;
  frames.reserve(spans.retained.size());
  for (std::size_t r = 0; r < spans.retained.size(); ++r) {
    AntecedentFrame f;
    f.span = spans.retained[r];
    f.candidates.push_back(kDummyAntecedent);
    f.scores.push_back(0.0);
    for (std::size_t k = 0; k < r && static_cast<int>(k) < hp.max_antecedents;
         ++k) {
      f.candidates.push_back(spans.retained[r - 1 - k]);
    }
    const int C = static_cast<int>(f.candidates.size()) - 1;
    const int i = f.span;
    const double sm_i = spans.spans[i].mention_score;
    if (C > 0) {
      const MatrixXd ante = GatherReps(spans, f.candidates);
      MatrixXd pre =
          (w1.product * spans.reps.col(i).asDiagonal()) * ante;
      pre.colwise() += left.col(i) + b1;
      for (int c = 0; c < C; ++c) {
        const int j = f.candidates[c + 1];
        pre.col(c) += right.col(j) + dist.col(PairBucket(spans, i, j));
      }
      f.pair_hidden = pre.array().tanh();
      const VectorXd sa = f.pair_hidden.transpose() * w2;
      for (int c = 0; c < C; ++c) {
        const int j = f.candidates[c + 1];
        f.scores.push_back(sm_i + spans.spans[j].mention_score + sa[c] + b2);
      }
    } else {
      f.pair_hidden.resize(hp.hidden_dim, 0);
    }
    const double lse = LogSumExp(f.scores, nullptr);
    f.probs.resize(f.scores.size());
    for (std::size_t c = 0; c < f.scores.size(); ++c) {
      f.probs[c] = std::exp(f.scores[c] - lse);
    }
    f.gold_mask.assign(f.scores.size(), 0);
    f.gold_mask[0] = 1;
    frames.push_back(std::move(f));
  }
  return frames;
}

void AssignGold(const WindowInput &in, const SpanSet &spans,
                std::vector<AntecedentFrame> *frames) {
  const std::vector<int> entity = SpanEntities(in, spans);
  for (AntecedentFrame &f : *frames) {
    std::fill(f.gold_mask.begin(), f.gold_mask.end(), 0);
    const int e = entity[f.span];
    bool any = false;
    for (std::size_t c = 1; c < f.candidates.size(); ++c) {
      if (e >= 0 && entity[f.candidates[c]] == e) {
        f.gold_mask[c] = 1;
        any = true;
      }
    }
    if (!any) f.gold_mask[0] = 1;
  }
}

double FrameLoss(const AntecedentFrame &frame) {
  return LogSumExp(frame.scores, nullptr) -
         LogSumExp(frame.scores, &frame.gold_mask);
}

std::vector<int> SelectHeads(std::span<const double> probs, double threshold) {
  std::vector<int> out;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] > threshold) out.push_back(static_cast<int>(k));
  }
  if (out.empty() && !probs.empty()) {
    out.push_back(static_cast<int>(
        std::max_element(probs.begin(), probs.end()) - probs.begin()));
  }
  return out;
}

HeadPrediction PredictHeads(const SpanSet &spans, int span,
                            const EncodedWindow &enc,
                            const ModelParams &params) {
  HeadPrediction out;
  out.span = span;
  std::vector<VectorXd> hidden;
  out.logits = HeadLogits(spans, span, enc, params, &hidden);
  for (double x : out.logits) out.probs.push_back(Sigmoid(x));
  out.heads = SelectHeads(out.probs, params.hp().head_threshold);
  out.best = static_cast<int>(
      std::max_element(out.probs.begin(), out.probs.end()) -
      out.probs.begin());
  return out;
}

double HeadLoss(std::span<const double> logits, int gold,
                std::vector<double> *dlogits) {
  const int w = static_cast<int>(logits.size());
  if (gold < 0 || gold >= w) {
    throw std::invalid_argument("gold head outside the span");
  }
  double loss = 0;
  if (dlogits) dlogits->assign(w, 0.0);
  for (int k = 0; k < w; ++k) {
    const double y = k == gold ? 1.0 : 0.0;
    loss += Softplus(logits[k]) - y * logits[k];
    if (dlogits) (*dlogits)[k] = (Sigmoid(logits[k]) - y) / w;
  }
  return loss / w;
}

LossResult ComputeLoss(const WindowInput &in, const ModelParams &params,
                       ModelParams *grads) {
  const HyperParams &hp = params.hp();
  const ParamLayout &l = params.layout();
  const int T = in.size();
  const int td = hp.token_dim;
  const int dd = hp.deprel_dim;
  const int D = hp.tree_depth;
  const int R = hp.token_rep_width();
  const int G = hp.span_rep_width();
  const int wd = hp.width_dim;
  LossResult result;
  if (T == 0) return result;

  const EncodedWindow enc = EncodeTokens(in, params);
  const SpanSet spans = EnumerateSpans(in, enc, params);
  std::vector<AntecedentFrame> frames = AntecedentDistribution(in, spans, params);
  AssignGold(in, spans, &frames);
  for (const AntecedentFrame &f : frames) result.coref += FrameLoss(f);
  result.frames = static_cast<int>(frames.size());

  const bool heads = hp.head_variant != HeadVariant::kOff;
  std::vector<std::pair<int, int>> head_targets;  // (span, gold offset)
  if (heads) {
    for (const GoldSpan &g : in.gold) {
      const int idx = spans.Find(g.start, g.end);
      if (idx >= 0) head_targets.emplace_back(idx, g.head_offset);
    }
  }
  std::vector<std::vector<double>> head_dlogits(head_targets.size());
  std::vector<std::vector<VectorXd>> head_hidden(head_targets.size());
  for (std::size_t h = 0; h < head_targets.size(); ++h) {
    const auto [span, gold] = head_targets[h];
    const std::vector<double> logits =
        HeadLogits(spans, span, enc, params, &head_hidden[h]);
    result.head += HeadLoss(logits, gold, grads ? &head_dlogits[h] : nullptr);
  }
  result.head *= hp.head_loss_weight;
  result.total = result.coref + result.head;
  if (!grads) return result;

  ModelParams &g = *grads;
  const int N = static_cast<int>(spans.spans.size());
  MatrixXd dspan = MatrixXd::Zero(G, N);
  VectorXd dscore = VectorXd::Zero(N);

  // Antecedent softmax: d loss / d score = P - Q, Q the gold-renormalized P.
  {
    const PairBlocks w1(params);
    const auto w2 = params.Vec(l.ante_w2);
    const auto dist_emb = params.Mat(l.dist_emb);
    auto gw1 = g.Mat(l.ante_w1);
    auto gb1 = g.Vec(l.ante_b1);
    auto gw2 = g.Vec(l.ante_w2);
    auto gb2 = g.Vec(l.ante_b2);
    auto gdist = g.Mat(l.dist_emb);
    MatrixXd dleft = MatrixXd::Zero(hp.hidden_dim, N);
    MatrixXd dright = MatrixXd::Zero(hp.hidden_dim, N);
    MatrixXd ddist = MatrixXd::Zero(hp.hidden_dim, kDistanceBuckets);
    MatrixXd gproduct = MatrixXd::Zero(hp.hidden_dim, G);
    for (const AntecedentFrame &f : frames) {
      const int C = static_cast<int>(f.candidates.size()) - 1;
      if (C == 0) continue;
      const double lse_gold = LogSumExp(f.scores, &f.gold_mask);
      VectorXd ds(C);
      for (int c = 0; c < C; ++c) {
        const double q =
            f.gold_mask[c + 1] ? std::exp(f.scores[c + 1] - lse_gold) : 0.0;
        ds[c] = f.probs[c + 1] - q;
      }
      if (ds.isZero(0.0)) continue;
      const int i = f.span;
      dscore[i] += ds.sum();
      gw2.noalias() += f.pair_hidden * ds;
      gb2[0] += ds.sum();
      const MatrixXd dpre =
          (w2 * ds.transpose())
              .cwiseProduct((1.0 - f.pair_hidden.array().square()).matrix());
      const MatrixXd ante = GatherReps(spans, f.candidates);
      gb1 += dpre.rowwise().sum();
      dleft.col(i) += dpre.rowwise().sum();
      // Product block: pre += P diag(g_i) g_j.
      const MatrixXd outer = dpre * ante.transpose();  // H x G
      gproduct.noalias() += outer * spans.reps.col(i).asDiagonal();
      const MatrixXd back = w1.product.transpose() * dpre;  // G x C
      dspan.col(i) += back.cwiseProduct(ante).rowwise().sum();
      const MatrixXd dante = spans.reps.col(i).asDiagonal() * back;
      for (int c = 0; c < C; ++c) {
        const int j = f.candidates[c + 1];
        dscore[j] += ds[c];
        dright.col(j) += dpre.col(c);
        dspan.col(j) += dante.col(c);
        ddist.col(PairBucket(spans, i, j)) += dpre.col(c);
      }
    }
    gw1.middleCols(0, G).noalias() += dleft * spans.reps.transpose();
    gw1.middleCols(G, G).noalias() += dright * spans.reps.transpose();
    gw1.middleCols(2 * G, G) += gproduct;
    gw1.middleCols(3 * G, wd).noalias() += ddist * dist_emb.transpose();
    dspan.noalias() += w1.left.transpose() * dleft;
    dspan.noalias() += w1.right.transpose() * dright;
    gdist.noalias() += w1.dist.transpose() * ddist;
  }

  // Mention scorer.
  {
    auto gw1 = g.Mat(l.ment_w1);
    auto gb1 = g.Vec(l.ment_b1);
    auto gw2 = g.Vec(l.ment_w2);
    auto gb2 = g.Vec(l.ment_b2);
    const MatrixXd &Z = spans.mention_hidden;
    gw2 += Z * dscore;
    gb2[0] += dscore.sum();
    const MatrixXd dpre =
        (params.Vec(l.ment_w2) * dscore.transpose())
            .cwiseProduct((1.0 - Z.array().square()).matrix());
    gw1.noalias() += dpre * spans.reps.transpose();
    gb1 += dpre.rowwise().sum();
    dspan.noalias() += params.Mat(l.ment_w1).transpose() * dpre;
  }

  MatrixXd drep = MatrixXd::Zero(R, T);

  // Head predictors.
  const double hw = hp.head_loss_weight;
  for (std::size_t h = 0; h < head_targets.size(); ++h) {
    const int span = head_targets[h].first;
    const SpanCandidate &c = spans.spans[span];
    const int w = c.width();
    const std::vector<double> &dl = head_dlogits[h];
    if (hp.head_variant == HeadVariant::kPositional) {
      const VectorXd &z = head_hidden[h][0];
      VectorXd dlv(w);
      for (int k = 0; k < w; ++k) dlv[k] = hw * dl[k];
      g.Mat(l.hpos_w2).topRows(w).noalias() += dlv * z.transpose();
      g.Vec(l.hpos_b2).head(w) += dlv;
      const VectorXd dz = params.Mat(l.hpos_w2).topRows(w).transpose() * dlv;
      const VectorXd dpre =
          dz.cwiseProduct((1.0 - z.array().square()).matrix());
      g.Mat(l.hpos_w1).noalias() += dpre * spans.reps.col(span).transpose();
      g.Vec(l.hpos_b1) += dpre;
      dspan.col(span) += params.Mat(l.hpos_w1).transpose() * dpre;
    } else {
      VectorXd q(G + R);
      q.head(G) = spans.reps.col(span);
      for (int k = 0; k < w; ++k) {
        const double d = hw * dl[k];
        const VectorXd &z = head_hidden[h][k];
        g.Vec(l.hpair_w2) += d * z;
        g.Vec(l.hpair_b2)[0] += d;
        const VectorXd dpre = (d * params.Vec(l.hpair_w2))
                                  .cwiseProduct(
                                      (1.0 - z.array().square()).matrix());
        q.tail(R) = enc.reps.col(c.start + k);
        g.Mat(l.hpair_w1).noalias() += dpre * q.transpose();
        g.Vec(l.hpair_b1) += dpre;
        const VectorXd dq = params.Mat(l.hpair_w1).transpose() * dpre;
        dspan.col(span) += dq.head(G);
        drep.col(c.start + k) += dq.tail(R);
      }
    }
  }

  // Span representations.
  {
    auto gwidth = g.Mat(l.width_emb);
    for (int n = 0; n < N; ++n) {
      const auto d = dspan.col(n);
      if (d.isZero(0.0)) continue;
      const SpanCandidate &c = spans.spans[n];
      drep.col(c.start) += d.segment(0, R);
      drep.col(c.end) += d.segment(R, R);
      const VectorXd mean = d.segment(2 * R, R) / static_cast<double>(c.width());
      for (int t = c.start; t <= c.end; ++t) drep.col(t) += mean;
      gwidth.col(c.width() - 1) += d.segment(3 * R, wd);
    }
  }

  // Token representations: mixer output plus tree slots.
  MatrixXd dhidden = drep.topRows(td);
  if (D > 0) {
    auto gdeprel = g.Mat(l.deprel_emb);
    for (int t = 0; t < T; ++t) {
      for (int d = 0; d < D; ++d) {
        const int base = td + d * (td + dd);
        const int anc = in.tree_ancestor[t * D + d];
        if (anc >= 0) dhidden.col(anc) += drep.col(t).segment(base, td);
        gdeprel.col(in.tree_deprel[t * D + d]) +=
            drep.col(t).segment(base + td, dd);
      }
    }
  }

  // Mixer and input embeddings.
  {
    const MatrixXd dpre =
        dhidden.cwiseProduct((1.0 - enc.hidden.array().square()).matrix());
    g.Vec(l.mix_b) += dpre.rowwise().sum();
    const auto mix_w = params.Mat(l.mix_w);
    auto gmix = g.Mat(l.mix_w);
    MatrixXd dinputs = MatrixXd::Zero(3 * td, T);
    for (int t = 0; t < T; ++t) {
      for (int o = -kMixerRadius; o <= kMixerRadius; ++o) {
        const int u = t + o;
        if (u < 0 || u >= T || in.sentence[u] != in.sentence[t]) continue;
        const int off = (o + kMixerRadius) * 3 * td;
        gmix.middleCols(off, 3 * td).noalias() +=
            dpre.col(t) * enc.inputs.col(u).transpose();
        dinputs.col(u).noalias() +=
            mix_w.middleCols(off, 3 * td).transpose() * dpre.col(t);
      }
    }
    auto gform = g.Mat(l.form_emb);
    auto gupos = g.Mat(l.upos_emb);
    auto gpos = g.Mat(l.pos_emb);
    for (int t = 0; t < T; ++t) {
      gform.col(in.form[t]) += dinputs.col(t).segment(0, td);
      gupos.col(in.upos[t]) += dinputs.col(t).segment(td, td);
      gpos.col(in.position[t]) += dinputs.col(t).segment(2 * td, td);
    }
  }
  return result;
}

}  // namespace corefkit
