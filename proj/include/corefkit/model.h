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

// Span-ranking coreference model.
//
// Tokens are embedded from hashed forms, UPOS tags and sentence positions,
// mixed over a +-2 token window, and optionally extended with the encodings
// of their dependency ancestors. Every intra-sentence span up to
// max_span_width tokens receives a mention score; the best spans survive
// pruning and each of them picks an antecedent among its nearest
// predecessors or the dummy antecedent, whose score is fixed at 0. Training
// maximizes the log of the probability mass given to correct antecedents.
// Two optional heads predict which tokens of a span are its head word(s).

#ifndef COREFKIT_MODEL_H_
#define COREFKIT_MODEL_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "corefkit/document.h"
#include "corefkit/model_params.h"

namespace corefkit {

// A gold mention expressed as a window span.
struct GoldSpan {
  int start = 0;
  int end = 0;          // inclusive
  int entity = 0;       // index into Document::entities
  int head_offset = 0;  // head position relative to start
};

// Model-ready features of one window (a document or sub-document).
struct WindowInput {
  std::vector<TokenId> ids;
  std::vector<int> form, upos, position, sentence;
  std::vector<int> sentence_starts;  // one entry per sentence plus the end
  // tree_depth slots per token: ancestor position (-1 for ROOT or padding)
  // and relation index.
  std::vector<int> tree_ancestor, tree_deprel;
  std::vector<GoldSpan> gold;
  // Gold mentions that cannot be candidates (discontinuous or too wide).
  int skipped_gold = 0;

  int size() const { return static_cast<int>(ids.size()); }
};

WindowInput PrepareWindow(const Document &doc, const HyperParams &hp);

struct EncodedWindow {
  Eigen::MatrixXd inputs;  // 3 * token_dim x T
  Eigen::MatrixXd hidden;  // token_dim x T
  Eigen::MatrixXd reps;    // token_rep_width x T
};

EncodedWindow EncodeTokens(const WindowInput &in, const ModelParams &params);

struct SpanCandidate {
  int start = 0;
  int end = 0;  // inclusive
  double mention_score = 0;

  int width() const { return end - start + 1; }
};

struct SpanSet {
  std::vector<SpanCandidate> spans;  // every candidate, by (start, end)
  Eigen::MatrixXd reps;              // span_rep_width x N
  Eigen::MatrixXd mention_hidden;    // hidden_dim x N
  std::vector<int> retained;         // indices into spans, ascending

  // Index of the candidate (start, end), or -1.
  int Find(int start, int end) const;
};

// Number of spans kept out of `candidates` for a window of `tokens` tokens.
// A ratio of 1 keeps everything.
int RetainedCount(int tokens, int candidates, double ratio);

SpanSet EnumerateSpans(const WindowInput &in, const EncodedWindow &enc,
                       const ModelParams &params);

inline constexpr int kDummyAntecedent = -1;

struct AntecedentFrame {
  int span = 0;  // index into SpanSet::spans
  // candidates[0] is the dummy; the rest are span indices, nearest first.
  std::vector<int> candidates;
  std::vector<double> scores;  // scores[0] == 0
  std::vector<double> probs;
  std::vector<char> gold_mask;
  Eigen::MatrixXd pair_hidden;  // hidden_dim x (candidates.size() - 1)
};

std::vector<AntecedentFrame> AntecedentDistribution(const WindowInput &in,
                                                    const SpanSet &spans,
                                                    const ModelParams &params);

// Marks, for every frame, the candidates in the same gold entity as the
// frame's span; the dummy is gold when nothing else is.
void AssignGold(const WindowInput &in, const SpanSet &spans,
                std::vector<AntecedentFrame> *frames);

// -log of the gold probability mass of one frame.
double FrameLoss(const AntecedentFrame &frame);

struct HeadPrediction {
  int span = 0;
  std::vector<double> logits;  // one per in-span position
  std::vector<double> probs;
  std::vector<int> heads;      // positions above threshold, or the argmax
  int best = 0;                // most probable position
};

HeadPrediction PredictHeads(const SpanSet &spans, int span,
                            const EncodedWindow &enc,
                            const ModelParams &params);

// Positions with probability above threshold; the argmax when none is.
std::vector<int> SelectHeads(std::span<const double> probs, double threshold);

// Mean binary cross-entropy of the logits against a one-hot gold position.
// Writes d loss / d logits when requested. Throws std::invalid_argument when
// gold is outside the span.
double HeadLoss(std::span<const double> logits, int gold,
                std::vector<double> *dlogits = nullptr);

struct LossResult {
  double coref = 0;
  double head = 0;
  double total = 0;
  int frames = 0;
};

// Loss of a window under params; accumulates gradients into grads (same
// shape as params) when it is non-null.
LossResult ComputeLoss(const WindowInput &in, const ModelParams &params,
                       ModelParams *grads);

}  // namespace corefkit

#endif  // COREFKIT_MODEL_H_
