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

#ifndef COREFKIT_MODEL_PARAMS_H_
#define COREFKIT_MODEL_PARAMS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace corefkit {

enum class HeadVariant { kOff = 0, kPositional = 1, kPairwise = 2 };

std::string ToString(HeadVariant v);
// Accepts "off", "positional", "pairwise"; throws std::invalid_argument.
HeadVariant ParseHeadVariant(std::string_view text);

struct HyperParams {
  int token_dim = 16;     // encoder output width, also the tree slot width
  int deprel_dim = 8;
  int hidden_dim = 32;    // hidden layer of every scoring network
  int width_dim = 8;      // span width and distance embeddings
  int form_buckets = 2048;
  int max_span_width = 10;
  int tree_depth = 0;     // 0 disables the tree encoding
  double prune_ratio = 0.4;
  int max_antecedents = 50;
  HeadVariant head_variant = HeadVariant::kOff;
  double head_threshold = 0.5;
  double head_loss_weight = 1.0;
  int segment_length = 512;
  int max_segments = 6;
  double learning_rate = 0.05;
  double clip_norm = 5.0;

  // Throws std::invalid_argument naming the first bad field.
  void Validate() const;

  // Width of one token representation: encoder output plus tree slots.
  int token_rep_width() const;
  // start rep, end rep, mean rep, width embedding.
  int span_rep_width() const;
  // Two span reps, their product, distance embedding.
  int pair_input_width() const;

  bool operator==(const HyperParams &) const = default;
};

// Categorical feature vocabularies. Index 0 is "unknown" except for
// relations, where 0 is the padding label and 1 is unknown.
int UposIndex(std::string_view upos);
int UposVocabSize();
int DeprelIndex(std::string_view deprel);  // subtypes ("nmod:poss") map to the base
int DeprelVocabSize();
// Log-scale buckets 0,1,2,3,4,5-7,8-15,16-31,32-63,64+.
int DistanceBucket(int distance);
inline constexpr int kDistanceBuckets = 10;
// Stable FNV-1a hash of the form into [0, buckets).
int FormBucket(std::string_view form, int buckets);

// Column-major matrix slice of the flat parameter buffer.
struct TensorSlot {
  std::string name;
  std::size_t offset = 0;
  int rows = 0;
  int cols = 0;

  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

// Parameter tensors in storage order. Embedding tables keep one embedding
// per column.
struct ParamLayout {
  TensorSlot form_emb, upos_emb, pos_emb, deprel_emb, width_emb, dist_emb;
  TensorSlot mix_w, mix_b;  // mix_w holds the five window offsets side by side
  TensorSlot ment_w1, ment_b1, ment_w2, ment_b2;
  TensorSlot ante_w1, ante_b1, ante_w2, ante_b2;
  TensorSlot hpos_w1, hpos_b1, hpos_w2, hpos_b2;
  TensorSlot hpair_w1, hpair_b1, hpair_w2, hpair_b2;
  std::size_t total = 0;

  static ParamLayout For(const HyperParams &hp);
  std::vector<const TensorSlot *> slots() const;
};

// Offsets covered by the local mixer: -2..2.
inline constexpr int kMixerRadius = 2;
inline constexpr int kMixerTaps = 2 * kMixerRadius + 1;

// A flat buffer of doubles shaped by a ParamLayout. Used both for model
// weights and for their gradients.
class ModelParams {
 public:
  ModelParams() = default;
  explicit ModelParams(const HyperParams &hp);

  // Glorot-uniform weights, small uniform embeddings, zero biases. Values are
  // rounded to binary32 so that saving is lossless.
  static ModelParams Random(const HyperParams &hp, std::uint64_t seed);

  const HyperParams &hp() const { return hp_; }
  const ParamLayout &layout() const { return layout_; }
  std::vector<double> &values() { return values_; }
  const std::vector<double> &values() const { return values_; }

  Eigen::Map<Eigen::MatrixXd> Mat(const TensorSlot &slot) {
    return {values_.data() + slot.offset, slot.rows, slot.cols};
  }
  Eigen::Map<const Eigen::MatrixXd> Mat(const TensorSlot &slot) const {
    return {values_.data() + slot.offset, slot.rows, slot.cols};
  }
  Eigen::Map<Eigen::VectorXd> Vec(const TensorSlot &slot) {
    return {values_.data() + slot.offset,
            static_cast<Eigen::Index>(slot.size())};
  }
  Eigen::Map<const Eigen::VectorXd> Vec(const TensorSlot &slot) const {
    return {values_.data() + slot.offset,
            static_cast<Eigen::Index>(slot.size())};
  }

  void SetZero();
  bool AllFinite() const;
  double Norm() const;
  // Rounds every value to the nearest binary32.
  void RoundToFloat();

  bool operator==(const ModelParams &o) const {
    return hp_ == o.hp_ && values_ == o.values_;
  }

 private:
  HyperParams hp_;
  ParamLayout layout_;
  std::vector<double> values_;
};

}  // namespace corefkit

#endif  // COREFKIT_MODEL_PARAMS_H_
