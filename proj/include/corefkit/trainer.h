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

// Online training: one document per update, plain gradient descent with
// norm clipping. Every draw of step n comes from a generator keyed by
// (seed, phase, n), so a run resumed from a checkpoint follows the same
// trajectory as an uninterrupted one.

#ifndef COREFKIT_TRAINER_H_
#define COREFKIT_TRAINER_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corefkit/document.h"
#include "corefkit/model_params.h"

namespace corefkit {

enum class Schedule { kSingle, kJoinedThenFinetune };

struct CorpusPaths {
  std::string name;
  std::vector<std::string> train;
  std::vector<std::string> dev;
};

struct TrainConfig {
  std::vector<CorpusPaths> corpora;
  Schedule schedule = Schedule::kSingle;
  std::string target;  // fine-tuning corpus; also selects the single corpus
  std::int64_t pretrain_steps = 80000;
  std::int64_t finetune_steps = 30000;
  std::int64_t single_steps = 80000;
  bool include_dev = false;
  std::uint64_t seed = 0;
  std::string checkpoint;  // written every log interval and at the end
  int log_every = 100;
  HyperParams hp;

  // Throws std::invalid_argument.
  void Validate() const;
  const CorpusPaths *Find(const std::string &name) const;
};

// "key = value" lines; '#' starts a comment. Keys: corpus.<name>.train,
// corpus.<name>.dev (comma-separated paths, relative to base_dir), schedule
// (single | joined_then_finetune), target, pretrain_steps, finetune_steps,
// single_steps, include_dev, seed, checkpoint, log_every and every
// HyperParams field. Unknown keys are errors.
TrainConfig ParseTrainConfig(std::istream &in, const std::string &base_dir);
TrainConfig ReadTrainConfig(const std::string &path);

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Phase ids keep the draws of the two joined phases independent.
inline constexpr std::uint64_t kPhaseSingle = 0;
inline constexpr std::uint64_t kPhasePretrain = 1;
inline constexpr std::uint64_t kPhaseFinetune = 2;

// Index in [0, corpus_size) of the document drawn at a step.
int SampleDocumentIndex(std::uint64_t seed, std::uint64_t phase,
                        std::uint64_t step, int corpus_size);

struct TrainState {
  ModelParams params;
  std::uint64_t step = 0;  // updates applied so far
};

struct OnlineOptions {
  std::int64_t steps = 0;  // updates to apply in this call
  std::uint64_t seed = 0;
  std::uint64_t phase = kPhaseSingle;
  std::ostream *log = nullptr;
  int log_every = 100;
  std::string checkpoint;
  // Called after every update with the step number (1-based) and its loss.
  std::function<void(std::uint64_t, double, const ModelParams &)> on_step;
};

// Applies options.steps updates to state. Throws TrainingDiverged after
// writing a diagnostic checkpoint (checkpoint path plus ".diverged") when a
// loss or gradient is not finite.
void TrainOnline(std::span<const Document> corpus, TrainState *state,
                 const OnlineOptions &options);

// Single or joined schedule as configured. Loads the corpora from disk.
ModelParams RunTraining(const TrainConfig &config, std::ostream *log);

// Joined schedule over in-memory corpora: pretraining on all train splits
// pooled, then fine-tuning on the target train split (plus its dev split
// when include_dev).
struct NamedCorpus {
  std::string name;
  std::vector<Document> train;
  std::vector<Document> dev;
};
ModelParams JoinedPretrainFinetune(std::span<const NamedCorpus> corpora,
                                   const std::string &target,
                                   const TrainConfig &config,
                                   std::ostream *log);

}  // namespace corefkit

#endif  // COREFKIT_TRAINER_H_
