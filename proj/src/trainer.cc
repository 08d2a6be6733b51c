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

#include "corefkit/trainer.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "corefkit/conllu.h"
#include "corefkit/model.h"
#include "corefkit/model_io.h"
#include "corefkit/random.h"
#include "corefkit/segmenter.h"

namespace corefkit {
namespace {

std::string Trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(const std::string &key, const std::string &value) {
  T out{};
  const char *end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

double ParseDouble(const std::string &key, const std::string &value) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(out)) {
    throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool ParseBool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
}

std::vector<std::string> SplitPaths(const std::string &value,
                                    const std::string &base_dir) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    std::filesystem::path p(item);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    out.push_back(p.string());
  }
  return out;
}

bool SetHyperParam(HyperParams &hp, const std::string &key,
                   const std::string &value) {
  auto set_int = [&](int &field) { field = ParseNumber<int>(key, value); };
  auto set_double = [&](double &field) { field = ParseDouble(key, value); };
  if (key == "token_dim") set_int(hp.token_dim);
  else if (key == "deprel_dim") set_int(hp.deprel_dim);
  else if (key == "hidden_dim") set_int(hp.hidden_dim);
  else if (key == "width_dim") set_int(hp.width_dim);
  else if (key == "form_buckets") set_int(hp.form_buckets);
  else if (key == "max_span_width") set_int(hp.max_span_width);
  else if (key == "tree_depth") set_int(hp.tree_depth);
  else if (key == "prune_ratio") set_double(hp.prune_ratio);
  else if (key == "max_antecedents") set_int(hp.max_antecedents);
  else if (key == "head_variant") hp.head_variant = ParseHeadVariant(value);
  else if (key == "head_threshold") set_double(hp.head_threshold);
  else if (key == "head_loss_weight") set_double(hp.head_loss_weight);
  else if (key == "segment_length") set_int(hp.segment_length);
  else if (key == "max_segments") set_int(hp.max_segments);
  else if (key == "learning_rate") set_double(hp.learning_rate);
  else if (key == "clip_norm") set_double(hp.clip_norm);
  else return false;
  return true;
}

CorpusPaths &CorpusEntry(TrainConfig &config, const std::string &name) {
  for (CorpusPaths &c : config.corpora) {
    if (c.name == name) return c;
  }
  config.corpora.push_back({name, {}, {}});
  return config.corpora.back();
}

std::vector<Document> LoadAll(const std::vector<std::string> &paths) {
  std::vector<Document> out;
  for (const std::string &p : paths) {
    std::vector<Document> docs = ReadConlluFile(p);
    for (Document &d : docs) out.push_back(std::move(d));
  }
  return out;
}

std::string FormatLoss(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

void TrainConfig::Validate() const {
  hp.Validate();
  if (corpora.empty()) throw std::invalid_argument("no corpora configured");
  for (const CorpusPaths &c : corpora) {
    if (c.train.empty()) {
      throw std::invalid_argument("corpus " + c.name + " has no train files");
    }
  }
  if (pretrain_steps < 1 || finetune_steps < 1 || single_steps < 1) {
    throw std::invalid_argument("step counts must be at least 1");
  }
  if (log_every < 1) throw std::invalid_argument("log_every must be >= 1");
  if (!target.empty() && !Find(target)) {
    throw std::invalid_argument("target corpus " + target + " not configured");
  }
  if (schedule == Schedule::kJoinedThenFinetune) {
    if (corpora.size() < 2) {
      throw std::invalid_argument("joined training needs at least 2 corpora");
    }
    if (target.empty()) {
      throw std::invalid_argument("joined training needs a target corpus");
    }
  } else if (target.empty() && corpora.size() != 1) {
    throw std::invalid_argument(
        "single training over several corpora needs a target");
  }
}

const CorpusPaths *TrainConfig::Find(const std::string &name) const {
  for (const CorpusPaths &c : corpora) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

TrainConfig ParseTrainConfig(std::istream &in, const std::string &base_dir) {
  TrainConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    try {
      if (key.rfind("corpus.", 0) == 0) {
        const std::string rest = key.substr(7);
        const auto dot = rest.rfind('.');
        const std::string name = dot == std::string::npos ? "" : rest.substr(0, dot);
        const std::string split = dot == std::string::npos ? "" : rest.substr(dot + 1);
        if (name.empty() || (split != "train" && split != "dev")) {
          throw std::invalid_argument("unknown key " + key);
        }
        CorpusPaths &c = CorpusEntry(config, name);
        (split == "train" ? c.train : c.dev) = SplitPaths(value, base_dir);
      } else if (key == "schedule") {
        if (value == "single") config.schedule = Schedule::kSingle;
        else if (value == "joined_then_finetune")
          config.schedule = Schedule::kJoinedThenFinetune;
        else throw std::invalid_argument("bad value for schedule: '" + value + "'");
      } else if (key == "target") {
        config.target = value;
      } else if (key == "pretrain_steps") {
        config.pretrain_steps = ParseNumber<std::int64_t>(key, value);
      } else if (key == "finetune_steps") {
        config.finetune_steps = ParseNumber<std::int64_t>(key, value);
      } else if (key == "single_steps" || key == "steps") {
        config.single_steps = ParseNumber<std::int64_t>(key, value);
      } else if (key == "include_dev") {
        config.include_dev = ParseBool(key, value);
      } else if (key == "seed") {
        config.seed = ParseNumber<std::uint64_t>(key, value);
      } else if (key == "checkpoint") {
        config.checkpoint = SplitPaths(value, base_dir).at(0);
      } else if (key == "log_every") {
        config.log_every = ParseNumber<int>(key, value);
      } else if (!SetHyperParam(config.hp, key, value)) {
        throw std::invalid_argument("unknown key " + key);
      }
    } catch (const std::invalid_argument &e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": " + e.what());
    }
  }
  return config;
}

TrainConfig ReadTrainConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  return ParseTrainConfig(in, std::filesystem::path(path).parent_path().string());
}

int SampleDocumentIndex(std::uint64_t seed, std::uint64_t phase,
                        std::uint64_t step, int corpus_size) {
  std::mt19937_64 rng = MakeRng({seed, phase, step});
  return static_cast<int>(UniformBelow(rng, corpus_size));
}

void TrainOnline(std::span<const Document> corpus, TrainState *state,
                 const OnlineOptions &options) {
  if (options.steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");
  ModelParams &params = state->params;
  const HyperParams &hp = params.hp();
  ModelParams grads(hp);
  double interval_sum = 0;
  double total_sum = 0;
  double last = 0;
  int interval_count = 0;
  for (std::int64_t k = 0; k < options.steps; ++k) {
    const std::uint64_t step = state->step;
    const int doc = SampleDocumentIndex(options.seed, options.phase, step,
                                        static_cast<int>(corpus.size()));
    std::mt19937_64 rng = MakeRng({options.seed, options.phase, step, 1});
    const SubDocument window = SampleTrainingDocument(
        corpus[doc], hp.segment_length, hp.max_segments, rng());
    const WindowInput in = PrepareWindow(window.doc, hp);
    grads.SetZero();
    const double loss = ComputeLoss(in, params, &grads).total;
    if (!std::isfinite(loss) || !grads.AllFinite()) {
      if (!options.checkpoint.empty()) {
        SaveModelFile(params, state->step, options.checkpoint + ".diverged");
      }
      throw TrainingDiverged("non-finite loss at step " +
                             std::to_string(step + 1));
    }
    const double norm = grads.Norm();
    const double scale =
        norm > hp.clip_norm ? hp.clip_norm / norm : 1.0;
    std::vector<double> &w = params.values();
    const std::vector<double> &g = grads.values();
    const double rate = hp.learning_rate * scale;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= rate * g[i];
    params.RoundToFloat();
    ++state->step;
    last = loss;
    total_sum += loss;
    interval_sum += loss;
    ++interval_count;
    if (options.on_step) options.on_step(state->step, loss, params);
    if (state->step % options.log_every == 0) {
      if (options.log) {
        *options.log << "step=" << state->step
                     << " loss=" << FormatLoss(interval_sum / interval_count)
                     << "\n";
      }
      interval_sum = 0;
      interval_count = 0;
      if (!options.checkpoint.empty()) {
        SaveModelFile(params, state->step, options.checkpoint);
      }
    }
  }
  if (!options.checkpoint.empty()) {
    SaveModelFile(params, state->step, options.checkpoint);
  }
  if (options.log) {
    *options.log << "finished steps=" << options.steps
                 << " mean_loss=" << FormatLoss(total_sum / options.steps)
                 << " last_loss=" << FormatLoss(last) << "\n";
  }
}

ModelParams JoinedPretrainFinetune(std::span<const NamedCorpus> corpora,
                                   const std::string &target,
                                   const TrainConfig &config,
                                   std::ostream *log) {
  if (corpora.size() < 2) {
    throw std::invalid_argument("joined training needs at least 2 corpora");
  }
  const NamedCorpus *tgt = nullptr;
  std::vector<Document> pooled;
  for (const NamedCorpus &c : corpora) {
    if (c.name == target) tgt = &c;
    pooled.insert(pooled.end(), c.train.begin(), c.train.end());
  }
  if (!tgt) throw std::invalid_argument("target corpus " + target + " not found");
  TrainState state{ModelParams::Random(config.hp, config.seed), 0};
  OnlineOptions opt;
  opt.seed = config.seed;
  opt.log = log;
  opt.log_every = config.log_every;
  opt.checkpoint = config.checkpoint;
  opt.steps = config.pretrain_steps;
  opt.phase = kPhasePretrain;
  if (log) *log << "phase=pretrain docs=" << pooled.size() << "\n";
  TrainOnline(pooled, &state, opt);
  std::vector<Document> finetune = tgt->train;
  if (config.include_dev) {
    finetune.insert(finetune.end(), tgt->dev.begin(), tgt->dev.end());
  }
  opt.steps = config.finetune_steps;
  opt.phase = kPhaseFinetune;
  if (log) *log << "phase=finetune corpus=" << target
                << " docs=" << finetune.size() << "\n";
  TrainOnline(finetune, &state, opt);
  return state.params;
}

ModelParams RunTraining(const TrainConfig &config, std::ostream *log) {
  config.Validate();
  if (config.schedule == Schedule::kJoinedThenFinetune) {
    std::vector<NamedCorpus> corpora;
    for (const CorpusPaths &c : config.corpora) {
      corpora.push_back({c.name, LoadAll(c.train), LoadAll(c.dev)});
    }
    return JoinedPretrainFinetune(corpora, config.target, config, log);
  }
  const CorpusPaths &c =
      config.target.empty() ? config.corpora.front() : *config.Find(config.target);
  std::vector<Document> train = LoadAll(c.train);
  if (config.include_dev) {
    std::vector<Document> dev = LoadAll(c.dev);
    train.insert(train.end(), dev.begin(), dev.end());
  }
  TrainState state{ModelParams::Random(config.hp, config.seed), 0};
  OnlineOptions opt;
  opt.steps = config.single_steps;
  opt.seed = config.seed;
  opt.phase = kPhaseSingle;
  opt.log = log;
  opt.log_every = config.log_every;
  opt.checkpoint = config.checkpoint;
  TrainOnline(train, &state, opt);
  return state.params;
}

}  // namespace corefkit
