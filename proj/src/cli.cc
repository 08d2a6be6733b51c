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

#include "corefkit/cli.h"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "corefkit/conllu.h"
#include "corefkit/corpus_stats.h"
#include "corefkit/decode.h"
#include "corefkit/model_io.h"
#include "corefkit/scorer.h"
#include "corefkit/trainer.h"
#include "corefkit/validation.h"

namespace corefkit {
namespace {

// Signals a problem with the input data rather than with the invocation.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Document> Load(const std::string &path) {
  return ReadConlluFile(path);
}

int Validate(const std::vector<std::string> &files, std::ostream &out) {
  int bad = 0;
  for (const std::string &file : files) {
    std::vector<Document> docs;
    try {
      docs = Load(file);
    } catch (const ParseError &e) {
      out << e.what() << "\n";
      ++bad;
      continue;
    }
    int problems = 0;
    for (const Document &doc : docs) {
      for (const Violation &v : ValidateDocument(doc)) {
        out << file << ": " << doc.doc_id << ": " << ToString(v) << "\n";
        ++problems;
      }
    }
    if (problems == 0) {
      out << file << ": OK (" << docs.size() << " documents)\n";
    } else {
      ++bad;
    }
  }
  return bad == 0 ? kExitOk : kExitDataError;
}

std::string Align(const std::vector<std::vector<std::string>> &rows) {
  std::vector<std::size_t> width;
  for (const auto &row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream os;
  for (const auto &row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        os << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        os << "  " << std::right << std::setw(static_cast<int>(width[c]))
           << row[c];
      }
    }
    os << "\n";
  }
  return os.str();
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, '\t')) out.push_back(cell);
  return out;
}

int Stats(const std::vector<std::string> &files, bool tsv, std::ostream &out) {
  std::vector<std::string> lines = {StatsHeader()};
  CorpusStats total;
  for (const std::string &file : files) {
    const std::vector<Document> docs = Load(file);
    const CorpusStats s = ComputeStats(docs);
    total += s;
    lines.push_back(StatsRow(std::filesystem::path(file).stem().string(), s));
  }
  if (files.size() > 1) lines.push_back(StatsRow("total", total));
  if (tsv) {
    for (const std::string &l : lines) out << l << "\n";
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const std::string &l : lines) rows.push_back(SplitTabs(l));
    out << Align(rows);
  }
  return kExitOk;
}

int Score(const std::string &gold_path, const std::string &sys_path,
          bool keep_singletons, bool machine, std::ostream &out) {
  const std::vector<Document> gold = Load(gold_path);
  const std::vector<Document> sys = Load(sys_path);
  EvalReport report;
  try {
    report = EvaluateCorpus(gold, sys, keep_singletons);
  } catch (const std::invalid_argument &e) {
    throw DataError(sys_path + ": " + e.what());
  }
  out << (machine ? FormatReportMachine(report) : FormatReportTable(report));
  return kExitOk;
}

int Heads(const std::string &in, const std::string &out_path) {
  std::vector<Document> docs = Load(in);
  for (Document &d : docs) d = ReduceToHeads(d);
  WriteConlluFile(out_path, docs);
  return kExitOk;
}

int Predict(const std::string &model_path, const std::string &in,
            const std::string &out_path, bool heads_only) {
  const SavedModel model = LoadModelFile(model_path);
  std::vector<Document> docs = Load(in);
  for (Document &d : docs) d = PredictDocument(d, model.params, heads_only);
  WriteConlluFile(out_path, docs);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Coreference toolkit for CoNLL-U corpora with entity markup",
               args.empty() ? "corefkit" : args[0]};
  app.require_subcommand(1);

  std::vector<std::string> files;
  bool tsv = false;
  auto *validate = app.add_subcommand("validate", "Parse and check files");
  validate->add_option("files", files, "CoNLL-U files")->required();
  auto *stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("files", files, "CoNLL-U files")->required();
  stats->add_flag("--tsv", tsv, "Tab-separated output");

  std::string gold, sys;
  bool keep_singletons = false, machine = false;
  auto *score = app.add_subcommand("score", "Score system against gold");
  score->add_option("--gold", gold, "Gold CoNLL-U file")->required();
  score->add_option("--sys", sys, "System CoNLL-U file")->required();
  score->add_flag("--keep-singletons", keep_singletons,
                  "Score singleton entities too");
  score->add_flag("--machine", machine, "Exact key=value output");

  std::string config_path, target, model_out;
  bool joined = false, include_dev = false;
  std::uint64_t seed = 0;
  auto *train = app.add_subcommand("train", "Train a model");
  train->add_option("--config", config_path, "Config file")->required();
  auto *joined_flag = train->add_flag("--joined", joined,
                                      "Joined pretraining then fine-tuning");
  train->add_option("--target", target, "Fine-tuning corpus name")
      ->needs(joined_flag);
  train->add_flag("--include-dev", include_dev, "Add dev data to training");
  train->add_option("--out", model_out, "Model file")->required();
  auto *seed_opt = train->add_option("--seed", seed, "Random seed");

  std::string model_path, in_path, out_path;
  bool heads_only = false;
  auto *predict = app.add_subcommand("predict", "Predict entities");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--in", in_path, "Input CoNLL-U")->required();
  predict->add_option("--out", out_path, "Output CoNLL-U")->required();
  predict->add_flag("--heads-only", heads_only, "Output head words only");
  auto *heads = app.add_subcommand("heads", "Reduce gold mentions to heads");
  heads->add_option("--in", in_path, "Input CoNLL-U")->required();
  heads->add_option("--out", out_path, "Output CoNLL-U")->required();

  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (joined && target.empty()) {
      throw CLI::ValidationError("--joined requires --target");
    }
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App *sub = nullptr;
    for (const CLI::App *s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return Validate(files, out);
    if (stats->parsed()) return Stats(files, tsv, out);
    if (score->parsed()) {
      return Score(gold, sys, keep_singletons, machine, out);
    }
    if (heads->parsed()) return Heads(in_path, out_path);
    if (predict->parsed()) {
      return Predict(model_path, in_path, out_path, heads_only);
    }
    if (train->parsed()) {
      TrainConfig config;
      try {
        config = ReadTrainConfig(config_path);
      } catch (const std::invalid_argument &e) {
        throw DataError(config_path + ": " + e.what());
      }
      if (joined) {
        config.schedule = Schedule::kJoinedThenFinetune;
        config.target = target;
      }
      if (include_dev) config.include_dev = true;
      if (seed_opt->count() > 0) config.seed = seed;
      try {
        config.Validate();
      } catch (const std::invalid_argument &e) {
        throw DataError(config_path + ": " + e.what());
      }
      const ModelParams params = RunTraining(config, &out);
      std::uint64_t steps = config.schedule == Schedule::kSingle
                                ? config.single_steps
                                : config.pretrain_steps + config.finetune_steps;
      SaveModelFile(params, steps, model_out);
      out << "saved " << model_out << "\n";
      return kExitOk;
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace corefkit
