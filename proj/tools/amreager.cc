// Copyright 2026 The AmrEager Authors.
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

// amreager: command-line driver for the pipeline stages.
//
//   amreager preprocess --amr train.amr --conllu train.conllu --out run/prep
//   amreager oracle --train run/prep/archive.jsonl --vectors vectors.txt
//       --out run/samples
//   amreager train --samples run/samples --out run/model
//   amreager parse --model run/model --concepts run/prep/concepts.tsv
//       --input dev.conllu --output run/dev.parsed.amr
//   amreager evaluate --predicted run/dev.parsed.amr --gold dev.amr
//
// Options may also come from a key=value file given with --config (flags
// win). Every stage writes config.resolved next to its outputs.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "amreager/errors.h"
#include "amreager/io.h"
#include "amreager/pipeline.h"

namespace {

using namespace amreager;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kInternalError = 3;

struct Flags {
  int jobs = 1;
  uint64_t seed = 1;
  std::string log_level = "info";

  PreprocessOptions preprocess;
  bool no_align = false;

  OracleOptions oracle;
  std::string word_source = "static";
  std::string concept_source = "static";
  bool no_dependency = false;

  TrainOptions train;
  std::vector<std::string> classifiers;
  bool search = false;
  SearchSpace space;

  ParseOptions parse;

  EvaluateOptions evaluate;
  std::string format = "table";
  std::string report;
};

void WriteResolvedConfig(const CLI::App &app, const fs::path &dir) {
  WriteFile(dir / "config.resolved", app.config_to_str(true, false));
}

void RunPreprocessCommand(Flags &flags) {
  flags.preprocess.align_missing = !flags.no_align;
  const PreprocessSummary summary = RunPreprocess(flags.preprocess);
  const CorpusStats &s = summary.stats;
  spdlog::info("{} sentences, {} tokens, {} nodes", s.sentences, s.tokens, s.nodes);
  spdlog::info("alignment coverage {:.3f}, reentrant {:.3f}, non-projective {:.3f}",
               s.alignment_coverage, s.reentrant_sentences,
               s.nonprojective_sentences);
  spdlog::info("{} concept table entries, {} fragment(s) dropped",
               summary.concept_entries, summary.fragments_dropped);
}

void RunOracleCommand(Flags &flags) {
  FeatureOptions &features = flags.oracle.features;
  features.word_source = ParseWordSource(flags.word_source);
  features.concept_source = ParseConceptSource(flags.concept_source);
  features.use_dependency = !flags.no_dependency;
  flags.oracle.jobs = flags.jobs;
  const OracleSummary summary = RunOracleStage(flags.oracle);
  for (ClassifierId id : kClassifierIds) {
    const int k = static_cast<int>(id);
    spdlog::info("{}: {} train / {} dev samples", ClassifierName(id),
                 summary.samples[k], summary.dev_samples[k]);
  }
  spdlog::info("oracle replay Smatch {:.4f}", summary.replay_smatch);
}

void RunTrainCommand(Flags &flags) {
  if (!flags.classifiers.empty()) {
    flags.train.classifiers.clear();
    for (const std::string &name : flags.classifiers) {
      flags.train.classifiers.push_back(ParseClassifierId(name));
    }
  }
  flags.train.config.seed = flags.seed;
  if (flags.search) flags.train.search = flags.space;
  const TrainSummary summary = RunTrain(flags.train);
  for (const auto &[id, accuracy] : summary.train_accuracy) {
    spdlog::info("{} train accuracy {:.4f}", ClassifierName(id), accuracy);
  }
  for (const auto &[id, accuracy] : summary.dev_accuracy) {
    spdlog::info("{} dev accuracy {:.4f}", ClassifierName(id), accuracy);
  }
}

int RunParseCommand(Flags &flags) {
  flags.parse.jobs = flags.jobs;
  const ParseSummary summary = RunParse(flags.parse);
  spdlog::info("parsed {} sentence(s), {} root fallback(s)", summary.parsed,
               summary.root_fallbacks);
  if (!summary.failures.empty()) {
    for (const std::string &f : summary.failures) spdlog::error("{}", f);
    return kDataError;
  }
  return 0;
}

int RunEvaluateCommand(Flags &flags) {
  flags.evaluate.smatch.seed = flags.seed;
  const CorpusReport report = RunEvaluate(flags.evaluate);
  const std::string text =
      flags.format == "json" ? report.ToJsonLines() : report.ToTable();
  std::fputs(text.c_str(), stdout);
  if (!flags.report.empty()) WriteFile(flags.report, text);
  for (const std::string &e : report.errors) spdlog::error("{}", e);
  return report.errors.empty() ? 0 : kDataError;
}

}  // namespace

int main(int argc, char **argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("amreager"));
  spdlog::set_pattern("[%l] %v");

  Flags flags;
  CLI::App app{"Transition-based AMR parser"};
  app.set_config("--config", "", "key=value configuration file");
  app.add_option("--jobs", flags.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", flags.seed, "Random seed");
  app.add_option("--log-level", flags.log_level, "trace, debug, info, warn, error")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
  app.require_subcommand(1);
  app.fallthrough();

  CLI::App *pre = app.add_subcommand("preprocess", "Build an annotated archive");
  pre->add_option("--amr", flags.preprocess.amr, "AMR bank")
      ->required();
  pre->add_option("--conllu", flags.preprocess.conllu, "CoNLL-U annotations")
      ->required();
  pre->add_option("--alignments", flags.preprocess.alignments,
                  "Alignment file (id<TAB>JAMR alignment string)")
      ;
  pre->add_flag("--no-align", flags.no_align,
                "Fail instead of aligning sentences without alignments");
  pre->add_option("--out", flags.preprocess.out_dir, "Output directory")->required();

  CLI::App *orc = app.add_subcommand("oracle", "Generate classifier samples");
  orc->add_option("--train", flags.oracle.train_archive, "Training archive")
      ->required();
  orc->add_option("--dev", flags.oracle.dev_archive, "Development archive")
      ;
  orc->add_option("--vectors", flags.oracle.features.static_vectors,
                  "Static word vectors (text format)")
      ->required();
  orc->add_option("--embeddings", flags.word_source, "Word features: static or contextual")
      ->check(CLI::IsMember({"static", "contextual"}));
  orc->add_option("--contextual", flags.oracle.features.contextual,
                  "Contextual embedding file")
      ;
  orc->add_option("--concepts", flags.concept_source, "Concept features: static or none")
      ->check(CLI::IsMember({"static", "none"}));
  orc->add_flag("--no-dependency-features", flags.no_dependency,
                "Leave dependency features out of the template");
  orc->add_option("--out", flags.oracle.out_dir, "Output directory")->required();

  CLI::App *trn = app.add_subcommand("train", "Train classifiers");
  TrainConfig &config = flags.train.config;
  trn->add_option("--samples", flags.train.samples_dir, "Oracle output directory")
      ->required();
  trn->add_option("--classifier", flags.classifiers,
                  "action, label or reentrancy (default: all)")
      ->check(CLI::IsMember({"action", "label", "reentrancy"}));
  trn->add_option("--layers", config.hidden_layers, "Hidden layers")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  trn->add_option("--width", config.hidden_width, "Hidden layer width")
      ->capture_default_str()->check(CLI::PositiveNumber);
  trn->add_option("--learning-rate", config.learning_rate)
      ->capture_default_str()->check(CLI::PositiveNumber);
  trn->add_option("--momentum", config.momentum)
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  trn->add_option("--batch-size", config.batch_size)
      ->capture_default_str()->check(CLI::PositiveNumber);
  trn->add_option("--epochs", config.epochs)
      ->capture_default_str()->check(CLI::PositiveNumber);
  trn->add_option("--patience", config.patience)
      ->capture_default_str()->check(CLI::PositiveNumber);
  trn->add_flag("--search", flags.search, "Random hyper-parameter search");
  trn->add_option("--trials", flags.space.trials, "Search trials")
      ->capture_default_str()->check(CLI::PositiveNumber);
  trn->add_option("--out", flags.train.out_dir, "Model directory")->required();

  CLI::App *prs = app.add_subcommand("parse", "Parse CoNLL-U sentences");
  prs->add_option("--model", flags.parse.model_dir, "Model directory")
      ->required();
  prs->add_option("--concepts", flags.parse.concepts, "Concept table")
      ->required();
  prs->add_option("--input", flags.parse.input, "CoNLL-U input")
      ->required();
  prs->add_option("--contextual", flags.parse.contextual,
                  "Contextual embeddings for the input sentences")
      ;
  prs->add_option("--threshold", flags.parse.reentrancy_threshold,
                  "Reentrancy probability threshold")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  prs->add_option("--output", flags.parse.output, "Output AMR bank")->required();

  CLI::App *evl = app.add_subcommand("evaluate", "Score predicted graphs");
  evl->add_option("--predicted", flags.evaluate.predicted, "Predicted AMR bank")
      ->required();
  evl->add_option("--gold", flags.evaluate.gold, "Gold AMR bank")
      ->required();
  std::vector<std::string> metric_names(std::begin(kMetricNames),
                                        std::end(kMetricNames));
  evl->add_option("--metrics", flags.evaluate.metrics, "Metrics (default: all)")
      ->check(CLI::IsMember(metric_names));
  evl->add_option("--restarts", flags.evaluate.smatch.restarts, "Smatch restarts")
      ->capture_default_str()->check(CLI::PositiveNumber);
  evl->add_option("--format", flags.format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));
  evl->add_option("--report", flags.report, "Also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }
  spdlog::set_level(spdlog::level::from_str(flags.log_level));

  try {
    if (pre->parsed()) {
      RunPreprocessCommand(flags);
      WriteResolvedConfig(app, flags.preprocess.out_dir);
    } else if (orc->parsed()) {
      if (flags.word_source == "contextual" && !flags.oracle.features.contextual) {
        spdlog::error("--embeddings contextual needs --contextual FILE");
        return kUsageError;
      }
      RunOracleCommand(flags);
      WriteResolvedConfig(app, flags.oracle.out_dir);
    } else if (trn->parsed()) {
      RunTrainCommand(flags);
      WriteResolvedConfig(app, flags.train.out_dir);
    } else if (prs->parsed()) {
      const int code = RunParseCommand(flags);
      WriteResolvedConfig(app, fs::path(flags.parse.output).parent_path());
      return code;
    } else if (evl->parsed()) {
      return RunEvaluateCommand(flags);
    }
  } catch (const DataError &e) {
    spdlog::error("{}", e.what());
    return kDataError;
  } catch (const std::invalid_argument &e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  } catch (const std::exception &e) {
    spdlog::critical("internal error: {}", e.what());
    return kInternalError;
  }
  return 0;
}
