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

#include "amreager/pipeline.h"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "json.hpp"

#include "amreager/aligner.h"
#include "amreager/errors.h"
#include "amreager/io.h"
#include "amreager/penman.h"
#include "amreager/strings.h"

namespace amreager {

using nlohmann::json;

namespace {

json TokenJson(const Token &t) {
  return {{"form", t.surface}, {"lemma", t.lemma}, {"pos", t.pos},
          {"ner", t.ner},      {"head", t.dep_head}, {"dep", t.dep_label}};
}

Token TokenFromJson(const json &j, int index) {
  Token t;
  t.index = index;
  t.surface = j.at("form").get<std::string>();
  t.lemma = j.at("lemma").get<std::string>();
  t.pos = j.at("pos").get<std::string>();
  t.ner = j.at("ner").get<std::string>();
  t.dep_head = j.at("head").get<int>();
  t.dep_label = j.at("dep").get<std::string>();
  return t;
}

std::string JoinErrors(const std::vector<std::string> &errors) {
  std::string out;
  for (const std::string &e : errors) out += "\n  " + e;
  return out;
}

fs::path SamplePath(const fs::path &dir, ClassifierId id, const char *split) {
  return dir / (std::string(ClassifierName(id)) + "." + split + ".samples");
}

fs::path ModelPath(const fs::path &dir, ClassifierId id) {
  return dir / (std::string(ClassifierName(id)) + ".model");
}

std::string Hex(uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(value));
  return buffer;
}

}  // namespace

void WriteArchive(const fs::path &path, std::span<const AnnotatedExample> examples) {
  std::string out;
  for (const AnnotatedExample &ex : examples) {
    json tokens = json::array();
    for (const Token &t : ex.sentence.tokens) tokens.push_back(TokenJson(t));
    // Nodes are addressed by tree path since ids change on re-parsing.
    const std::map<NodeId, std::string> paths = NodePaths(ex.graph);
    json alignment = json::array();
    std::vector<std::pair<NodeId, int>> pairs = ex.alignment.pairs();
    std::sort(pairs.begin(), pairs.end());
    for (const auto &[node, token] : pairs) {
      alignment.push_back({paths.at(node), token});
    }
    json record = {{"id", ex.id},
                   {"text", ex.text},
                   {"tokens", tokens},
                   {"penman", SerializePenman(ex.graph)},
                   {"alignment", alignment}};
    out += record.dump() + "\n";
  }
  WriteFile(path, out);
}

std::vector<AnnotatedExample> ReadArchive(const fs::path &path) {
  std::vector<AnnotatedExample> examples;
  int line_number = 0;
  for (const std::string &line : Split(ReadFile(path), '\n')) {
    ++line_number;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      AnnotatedExample ex;
      ex.id = j.at("id").get<std::string>();
      ex.text = j.at("text").get<std::string>();
      ex.sentence.id = ex.id;
      int index = 0;
      for (const json &t : j.at("tokens")) {
        ex.sentence.tokens.push_back(TokenFromJson(t, index++));
      }
      PenmanParse parse = ParsePenmanWithPaths(j.at("penman").get<std::string>());
      for (const json &pair : j.at("alignment")) {
        const std::string path = pair.at(0).get<std::string>();
        const int token = pair.at(1).get<int>();
        auto node = parse.paths.find(path);
        if (node == parse.paths.end()) {
          throw DataError("alignment names unknown node path " + path);
        }
        if (token < 0 || token >= index) {
          throw DataError("alignment token " + std::to_string(token) +
                          " out of range");
        }
        ex.alignment.Add(node->second, token);
      }
      ex.graph = std::move(parse.graph);
      examples.push_back(std::move(ex));
    } catch (const std::exception &e) {
      throw DataError(path.string() + ":" + std::to_string(line_number) + ": " +
                      e.what());
    }
  }
  return examples;
}

std::string CorpusStats::ToJson() const {
  json j = {{"sentences", sentences},
            {"tokens", tokens},
            {"nodes", nodes},
            {"alignment_coverage", alignment_coverage},
            {"reentrant_sentences", reentrant_sentences},
            {"nonprojective_sentences", nonprojective_sentences}};
  return j.dump(1) + "\n";
}

bool HasCrossingEdges(const AnnotatedExample &example) {
  std::vector<std::pair<int, int>> spans;
  for (const Edge &e : example.graph.edges()) {
    auto a = example.alignment.TokenOf(e.source);
    auto b = example.alignment.TokenOf(e.target);
    if (!a || !b || *a == *b) continue;
    spans.emplace_back(std::min(*a, *b), std::max(*a, *b));
  }
  for (size_t i = 0; i < spans.size(); ++i) {
    for (size_t j = 0; j < spans.size(); ++j) {
      auto [a, b] = spans[i];
      auto [c, d] = spans[j];
      if (a < c && c < b && b < d) return true;
    }
  }
  return false;
}

CorpusStats ComputeStats(std::span<const AnnotatedExample> examples) {
  CorpusStats stats;
  int aligned = 0, reentrant = 0, crossing = 0;
  for (const AnnotatedExample &ex : examples) {
    ++stats.sentences;
    stats.tokens += static_cast<int>(ex.sentence.tokens.size());
    stats.nodes += static_cast<int>(ex.graph.num_nodes());
    aligned += static_cast<int>(std::lround(
        AlignmentCoverage(ex.alignment, ex.graph) * ex.graph.num_nodes()));
    if (!NormalizeInverseEdges(ex.graph).ReentrantNodes().empty()) ++reentrant;
    if (HasCrossingEdges(ex)) ++crossing;
  }
  if (stats.nodes > 0) {
    stats.alignment_coverage = static_cast<double>(aligned) / stats.nodes;
  }
  if (stats.sentences > 0) {
    stats.reentrant_sentences = static_cast<double>(reentrant) / stats.sentences;
    stats.nonprojective_sentences =
        static_cast<double>(crossing) / stats.sentences;
  }
  return stats;
}

void ParallelFor(size_t n, int jobs, const std::function<void(size_t)> &fn) {
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread &t : threads) t.join();
  for (const std::exception_ptr &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void WriteRunManifest(const fs::path &dir, const std::string &command,
                      const std::vector<std::pair<std::string, fs::path>> &inputs,
                      const std::vector<fs::path> &outputs) {
  json in = json::object();
  for (const auto &[name, path] : inputs) {
    in[name] = {{"path", fs::absolute(path).lexically_normal().string()},
                {"fingerprint", Hex(Fingerprint(ReadFile(path)))}};
  }
  json out = json::array();
  for (const fs::path &path : outputs) {
    out.push_back({{"file", path.filename().string()},
                   {"fingerprint", Hex(Fingerprint(ReadFile(path)))}});
  }
  json manifest = {{"command", command}, {"inputs", in}, {"outputs", out}};
  WriteFile(dir / "manifest.json", manifest.dump(1) + "\n");
}

PreprocessSummary RunPreprocess(const PreprocessOptions &options) {
  AmrBank bank = LoadAmrFile(options.amr);
  std::vector<std::string> errors;
  for (const LoadError &e : bank.errors) {
    errors.push_back(options.amr.string() + ": " + e.ToString());
  }
  auto annotations = LoadConllu(options.conllu);
  std::map<std::string, std::string> alignments;
  if (options.alignments) alignments = LoadAlignmentFile(*options.alignments);
  ZipOptions zip_options;
  zip_options.align_missing = options.align_missing;
  ZipResult zipped = ZipExamples(bank.records, annotations, alignments, zip_options);
  errors.insert(errors.end(), zipped.errors.begin(), zipped.errors.end());
  if (!errors.empty()) {
    throw DataError(std::to_string(errors.size()) + " ingest error(s):" +
                    JoinErrors(errors));
  }
  const ConceptTable table = BuildConceptTable(zipped.examples);
  PreprocessSummary summary;
  summary.stats = ComputeStats(zipped.examples);
  summary.fragments_dropped = zipped.fragments_dropped;
  summary.concept_entries = table.size();

  const fs::path archive = options.out_dir / "archive.jsonl";
  const fs::path concepts = options.out_dir / "concepts.tsv";
  const fs::path stats = options.out_dir / "stats.json";
  WriteArchive(archive, zipped.examples);
  WriteFile(concepts, table.ToText());
  WriteFile(stats, summary.stats.ToJson());
  std::vector<std::pair<std::string, fs::path>> inputs = {
      {"amr", options.amr}, {"conllu", options.conllu}};
  if (options.alignments) inputs.emplace_back("alignments", *options.alignments);
  WriteRunManifest(options.out_dir, "preprocess", inputs, {archive, concepts, stats});
  return summary;
}

FeatureExtractor MakeExtractor(const FeatureOptions &options,
                               const TagVocabularies &tags) {
  Embeddings embeddings;
  embeddings.config.word_source = options.word_source;
  embeddings.config.concept_source = options.concept_source;
  embeddings.table =
      std::make_shared<const StaticTable>(StaticTable::Load(options.static_vectors));
  if (options.word_source == WordSource::kContextual) {
    if (!options.contextual) {
      throw DataError("contextual word features need a contextual embedding file");
    }
    embeddings.contextual =
        std::make_shared<const ContextualStore>(ContextualStore::Load(*options.contextual));
  }
  FeatureTemplate feature_template;
  feature_template.use_dependency = options.use_dependency;
  return FeatureExtractor(feature_template, tags, std::move(embeddings));
}

void WriteFeatureSettings(const fs::path &dir, const FeatureOptions &options,
                          const TagVocabularies &tags,
                          const FeatureExtractor &extractor) {
  json settings = {
      {"word_source", WordSourceName(options.word_source)},
      {"concept_source", ConceptSourceName(options.concept_source)},
      {"static_vectors",
       fs::absolute(options.static_vectors).lexically_normal().string()},
      {"contextual",
       options.contextual
           ? json(fs::absolute(*options.contextual).lexically_normal().string())
           : json(nullptr)},
      {"use_dependency", options.use_dependency},
      {"manifest_hash", Hex(extractor.layout().hash())}};
  WriteFile(dir / "embedding.json", settings.dump(1) + "\n");
  WriteFile(dir / "tags.json", tags.ToJson());
  WriteFile(dir / "features.manifest", extractor.layout().manifest());
}

FeatureExtractor LoadFeatureSettings(const fs::path &dir,
                                     const std::optional<fs::path> &contextual) {
  json settings;
  try {
    settings = json::parse(ReadFile(dir / "embedding.json"));
  } catch (const json::exception &e) {
    throw DataError((dir / "embedding.json").string() + ": " + e.what());
  }
  FeatureOptions options;
  try {
    options.word_source = ParseWordSource(settings.at("word_source").get<std::string>());
    options.concept_source =
        ParseConceptSource(settings.at("concept_source").get<std::string>());
    options.static_vectors = settings.at("static_vectors").get<std::string>();
    if (!settings.at("contextual").is_null()) {
      options.contextual = settings.at("contextual").get<std::string>();
    }
    options.use_dependency = settings.at("use_dependency").get<bool>();
  } catch (const json::exception &e) {
    throw DataError((dir / "embedding.json").string() + ": " + e.what());
  }
  if (contextual) options.contextual = contextual;
  const TagVocabularies tags = TagVocabularies::FromJson(ReadFile(dir / "tags.json"));
  FeatureExtractor extractor = MakeExtractor(options, tags);
  const std::string recorded = ReadFile(dir / "features.manifest");
  if (recorded != extractor.layout().manifest()) {
    throw DataError("feature template in " + dir.string() +
                    " does not match the rebuilt one (different vectors, "
                    "embedding dimension or settings)");
  }
  return extractor;
}

OracleSummary RunOracleStage(const OracleOptions &options) {
  const std::vector<AnnotatedExample> train = ReadArchive(options.train_archive);
  std::vector<AnnotatedExample> dev;
  if (options.dev_archive) dev = ReadArchive(*options.dev_archive);
  if (train.empty()) throw DataError("training archive is empty");

  const TagVocabularies tags = TagVocabularies::Build(train);
  const FeatureExtractor extractor = MakeExtractor(options.features, tags);
  if (const ContextualStore *store = extractor.embeddings().contextual.get()) {
    std::vector<std::string> missing;
    for (const std::vector<AnnotatedExample> *set :
         {&train, static_cast<const std::vector<AnnotatedExample> *>(&dev)}) {
      for (const AnnotatedExample &ex : *set) {
        if (store->TokenCount(ex.id) != static_cast<int>(ex.sentence.tokens.size())) {
          missing.push_back(ex.id);
        }
      }
    }
    if (!missing.empty()) {
      std::string ids;
      for (const std::string &id : missing) ids += (ids.empty() ? "" : ", ") + id;
      throw DataError("contextual embedding file lacks vectors for: " + ids);
    }
  }

  OracleSummary summary;
  std::vector<fs::path> outputs;
  auto run = [&](const std::vector<AnnotatedExample> &examples, const char *split,
                 size_t *counts, bool score) {
    std::vector<OracleResult> results(examples.size());
    std::vector<ExampleSamples> samples(examples.size());
    ParallelFor(examples.size(), options.jobs, [&](size_t i) {
      results[i] = RunOracle(examples[i]);
      samples[i] = EmitTrainingSamples(examples[i], results[i], extractor);
    });
    ExampleSamples merged = MakeSampleSets(extractor.layout());
    for (size_t i = 0; i < examples.size(); ++i) {
      for (ClassifierId id : kClassifierIds) merged.Get(id).Append(samples[i].Get(id));
    }
    for (ClassifierId id : kClassifierIds) {
      const fs::path path = SamplePath(options.out_dir, id, split);
      merged.Get(id).Save(path);
      outputs.push_back(path);
      counts[static_cast<int>(id)] = merged.Get(id).size();
    }
    if (!score) return;
    std::vector<ScoredPair> pairs;
    for (size_t i = 0; i < examples.size(); ++i) {
      summary.loss += results[i].loss;
      pairs.push_back({examples[i].id, &results[i].reconstructed, &examples[i].graph});
    }
    summary.replay_smatch = CorpusScore(pairs, {"Smatch"}).metrics.at("Smatch").f1;
  };
  run(train, "train", summary.samples, true);
  if (!dev.empty()) run(dev, "dev", summary.dev_samples, false);

  WriteFeatureSettings(options.out_dir, options.features, tags, extractor);
  json loss = json::parse(summary.loss.ToJson());
  loss["replay_smatch"] = summary.replay_smatch;
  WriteFile(options.out_dir / "loss.json", loss.dump(1) + "\n");
  for (const char *name : {"embedding.json", "tags.json", "features.manifest", "loss.json"}) {
    outputs.push_back(options.out_dir / name);
  }
  std::vector<std::pair<std::string, fs::path>> inputs = {
      {"train_archive", options.train_archive},
      {"static_vectors", options.features.static_vectors}};
  if (options.dev_archive) inputs.emplace_back("dev_archive", *options.dev_archive);
  if (options.features.contextual) {
    inputs.emplace_back("contextual", *options.features.contextual);
  }
  WriteRunManifest(options.out_dir, "oracle", inputs, outputs);
  return summary;
}

TrainSummary RunTrain(const TrainOptions &options) {
  const FeatureExtractor extractor = LoadFeatureSettings(options.samples_dir);
  TrainSummary summary;
  std::vector<fs::path> outputs;
  std::vector<std::pair<std::string, fs::path>> inputs;
  for (ClassifierId id : options.classifiers) {
    const std::string name(ClassifierName(id));
    const fs::path train_path = SamplePath(options.samples_dir, id, "train");
    const fs::path dev_path = SamplePath(options.samples_dir, id, "dev");
    const SampleSet train_set = SampleSet::Load(train_path);
    if (train_set.classifier() != id) {
      throw DataError(train_path.string() + " holds " +
                      std::string(ClassifierName(train_set.classifier())) +
                      " samples");
    }
    if (train_set.empty()) {
      throw DataError(train_path.string() + " has no samples; the " + name +
                      " classifier cannot be trained");
    }
    inputs.emplace_back(name + "_train", train_path);
    const Dataset train = MakeDataset(train_set, extractor);
    std::optional<Dataset> dev;
    if (fs::exists(dev_path)) {
      const SampleSet dev_set = SampleSet::Load(dev_path);
      if (!dev_set.empty()) dev = MakeDataset(dev_set, extractor, &train.label_names);
      inputs.emplace_back(name + "_dev", dev_path);
    }

    TrainResult result;
    if (options.search) {
      if (!dev) throw DataError("random search needs dev samples for " + name);
      SearchResult search = RandomSearch(*options.search, options.config, train, *dev);
      std::string log;
      for (const SearchTrial &trial : search.trials) log += trial.ToJson() + "\n";
      const fs::path log_path = options.out_dir / (name + ".search.jsonl");
      WriteFile(log_path, log);
      outputs.push_back(log_path);
      result = std::move(search.best_result);
    } else {
      result = Train(train, dev ? &*dev : nullptr, options.config);
    }

    Model model;
    model.classifier = id;
    model.manifest_hash = extractor.layout().hash();
    model.mlp = std::move(result.model);
    model.labels = train.label_names;
    const fs::path model_path = ModelPath(options.out_dir, id);
    model.Save(model_path);
    std::string metrics;
    for (const EpochMetrics &m : result.metrics) metrics += m.ToJson() + "\n";
    const fs::path metrics_path = options.out_dir / (name + ".metrics.jsonl");
    WriteFile(metrics_path, metrics);
    outputs.push_back(model_path);
    outputs.push_back(metrics_path);

    // Accuracy of the saved (float32) model.
    const Model saved = Model::Load(model_path);
    summary.train_accuracy.emplace_back(id, Evaluate(saved.mlp, train).accuracy);
    if (dev) {
      const Evaluation e = Evaluate(saved.mlp, *dev);
      summary.dev_accuracy.emplace_back(id, e.accuracy);
      for (size_t k = 0; k < e.recall.size(); ++k) {
        if (!std::isnan(e.recall[k])) {
          spdlog::info("{} dev recall {}: {:.3f}", name, train.label_names[k],
                       e.recall[k]);
        }
      }
    }
  }
  for (const char *file : {"embedding.json", "tags.json", "features.manifest"}) {
    if (fs::absolute(options.samples_dir) != fs::absolute(options.out_dir)) {
      fs::create_directories(options.out_dir);
      fs::copy_file(options.samples_dir / file, options.out_dir / file,
                    fs::copy_options::overwrite_existing);
    }
    outputs.push_back(options.out_dir / file);
  }
  WriteFile(options.out_dir / "train_config.json", options.config.ToJson() + "\n");
  outputs.push_back(options.out_dir / "train_config.json");
  WriteRunManifest(options.out_dir, "train", inputs, outputs);
  return summary;
}

ParseSummary RunParse(const ParseOptions &options) {
  const FeatureExtractor extractor =
      LoadFeatureSettings(options.model_dir, options.contextual);
  std::vector<Model> models;
  for (ClassifierId id : kClassifierIds) {
    models.push_back(Model::Load(ModelPath(options.model_dir, id)));
  }
  CheckModels(extractor.layout(), models[0], models[1], models[2]);
  const MlpClassifier action(models[0]), label(models[1]), reentrancy(models[2]);
  const ConceptTable concepts = ConceptTable::FromText(ReadFile(options.concepts));
  ParserOptions parser_options;
  parser_options.reentrancy_threshold = options.reentrancy_threshold;
  const Parser parser({&action, &label, &reentrancy}, &concepts, &extractor,
                      parser_options);

  std::vector<TokenizedSentence> sentences;
  for (auto &[id, sentence] : LoadConllu(options.input)) {
    sentences.push_back(std::move(sentence));
  }
  // CoNLL-U order, not id order.
  const std::string text = ReadFile(options.input);
  std::map<std::string, size_t> position;
  for (const TokenizedSentence &s : sentences) {
    position[s.id] = text.find("# sent_id = " + s.id + "\n");
  }
  std::stable_sort(sentences.begin(), sentences.end(),
                   [&](const TokenizedSentence &a, const TokenizedSentence &b) {
                     return position[a.id] < position[b.id];
                   });

  const std::vector<ParsedSentence> parsed =
      ParseCorpus(parser, sentences, options.jobs);
  ParseSummary summary;
  std::string out;
  for (size_t i = 0; i < parsed.size(); ++i) {
    const ParsedSentence &p = parsed[i];
    if (!p.ok) {
      summary.failures.push_back(p.id + ": " + p.error);
      spdlog::warn("parse failed for {}: {}", p.id, p.error);
      continue;
    }
    ++summary.parsed;
    summary.stranded_repairs += p.stats.build.stranded_repairs;
    if (p.stats.build.root_fallback) ++summary.root_fallbacks;
    std::vector<std::string> words;
    std::string snt;
    for (const Token &t : sentences[i].tokens) {
      words.push_back(t.surface);
      snt += (snt.empty() ? "" : " ") + t.surface;
    }
    out += FormatAmrBlock(p.id, snt, p.graph, &words);
  }
  WriteFile(options.output, out);
  if (summary.stranded_repairs > 0) {
    spdlog::info("{} stranded component(s) attached to the root with :mod",
                 summary.stranded_repairs);
  }
  return summary;
}

CorpusReport RunEvaluate(const EvaluateOptions &options) {
  const AmrBank predicted = LoadAmrFile(options.predicted);
  const AmrBank gold = LoadAmrFile(options.gold);
  std::vector<std::string> errors;
  for (const LoadError &e : predicted.errors) {
    errors.push_back(options.predicted.string() + ": " + e.ToString());
  }
  for (const LoadError &e : gold.errors) {
    errors.push_back(options.gold.string() + ": " + e.ToString());
  }
  std::map<std::string, const AmrGraph *> by_id;
  for (const AmrRecord &r : predicted.records) by_id[r.id] = &r.parse.graph;
  const AmrGraph empty;
  std::vector<ScoredPair> pairs;
  std::set<std::string> gold_ids;
  for (const AmrRecord &r : gold.records) {
    gold_ids.insert(r.id);
    auto it = by_id.find(r.id);
    if (it == by_id.end()) {
      errors.push_back("no prediction for '" + r.id + "'");
      pairs.push_back({r.id, &empty, &r.parse.graph});
    } else {
      pairs.push_back({r.id, it->second, &r.parse.graph});
    }
  }
  for (const AmrRecord &r : predicted.records) {
    if (!gold_ids.count(r.id)) errors.push_back("no gold graph for '" + r.id + "'");
  }
  CorpusReport report = CorpusScore(pairs, options.metrics, options.smatch);
  report.errors = std::move(errors);
  return report;
}

}  // namespace amreager
