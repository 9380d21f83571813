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

#include "amreager/mlp.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "json.hpp"

#include "amreager/errors.h"
#include "amreager/io.h"
#include "amreager/strings.h"

namespace amreager {

namespace {

// Column-wise softmax, shifted by the column maximum.
Eigen::MatrixXd Softmax(const Eigen::MatrixXd &logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double shift = logits.col(c).maxCoeff();
    Eigen::VectorXd e = (logits.col(c).array() - shift).exp();
    out.col(c) = e / e.sum();
  }
  return out;
}

}  // namespace

Mlp::Mlp(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw std::invalid_argument("an MLP needs two dims");
  for (int d : dims_) {
    if (d <= 0) throw std::invalid_argument("MLP dims must be positive");
  }
  for (size_t l = 0; l + 1 < dims_.size(); ++l) {
    weights_.push_back(Eigen::MatrixXd::Zero(dims_[l + 1], dims_[l]));
    biases_.push_back(Eigen::VectorXd::Zero(dims_[l + 1]));
  }
}

Mlp Mlp::Initialize(std::vector<int> dims, uint64_t seed) {
  Mlp mlp(std::move(dims));
  std::mt19937_64 rng(seed);
  for (Eigen::MatrixXd &w : mlp.weights_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> uniform(-limit, limit);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = uniform(rng);
    }
  }
  return mlp;
}

Eigen::MatrixXd Mlp::Forward(const Eigen::MatrixXd &inputs) const {
  if (inputs.rows() != input_dim()) {
    throw std::invalid_argument("input has " + std::to_string(inputs.rows()) +
                                " features, expected " +
                                std::to_string(input_dim()));
  }
  Eigen::MatrixXd h = inputs;
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd z = (weights_[l] * h).colwise() + biases_[l];
    h = l + 1 < num_layers() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return Softmax(h);
}

Eigen::VectorXd Mlp::Predict(std::span<const float> input) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(input.size()), 1);
  for (size_t k = 0; k < input.size(); ++k) x(k, 0) = input[k];
  return Forward(x).col(0);
}

double Mlp::Loss(const Eigen::MatrixXd &inputs, std::span<const int> labels,
                 Gradients *gradients) const {
  if (inputs.rows() != input_dim() ||
      static_cast<size_t>(inputs.cols()) != labels.size()) {
    throw std::invalid_argument("loss inputs do not match the network");
  }
  // Forward, keeping pre-activations.
  std::vector<Eigen::MatrixXd> activations = {inputs};
  std::vector<Eigen::MatrixXd> pre;
  for (int l = 0; l < num_layers(); ++l) {
    pre.push_back((weights_[l] * activations.back()).colwise() + biases_[l]);
    if (l + 1 < num_layers()) activations.push_back(pre.back().cwiseMax(0.0));
  }
  const Eigen::MatrixXd &logits = pre.back();
  Eigen::MatrixXd probabilities = Softmax(logits);

  int counted = 0;
  double loss = 0;
  for (size_t c = 0; c < labels.size(); ++c) {
    if (labels[c] < 0) continue;
    ++counted;
    const double shift = logits.col(c).maxCoeff();
    const double log_sum =
        shift + std::log((logits.col(c).array() - shift).exp().sum());
    loss += log_sum - logits(labels[c], c);
  }
  if (counted == 0) return 0.0;
  loss /= counted;
  if (gradients == nullptr) return loss;

  Eigen::MatrixXd delta = probabilities;
  for (size_t c = 0; c < labels.size(); ++c) {
    if (labels[c] < 0) {
      delta.col(c).setZero();
    } else {
      delta(labels[c], c) -= 1.0;
    }
  }
  delta /= counted;
  gradients->weights.assign(num_layers(), Eigen::MatrixXd());
  gradients->biases.assign(num_layers(), Eigen::VectorXd());
  for (int l = num_layers() - 1; l >= 0; --l) {
    gradients->weights[l] = delta * activations[l].transpose();
    gradients->biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = weights_[l].transpose() * delta;
      delta = back.cwiseProduct(
          (pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return loss;
}

std::vector<double> Mlp::Parameters() const {
  std::vector<double> values;
  for (int l = 0; l < num_layers(); ++l) {
    values.insert(values.end(), weights_[l].data(),
                  weights_[l].data() + weights_[l].size());
    values.insert(values.end(), biases_[l].data(),
                  biases_[l].data() + biases_[l].size());
  }
  return values;
}

void Mlp::SetParameters(std::span<const double> values) {
  size_t k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    for (Eigen::Index i = 0; i < weights_[l].size(); ++i) {
      weights_[l].data()[i] = values[k++];
    }
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) {
      biases_[l].data()[i] = values[k++];
    }
  }
  if (k != values.size()) throw std::invalid_argument("parameter count mismatch");
}

std::vector<double> Mlp::Flatten(const Gradients &gradients) {
  std::vector<double> values;
  for (size_t l = 0; l < gradients.weights.size(); ++l) {
    values.insert(values.end(), gradients.weights[l].data(),
                  gradients.weights[l].data() + gradients.weights[l].size());
    values.insert(values.end(), gradients.biases[l].data(),
                  gradients.biases[l].data() + gradients.biases[l].size());
  }
  return values;
}

int Argmax(std::span<const double> values) {
  int best = 0;
  for (size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = static_cast<int>(k);
  }
  return best;
}

int Argmax(const Eigen::VectorXd &values) {
  return Argmax(std::span<const double>(values.data(), values.size()));
}

std::string TrainConfig::ToJson() const {
  nlohmann::json j = {{"hidden_layers", hidden_layers},
                      {"hidden_width", hidden_width},
                      {"learning_rate", learning_rate},
                      {"momentum", momentum},
                      {"batch_size", batch_size},
                      {"epochs", epochs},
                      {"patience", patience},
                      {"seed", seed}};
  return j.dump();
}

std::string EpochMetrics::ToJson() const {
  nlohmann::json j = {{"epoch", epoch},
                      {"split", split},
                      {"loss", loss},
                      {"accuracy", accuracy}};
  return j.dump();
}

std::string SearchTrial::ToJson() const {
  nlohmann::json j = {{"trial", trial},
                      {"config", nlohmann::json::parse(config.ToJson())},
                      {"dev_accuracy", dev_accuracy}};
  return j.dump();
}

Dataset MakeDataset(const SampleSet &samples, const FeatureExtractor &extractor,
                    const std::vector<std::string> *label_names) {
  if (samples.width() != extractor.layout().stored_width() ||
      samples.manifest_hash() != extractor.layout().hash()) {
    throw DataError("sample set was written with a different feature manifest");
  }
  Dataset data;
  data.label_names = label_names ? *label_names : samples.label_names();
  data.inputs.resize(extractor.layout().dense_width(),
                     static_cast<Eigen::Index>(samples.size()));
  for (size_t i = 0; i < samples.size(); ++i) {
    std::vector<float> dense = extractor.Expand(samples.Row(i));
    for (size_t k = 0; k < dense.size(); ++k) data.inputs(k, i) = dense[k];
    const std::string &name = samples.label_names()[samples.Label(i)];
    auto it = std::find(data.label_names.begin(), data.label_names.end(), name);
    data.labels.push_back(it == data.label_names.end()
                              ? -1
                              : static_cast<int>(it - data.label_names.begin()));
  }
  return data;
}

Evaluation Evaluate(const Mlp &model, const Dataset &data) {
  if (data.size() == 0) throw std::invalid_argument("evaluating on no samples");
  const Eigen::MatrixXd probabilities = model.Forward(data.inputs);
  const size_t classes = data.label_names.size();
  std::vector<int> hits(classes, 0), totals(classes, 0);
  int correct = 0;
  for (size_t c = 0; c < data.size(); ++c) {
    const int predicted = Argmax(Eigen::VectorXd(probabilities.col(c)));
    const int gold = data.labels[c];
    if (gold >= 0 && static_cast<size_t>(gold) < classes) {
      ++totals[gold];
      if (predicted == gold) ++hits[gold];
    }
    if (predicted == gold) ++correct;
  }
  Evaluation e;
  e.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  for (size_t k = 0; k < classes; ++k) {
    e.recall.push_back(totals[k] ? static_cast<double>(hits[k]) / totals[k]
                                 : std::numeric_limits<double>::quiet_NaN());
  }
  return e;
}

TrainResult Train(const Dataset &train, const Dataset *dev,
                  const TrainConfig &config) {
  if (train.size() == 0) throw TrainingError("no training samples");
  if (config.batch_size <= 0 || config.epochs <= 0 || config.hidden_layers < 0 ||
      config.hidden_width <= 0) {
    throw std::invalid_argument("training configuration must be positive");
  }
  TrainResult result;
  const int classes = static_cast<int>(train.label_names.size());
  std::vector<int> counts(classes, 0);
  for (int y : train.labels) {
    if (y >= 0) ++counts[y];
  }
  for (int k = 0; k < classes; ++k) {
    if (counts[k] == 0) {
      result.warnings.push_back("label '" + train.label_names[k] +
                                "' has no training samples");
      spdlog::warn("{}", result.warnings.back());
    }
  }

  std::vector<int> dims = {static_cast<int>(train.inputs.rows())};
  for (int l = 0; l < config.hidden_layers; ++l) dims.push_back(config.hidden_width);
  dims.push_back(std::max(classes, 1));
  Mlp model = Mlp::Initialize(dims, config.seed);

  Mlp::Gradients velocity;
  for (int l = 0; l < model.num_layers(); ++l) {
    velocity.weights.push_back(Eigen::MatrixXd::Zero(model.weights()[l].rows(),
                                                     model.weights()[l].cols()));
    velocity.biases.push_back(Eigen::VectorXd::Zero(model.biases()[l].size()));
  }

  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  result.model = model;
  result.best_dev_accuracy = -1;
  int since_best = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0;
    int batches = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t end = std::min(order.size(), start + config.batch_size);
      Eigen::MatrixXd inputs(train.inputs.rows(), static_cast<Eigen::Index>(end - start));
      std::vector<int> labels;
      for (size_t i = start; i < end; ++i) {
        inputs.col(i - start) = train.inputs.col(order[i]);
        labels.push_back(train.labels[order[i]]);
      }
      Mlp::Gradients gradients;
      const double loss = model.Loss(inputs, labels, &gradients);
      if (!std::isfinite(loss)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) +
                            ", batch " + std::to_string(batches));
      }
      loss_sum += loss;
      ++batches;
      for (int l = 0; l < model.num_layers(); ++l) {
        velocity.weights[l] = config.momentum * velocity.weights[l] -
                              config.learning_rate * gradients.weights[l];
        velocity.biases[l] = config.momentum * velocity.biases[l] -
                             config.learning_rate * gradients.biases[l];
        model.weights()[l] += velocity.weights[l];
        model.biases()[l] += velocity.biases[l];
      }
    }
    result.metrics.push_back(
        {epoch, "train", loss_sum / batches, Evaluate(model, train).accuracy});
    if (dev == nullptr || dev->size() == 0) {
      result.model = model;
      result.best_epoch = epoch;
      continue;
    }
    const double dev_loss = model.Loss(dev->inputs, dev->labels);
    const double dev_accuracy = Evaluate(model, *dev).accuracy;
    result.metrics.push_back({epoch, "dev", dev_loss, dev_accuracy});
    if (dev_accuracy > result.best_dev_accuracy) {
      result.best_dev_accuracy = dev_accuracy;
      result.best_epoch = epoch;
      result.model = model;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  if (result.best_dev_accuracy < 0) result.best_dev_accuracy = 0;
  return result;
}

SearchResult RandomSearch(const SearchSpace &space, const TrainConfig &base,
                          const Dataset &train, const Dataset &dev) {
  if (space.trials < 1) throw std::invalid_argument("search needs a trial");
  if (space.hidden_layers.empty() || space.hidden_widths.empty() ||
      space.batch_sizes.empty() || space.momenta.empty() ||
      !(space.min_learning_rate > 0) ||
      space.min_learning_rate > space.max_learning_rate) {
    throw std::invalid_argument("empty search space");
  }
  std::mt19937_64 rng(base.seed);
  std::uniform_real_distribution<double> log_rate(
      std::log(space.min_learning_rate), std::log(space.max_learning_rate));
  auto pick = [&rng](const auto &choices) {
    std::uniform_int_distribution<size_t> index(0, choices.size() - 1);
    return choices[index(rng)];
  };
  SearchResult search;
  double best = -1;
  for (int t = 0; t < space.trials; ++t) {
    TrainConfig config = base;
    config.learning_rate = std::exp(log_rate(rng));
    config.hidden_layers = pick(space.hidden_layers);
    config.hidden_width = pick(space.hidden_widths);
    config.batch_size = pick(space.batch_sizes);
    config.momentum = pick(space.momenta);
    TrainResult trained = Train(train, &dev, config);
    search.trials.push_back({t, config, trained.best_dev_accuracy});
    spdlog::info("search trial {}: {} dev accuracy {:.4f}", t, config.ToJson(),
                 trained.best_dev_accuracy);
    if (trained.best_dev_accuracy > best) {
      best = trained.best_dev_accuracy;
      search.best = config;
      search.best_result = std::move(trained);
    }
  }
  return search;
}

std::string Model::Serialize() const {
  ByteWriter writer;
  writer.PutBytes("AMRM");
  writer.PutU32(static_cast<uint32_t>(classifier));
  writer.PutU64(manifest_hash);
  writer.PutU32(static_cast<uint32_t>(mlp.num_layers()));
  for (int d : mlp.dims()) writer.PutU32(static_cast<uint32_t>(d));
  for (int l = 0; l < mlp.num_layers(); ++l) {
    const Eigen::MatrixXd &w = mlp.weights()[l];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        writer.PutF32(static_cast<float>(w(i, j)));
      }
    }
    for (Eigen::Index i = 0; i < mlp.biases()[l].size(); ++i) {
      writer.PutF32(static_cast<float>(mlp.biases()[l](i)));
    }
  }
  return writer.Release();
}

Model Model::Parse(std::string_view bytes, std::vector<std::string> labels) {
  ByteReader reader(bytes);
  if (reader.GetBytes(4, "magic") != "AMRM") {
    throw DataError("bad magic at byte 0: not a model file");
  }
  Model model;
  const uint32_t classifier = reader.GetU32("classifier id");
  if (classifier > 2) throw DataError("bad classifier id at byte 4");
  model.classifier = static_cast<ClassifierId>(classifier);
  model.manifest_hash = reader.GetU64("manifest hash");
  const uint32_t layers = reader.GetU32("layer count");
  if (layers == 0 || layers > 64) {
    throw DataError("implausible layer count " + std::to_string(layers));
  }
  std::vector<int> dims;
  for (uint32_t l = 0; l <= layers; ++l) {
    dims.push_back(static_cast<int>(reader.GetU32("layer dim")));
  }
  try {
    model.mlp = Mlp(dims);
  } catch (const std::invalid_argument &e) {
    throw DataError(std::string("bad model dims: ") + e.what());
  }
  for (uint32_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd &w = model.mlp.weights()[l];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = reader.GetF32("weight");
    }
    Eigen::VectorXd &b = model.mlp.biases()[l];
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = reader.GetF32("bias");
  }
  if (!reader.done()) {
    throw DataError("trailing bytes after model at byte " +
                    std::to_string(reader.offset()));
  }
  if (labels.size() != static_cast<size_t>(model.mlp.output_dim())) {
    throw DataError("model has " + std::to_string(model.mlp.output_dim()) +
                    " outputs but " + std::to_string(labels.size()) + " labels");
  }
  model.labels = std::move(labels);
  return model;
}

void Model::Save(const std::filesystem::path &path) const {
  WriteFile(path, Serialize());
  std::string text;
  for (const std::string &label : labels) text += label + "\n";
  std::filesystem::path sidecar = path;
  sidecar += ".labels";
  WriteFile(sidecar, text);
}

Model Model::Load(const std::filesystem::path &path) {
  std::filesystem::path sidecar = path;
  sidecar += ".labels";
  std::vector<std::string> labels = Split(ReadFile(sidecar), '\n');
  if (!labels.empty() && labels.back().empty()) labels.pop_back();
  try {
    return Parse(ReadFile(path), std::move(labels));
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace amreager
