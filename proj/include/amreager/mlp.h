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

// Feed-forward classifiers: rectified hidden layers and a softmax output,
// trained by mini-batch gradient descent with momentum on cross-entropy.
//
// Model file, little-endian:
//
//   "AMRM"  u32 classifier id  u64 feature manifest hash
//   u32 layer count L  (L + 1) x u32 dims (input, hidden..., output)
//   per layer: out x in float32 weights (row-major), then out float32 biases
//
// with the label names in a sidecar text file, one per line in id order.

#ifndef AMREAGER_MLP_H_
#define AMREAGER_MLP_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amreager/oracle.h"

namespace amreager {

class Mlp {
 public:
  Mlp() = default;
  // Zero weights and biases.
  explicit Mlp(std::vector<int> dims);
  // Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static Mlp Initialize(std::vector<int> dims, uint64_t seed);

  const std::vector<int> &dims() const { return dims_; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  int num_layers() const { return static_cast<int>(weights_.size()); }

  std::vector<Eigen::MatrixXd> &weights() { return weights_; }
  std::vector<Eigen::VectorXd> &biases() { return biases_; }
  const std::vector<Eigen::MatrixXd> &weights() const { return weights_; }
  const std::vector<Eigen::VectorXd> &biases() const { return biases_; }

  // Class probabilities for each column of `inputs`.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd &inputs) const;
  // Throws std::invalid_argument on a dimension mismatch.
  Eigen::VectorXd Predict(std::span<const float> input) const;

  struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
  };
  // Mean cross-entropy of the columns of `inputs` against `labels`, with
  // its gradient. Columns labelled -1 are ignored.
  double Loss(const Eigen::MatrixXd &inputs, std::span<const int> labels,
              Gradients *gradients = nullptr) const;

  // All parameters flattened: per layer, weights column-major, then biases.
  std::vector<double> Parameters() const;
  void SetParameters(std::span<const double> values);
  static std::vector<double> Flatten(const Gradients &gradients);

 private:
  std::vector<int> dims_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

// Index of the largest value; ties go to the lowest index.
int Argmax(std::span<const double> values);
int Argmax(const Eigen::VectorXd &values);

struct TrainConfig {
  int hidden_layers = 6;
  int hidden_width = 768;
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 64;
  int epochs = 50;
  int patience = 5;  // epochs without dev improvement before stopping
  uint64_t seed = 1;

  std::string ToJson() const;
};

// Dense samples, one column per sample.
struct Dataset {
  Eigen::MatrixXd inputs;
  std::vector<int> labels;  // -1: label unseen in training
  std::vector<std::string> label_names;

  size_t size() const { return labels.size(); }
};

// Expands stored rows. Labels are mapped by name onto `label_names` when
// given (a dev set onto the training labels), else the set's own names.
Dataset MakeDataset(const SampleSet &samples, const FeatureExtractor &extractor,
                    const std::vector<std::string> *label_names = nullptr);

struct EpochMetrics {
  int epoch = 0;
  std::string split;  // "train" or "dev"
  double loss = 0;
  double accuracy = 0;

  std::string ToJson() const;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainResult {
  Mlp model;                         // best dev checkpoint
  std::vector<EpochMetrics> metrics;
  int best_epoch = 0;
  double best_dev_accuracy = 0;
  std::vector<std::string> warnings;
};

// Throws TrainingError for an empty training set or a NaN loss (naming the
// epoch and batch). Without a dev set the final epoch is returned.
TrainResult Train(const Dataset &train, const Dataset *dev,
                  const TrainConfig &config);

struct Evaluation {
  double accuracy = 0;
  std::vector<double> recall;  // per label; NaN when the label is absent
};

// Throws std::invalid_argument for an empty set.
Evaluation Evaluate(const Mlp &model, const Dataset &data);

struct SearchSpace {
  double min_learning_rate = 1e-4;  // log-uniform
  double max_learning_rate = 1e-1;
  std::vector<int> hidden_layers = {1, 2, 3, 6};
  std::vector<int> hidden_widths = {64, 128, 256, 768};
  std::vector<int> batch_sizes = {16, 32, 64};
  std::vector<double> momenta = {0.9};
  int trials = 5;
};

struct SearchTrial {
  int trial = 0;
  TrainConfig config;
  double dev_accuracy = 0;

  std::string ToJson() const;
};

struct SearchResult {
  TrainConfig best;
  TrainResult best_result;
  std::vector<SearchTrial> trials;
};

// Draws trials from `space` with `base.seed`; other fields of `base` (epochs,
// patience) are kept. The best trial has the highest dev accuracy, the
// earliest on ties.
SearchResult RandomSearch(const SearchSpace &space, const TrainConfig &base,
                          const Dataset &train, const Dataset &dev);

struct Model {
  ClassifierId classifier = ClassifierId::kAction;
  uint64_t manifest_hash = 0;
  Mlp mlp;
  std::vector<std::string> labels;

  std::string Serialize() const;
  static Model Parse(std::string_view bytes, std::vector<std::string> labels);
  // Writes `path` and `path` + ".labels".
  void Save(const std::filesystem::path &path) const;
  static Model Load(const std::filesystem::path &path);
};

}  // namespace amreager

#endif  // AMREAGER_MLP_H_
