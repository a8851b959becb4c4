// Copyright 2026 The omsim Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "omsim/features.hpp"
#include "omsim/rng.hpp"

namespace omsim {

/// Fully connected network: rectifier hidden layers, one linear output.
/// Parameters live in one flat vector, layer by layer, each layer's weight
/// matrix row-major (outputs x inputs) followed by its bias.
class Mlp {
 public:
  Mlp() = default;
  /// widths = {input, hidden..., 1}. Parameters are drawn uniformly from
  /// [-init_scale, init_scale].
  Mlp(std::vector<std::size_t> widths, std::uint64_t seed,
      double init_scale = 0.05);
  /// All-zero parameters.
  static Mlp zeros(std::vector<std::size_t> widths);

  /// Throws ConfigError if the input width is wrong.
  double forward(std::span<const double> input) const;
  double forward(const FeatureVector& input) const;

  /// Adds d(output)/d(params) * output_grad into `grad` (same length as
  /// params()).
  void accumulate_gradient(std::span<const double> input, double output_grad,
                           std::span<double> grad) const;

  std::size_t input_width() const { return widths_.front(); }
  const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  std::span<const double> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }
  std::size_t layer_count() const { return widths_.size() - 1; }

  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + widths_[layer] * widths_[layer + 1];
  }
  double& weight(std::size_t layer, std::size_t out, std::size_t in) {
    return params_[weight_offset(layer) + out * widths_[layer] + in];
  }
  double& bias(std::size_t layer, std::size_t out) {
    return params_[bias_offset(layer) + out];
  }

  bool all_finite() const;
  bool same_shape(const Mlp& other) const { return widths_ == other.widths_; }

  /// Versioned text dump: header, widths, then per layer one line per
  /// weight row and one bias line. Values round-trip exactly.
  void save(std::ostream& out) const;
  static Mlp load(std::istream& in);
  void save(const std::string& path) const;
  static Mlp load(const std::string& path);

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  void layout();

  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Applies one gradient step. Plain SGD moves params by exactly
/// -learning_rate * grad; Adam keeps first/second moment estimates.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config = {}) : config_(config) {}
  void step(std::span<double> params, std::span<const double> grad);
  const OptimizerConfig& config() const noexcept { return config_; }

 private:
  OptimizerConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t t_ = 0;
};

/// Online network trained by gradient descent; target network supplies the
/// bootstrap values and is refreshed by sync().
struct QNetworkPair {
  Mlp online;
  Mlp target;

  QNetworkPair() = default;
  explicit QNetworkPair(Mlp initial) : online(initial), target(std::move(initial)) {}

  void sync() { target = online; }
};

struct Experience {
  HalfVector state;
  HalfVector action;
  double reward = 0.0;
  HalfVector next_state;
  /// Actions available from next_state for the bootstrap max.
  std::vector<HalfVector> next_actions;
};

/// y = reward + discount * max over next actions of target(a', s'). An
/// empty action set means no bootstrap: y = reward.
double td_target(double reward, const HalfVector& next_state,
                 std::span<const HalfVector> next_actions, const Mlp& target,
                 double discount);

struct TrainingExample {
  FeatureVector input;
  double label = 0.0;
};

/// One gradient step on the mean squared error over the batch. Returns the
/// loss before the step. Throws std::domain_error (parameters untouched) if
/// the loss is not finite, std::invalid_argument on an empty batch.
double train_batch(Mlp& online, std::span<const TrainingExample> batch,
                   Optimizer& optimizer);

/// Mean squared error without touching parameters.
double batch_loss(const Mlp& net, std::span<const TrainingExample> batch);

/// Full gradient of the batch loss; used by train_batch and the gradient
/// check.
std::vector<double> loss_gradient(const Mlp& net,
                                  std::span<const TrainingExample> batch);

/// Fixed-capacity FIFO ring of experiences.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Experience e);
  std::size_t size() const noexcept { return items_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return items_.empty(); }
  /// Oldest first.
  std::vector<Experience> contents() const;
  const Experience& at(std::size_t index) const { return items_[index]; }

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Experience> items_;
};

/// Uniform sample with replacement. Throws std::invalid_argument on an
/// empty buffer.
std::vector<Experience> sample(const ReplayBuffer& buffer,
                               std::size_t batch_size, Rng& rng);

}  // namespace omsim
