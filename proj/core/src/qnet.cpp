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

#include "omsim/qnet.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "omsim/errors.hpp"

namespace omsim {
namespace {

constexpr const char* kCheckpointMagic = "omsim-qnet";
constexpr int kCheckpointVersion = 1;

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double x = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("checkpoint: bad number '" + text + "'");
  }
  return x;
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> widths, std::uint64_t seed,
         double init_scale)
    : widths_(std::move(widths)) {
  layout();
  Rng rng(seed);
  for (double& p : params_) p = rng.uniform(-init_scale, init_scale);
}

Mlp Mlp::zeros(std::vector<std::size_t> widths) {
  Mlp m;
  m.widths_ = std::move(widths);
  m.layout();
  return m;
}

void Mlp::layout() {
  if (widths_.size() < 2 || widths_.back() != 1) {
    throw ConfigError("network widths must end in a single output");
  }
  for (std::size_t w : widths_) {
    if (w == 0) throw ConfigError("network layer width must be positive");
  }
  offsets_.clear();
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(total);
    total += widths_[l] * widths_[l + 1] + widths_[l + 1];
  }
  params_.assign(total, 0.0);
}

double Mlp::forward(std::span<const double> input) const {
  if (input.size() != input_width()) {
    throw ConfigError("network input width " + std::to_string(input.size()) +
                      " != " + std::to_string(input_width()));
  }
  std::vector<double> current(input.begin(), input.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t in = widths_[l];
    const std::size_t out = widths_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    next.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double z = b[o];
      for (std::size_t i = 0; i < in; ++i) z += w[o * in + i] * current[i];
      next[o] = (l + 1 < layer_count()) ? std::max(z, 0.0) : z;
    }
    current.swap(next);
  }
  return current[0];
}

double Mlp::forward(const FeatureVector& input) const {
  return forward(input.as_input());
}

void Mlp::accumulate_gradient(std::span<const double> input,
                              double output_grad,
                              std::span<double> grad) const {
  if (input.size() != input_width()) {
    throw ConfigError("network input width mismatch");
  }
  const std::size_t layers = layer_count();
  // activations[l] is the input to layer l; pre[l] its pre-activation.
  std::vector<std::vector<double>> activations(layers + 1);
  std::vector<std::vector<double>> pre(layers);
  activations[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = widths_[l];
    const std::size_t out = widths_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    pre[l].assign(out, 0.0);
    activations[l + 1].assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double z = b[o];
      for (std::size_t i = 0; i < in; ++i) {
        z += w[o * in + i] * activations[l][i];
      }
      pre[l][o] = z;
      activations[l + 1][o] = (l + 1 < layers) ? std::max(z, 0.0) : z;
    }
  }

  std::vector<double> delta{output_grad};
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = widths_[l];
    const std::size_t out = widths_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    double* gw = grad.data() + weight_offset(l);
    double* gb = grad.data() + bias_offset(l);
    for (std::size_t o = 0; o < out; ++o) {
      gb[o] += delta[o];
      for (std::size_t i = 0; i < in; ++i) {
        gw[o * in + i] += delta[o] * activations[l][i];
      }
    }
    if (l == 0) break;
    std::vector<double> below(in, 0.0);
    for (std::size_t i = 0; i < in; ++i) {
      double s = 0.0;
      for (std::size_t o = 0; o < out; ++o) s += w[o * in + i] * delta[o];
      below[i] = pre[l - 1][i] > 0.0 ? s : 0.0;
    }
    delta.swap(below);
  }
}

bool Mlp::all_finite() const {
  return std::all_of(params_.begin(), params_.end(),
                     [](double p) { return std::isfinite(p); });
}

void Mlp::save(std::ostream& out) const {
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "widths";
  for (std::size_t w : widths_) out << ' ' << w;
  out << '\n';
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t in = widths_[l];
    const std::size_t rows = widths_[l + 1];
    out << "layer " << l << ' ' << rows << ' ' << in << '\n';
    for (std::size_t o = 0; o < rows; ++o) {
      for (std::size_t i = 0; i < in; ++i) {
        if (i) out << ' ';
        out << format_double(params_[weight_offset(l) + o * in + i]);
      }
      out << '\n';
    }
    for (std::size_t o = 0; o < rows; ++o) {
      if (o) out << ' ';
      out << format_double(params_[bias_offset(l) + o]);
    }
    out << '\n';
  }
}

Mlp Mlp::load(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kCheckpointMagic) {
    throw ConfigError("checkpoint: not an omsim network file");
  }
  if (version != kCheckpointVersion) {
    throw ConfigError("checkpoint: unsupported version " +
                      std::to_string(version));
  }
  std::string line;
  std::getline(in, line);
  if (!std::getline(in, line)) throw ConfigError("checkpoint: missing widths");
  std::istringstream header(line);
  std::string tag;
  header >> tag;
  if (tag != "widths") throw ConfigError("checkpoint: missing widths");
  std::vector<std::size_t> widths;
  for (std::size_t w; header >> w;) widths.push_back(w);
  Mlp m = zeros(widths);

  std::string token;
  for (std::size_t l = 0; l < m.layer_count(); ++l) {
    std::size_t index = 0, rows = 0, cols = 0;
    if (!(in >> tag >> index >> rows >> cols) || tag != "layer" ||
        index != l || rows != widths[l + 1] || cols != widths[l]) {
      throw ConfigError("checkpoint: bad layer header " + std::to_string(l));
    }
    const std::size_t count = rows * cols + rows;
    for (std::size_t k = 0; k < count; ++k) {
      if (!(in >> token)) throw ConfigError("checkpoint: truncated");
      m.params_[m.weight_offset(l) + k] = parse_double(token);
    }
  }
  if (!m.all_finite()) throw ConfigError("checkpoint: non-finite parameter");
  return m;
}

void Mlp::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write checkpoint '" + path + "'");
  save(out);
}

Mlp Mlp::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint '" + path + "'");
  return load(in);
}

void Optimizer::step(std::span<double> params, std::span<const double> grad) {
  if (config_.kind == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i] -= config_.learning_rate * grad[i];
    }
    return;
  }
  if (m_.size() != params.size()) {
    m_.assign(params.size(), 0.0);
    v_.assign(params.size(), 0.0);
    t_ = 0;
  }
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grad[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grad[i] * grad[i];
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= config_.learning_rate * m_hat /
                 (std::sqrt(v_hat) + config_.epsilon);
  }
}

double td_target(double reward, const HalfVector& next_state,
                 std::span<const HalfVector> next_actions, const Mlp& target,
                 double discount) {
  if (next_actions.empty() || discount == 0.0) return reward;
  double best = -std::numeric_limits<double>::infinity();
  for (const HalfVector& a : next_actions) {
    best = std::max(best, target.forward(encode_pair(a, next_state)));
  }
  return reward + discount * best;
}

double batch_loss(const Mlp& net, std::span<const TrainingExample> batch) {
  if (batch.empty()) throw std::invalid_argument("empty training batch");
  double sum = 0.0;
  for (const TrainingExample& ex : batch) {
    const double err = ex.label - net.forward(ex.input);
    sum += err * err;
  }
  return sum / static_cast<double>(batch.size());
}

std::vector<double> loss_gradient(const Mlp& net,
                                  std::span<const TrainingExample> batch) {
  if (batch.empty()) throw std::invalid_argument("empty training batch");
  std::vector<double> grad(net.params().size(), 0.0);
  const double scale = 2.0 / static_cast<double>(batch.size());
  for (const TrainingExample& ex : batch) {
    const auto input = ex.input.as_input();
    const double err = net.forward(input) - ex.label;
    net.accumulate_gradient(input, scale * err, grad);
  }
  return grad;
}

double train_batch(Mlp& online, std::span<const TrainingExample> batch,
                   Optimizer& optimizer) {
  const double loss = batch_loss(online, batch);
  if (!std::isfinite(loss)) {
    throw std::domain_error("non-finite training loss");
  }
  const auto grad = loss_gradient(online, batch);
  std::vector<double> updated(online.params().begin(), online.params().end());
  optimizer.step(updated, grad);
  if (!std::all_of(updated.begin(), updated.end(),
                   [](double p) { return std::isfinite(p); })) {
    throw std::domain_error("training step produced non-finite parameters");
  }
  std::copy(updated.begin(), updated.end(), online.params().begin());
  return loss;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::push(Experience e) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(e));
  } else {
    items_[cursor_] = std::move(e);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<Experience> ReplayBuffer::contents() const {
  if (items_.size() < capacity_) return items_;
  std::vector<Experience> out;
  out.reserve(items_.size());
  for (std::size_t k = 0; k < items_.size(); ++k) {
    out.push_back(items_[(cursor_ + k) % capacity_]);
  }
  return out;
}

std::vector<Experience> sample(const ReplayBuffer& buffer,
                               std::size_t batch_size, Rng& rng) {
  if (buffer.empty()) throw std::invalid_argument("empty replay buffer");
  std::vector<Experience> out;
  out.reserve(batch_size);
  for (std::size_t k = 0; k < batch_size; ++k) {
    out.push_back(buffer.at(rng.below(buffer.size())));
  }
  return out;
}

}  // namespace omsim
