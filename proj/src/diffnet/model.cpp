// Copyright 2026 The P3A Authors.
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

#include "p3a/diffnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "p3a/error.hpp"

namespace p3a::diffnet {

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kDense: return "dense";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kSoftplus: return "softplus";
  }
  return "unknown";
}

LayerKind layer_kind_from_string(const std::string& name) {
  if (name == "dense") return LayerKind::kDense;
  if (name == "relu") return LayerKind::kRelu;
  if (name == "softplus") return LayerKind::kSoftplus;
  throw ValidationError("unknown layer kind '" + name + "'");
}

ModelArch::ModelArch(std::size_t input_dim, std::vector<Layer> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
  if (input_dim_ == 0) throw ValidationError("model input_dim must be positive");
  if (layers_.empty()) throw ValidationError("model needs at least one layer");
  std::size_t width = input_dim_;
  bool any_dense = false;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (l.in != width) {
      throw ValidationError("layer " + std::to_string(i) + " expects input width " +
                            std::to_string(l.in) + " but receives " + std::to_string(width));
    }
    if (l.kind != LayerKind::kDense && l.in != l.out) {
      throw ValidationError("activation layer " + std::to_string(i) + " must preserve width");
    }
    if (l.out == 0) throw ValidationError("layer widths must be positive");
    offsets_.push_back(param_count_);
    param_count_ += l.param_count();
    any_dense = any_dense || l.kind == LayerKind::kDense;
    width = l.out;
  }
  if (!any_dense) throw ValidationError("model needs at least one dense layer");
  if (layers_.back().kind != LayerKind::kDense) {
    throw ValidationError("the final layer must be dense (it produces the logits)");
  }
  if (layers_.back().out < 2) throw ValidationError("model needs at least two classes");
}

ModelArch ModelArch::mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                         std::size_t num_classes, Activation act) {
  std::vector<Layer> layers;
  std::size_t width = input_dim;
  for (std::size_t h : hidden) {
    layers.push_back(Layer::dense(width, h));
    if (act == Activation::kRelu) layers.push_back(Layer::relu(h));
    if (act == Activation::kSoftplus) layers.push_back(Layer::softplus(h));
    width = h;
  }
  layers.push_back(Layer::dense(width, num_classes));
  return ModelArch(input_dim, std::move(layers));
}

bool ModelArch::has_relu() const {
  return std::any_of(layers_.begin(), layers_.end(),
                     [](const Layer& l) { return l.kind == LayerKind::kRelu; });
}

ParamVector init_params(const ModelArch& arch, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> theta(arch.param_count(), 0.0);
  for (std::size_t i = 0; i < arch.layers().size(); ++i) {
    const Layer& l = arch.layers()[i];
    if (l.kind != LayerKind::kDense) continue;
    const double limit = std::sqrt(6.0 / static_cast<double>(l.in + l.out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    const std::size_t off = arch.param_offset(i);
    for (std::size_t k = 0; k < l.in * l.out; ++k) theta[off + k] = dist(rng);
  }
  return Tensor::vector(std::move(theta));
}

ParamVector perturb_params(const ParamVector& theta, const Tensor& direction, double scale) {
  if (theta.size() != direction.size()) {
    throw ShapeError("perturb_params: direction length " + std::to_string(direction.size()) +
                     " != parameter count " + std::to_string(theta.size()));
  }
  ParamVector out = theta;
  if (scale == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * direction[i];
  out.require_finite("perturb_params");
  return out;
}

void check_params(const ModelArch& arch, const ParamVector& theta) {
  if (theta.size() != arch.param_count()) {
    throw ShapeError("parameter vector has " + std::to_string(theta.size()) +
                     " entries, architecture needs " + std::to_string(arch.param_count()));
  }
}

}  // namespace p3a::diffnet
