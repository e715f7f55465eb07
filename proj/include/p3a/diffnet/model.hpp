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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "p3a/numerics/tensor.hpp"

namespace p3a::diffnet {

using numerics::Tensor;

// Flat parameter vector. Layout per Dense layer in layer order: the weight
// matrix (out x in, row-major) followed by its bias (out). This layout is
// what model files persist.
using ParamVector = Tensor;

enum class LayerKind { kDense, kRelu, kSoftplus };

// Sharpness of the smooth ReLU surrogate: softplus(z) = log(1 + e^(k z)) / k.
inline constexpr double kSoftplusSharpness = 10.0;

struct Layer {
  LayerKind kind = LayerKind::kDense;
  std::size_t in = 0;
  std::size_t out = 0;

  static Layer dense(std::size_t in, std::size_t out) { return {LayerKind::kDense, in, out}; }
  static Layer relu(std::size_t dim) { return {LayerKind::kRelu, dim, dim}; }
  static Layer softplus(std::size_t dim) { return {LayerKind::kSoftplus, dim, dim}; }

  std::size_t param_count() const { return kind == LayerKind::kDense ? out * in + out : 0; }
  friend bool operator==(const Layer&, const Layer&) = default;
};

std::string to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& name);

enum class Activation { kRelu, kSoftplus, kNone };

class ModelArch {
 public:
  ModelArch() = default;
  // Validates the layer chain; throws ValidationError on a broken chain.
  ModelArch(std::size_t input_dim, std::vector<Layer> layers);

  // Dense stack input -> hidden... -> classes with `act` between Dense layers.
  static ModelArch mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                       std::size_t num_classes, Activation act);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t num_classes() const { return layers_.back().out; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t param_count() const { return param_count_; }
  // Offset of the weight block of layers()[i] (only meaningful for Dense).
  std::size_t param_offset(std::size_t layer_index) const { return offsets_[layer_index]; }
  bool has_relu() const;

  friend bool operator==(const ModelArch& a, const ModelArch& b) {
    return a.input_dim_ == b.input_dim_ && a.layers_ == b.layers_;
  }

 private:
  std::size_t input_dim_ = 0;
  std::vector<Layer> layers_;
  std::vector<std::size_t> offsets_;
  std::size_t param_count_ = 0;
};

struct Model {
  ModelArch arch;
  ParamVector theta;
  std::uint64_t seed = 0;
};

struct LabeledSample {
  Tensor x;
  std::size_t y_true = 0;
};

// Glorot-uniform weights in +-sqrt(6 / (in + out)), zero biases.
ParamVector init_params(const ModelArch& arch, std::uint64_t seed);

// theta + scale * direction as a fresh vector.
ParamVector perturb_params(const ParamVector& theta, const Tensor& direction, double scale);

void check_params(const ModelArch& arch, const ParamVector& theta);

}  // namespace p3a::diffnet
