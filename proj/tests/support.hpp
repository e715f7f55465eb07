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

// Reference implementations used as test oracles. They read the flat
// parameter layout directly and share no code with the library's forward
// and backward passes.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "p3a/diffnet/model.hpp"

namespace p3a::testing {

using diffnet::LayerKind;
using diffnet::ModelArch;
using numerics::Tensor;

inline std::vector<double> ref_logits(const ModelArch& arch, const std::vector<double>& theta,
                                      const std::vector<double>& x) {
  std::vector<double> a = x;
  std::size_t off = 0;
  for (const auto& layer : arch.layers()) {
    if (layer.kind == LayerKind::kDense) {
      std::vector<double> z(layer.out);
      for (std::size_t o = 0; o < layer.out; ++o) {
        long double s = theta[off + layer.out * layer.in + o];
        for (std::size_t i = 0; i < layer.in; ++i) {
          s += static_cast<long double>(theta[off + o * layer.in + i]) * a[i];
        }
        z[o] = static_cast<double>(s);
      }
      off += layer.out * layer.in + layer.out;
      a = std::move(z);
    } else if (layer.kind == LayerKind::kRelu) {
      for (double& v : a) v = std::max(v, 0.0);
    } else {
      const double k = diffnet::kSoftplusSharpness;
      for (double& v : a) v = std::log1p(std::exp(k * v)) / k;
    }
  }
  return a;
}

inline double ref_ce(const std::vector<double>& logits, std::size_t y) {
  long double total = 0.0L;
  for (double l : logits) total += std::exp(static_cast<long double>(l));
  return static_cast<double>(std::log(total) - logits[y]);
}

inline double ref_loss(const ModelArch& arch, const std::vector<double>& theta,
                       const std::vector<double>& x, std::size_t y) {
  return ref_ce(ref_logits(arch, theta, x), y);
}

// Central differences of the reference loss along each coordinate.
inline std::vector<double> fd_grad_x(const ModelArch& arch, const std::vector<double>& theta,
                                     std::vector<double> x, std::size_t y, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = ref_loss(arch, theta, x, y);
    x[i] = keep - h;
    const double down = ref_loss(arch, theta, x, y);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline std::vector<double> fd_grad_theta(const ModelArch& arch, std::vector<double> theta,
                                         const std::vector<double>& x, std::size_t y, double h) {
  std::vector<double> g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double keep = theta[i];
    theta[i] = keep + h;
    const double up = ref_loss(arch, theta, x, y);
    theta[i] = keep - h;
    const double down = ref_loss(arch, theta, x, y);
    theta[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// Random Dense stack with 1..max_dense Dense layers, widths in [2, max_dim],
// `act` between Dense layers.
inline ModelArch random_arch(std::mt19937_64& rng, std::size_t max_dense, std::size_t max_dim,
                             diffnet::Activation act) {
  std::uniform_int_distribution<std::size_t> dim(2, max_dim);
  std::uniform_int_distribution<std::size_t> depth(1, max_dense);
  const std::size_t n = depth(rng);
  std::vector<std::size_t> hidden;
  for (std::size_t i = 1; i < n; ++i) hidden.push_back(dim(rng));
  return ModelArch::mlp(dim(rng), hidden, dim(rng), act);
}

inline Tensor random_unit_input(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& e : v) e = u(rng);
  return Tensor::vector(std::move(v));
}

inline Tensor random_normal(std::mt19937_64& rng, std::size_t n, double sd = 1.0) {
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> v(n);
  for (double& e : v) e = d(rng);
  return Tensor::vector(std::move(v));
}

// A random victim with the given activation. Weights are scaled up from the
// Glorot draw so the loss surface has some curvature at unit-range inputs.
inline diffnet::Model random_model(std::mt19937_64& rng, std::size_t max_dense, std::size_t max_dim,
                                   diffnet::Activation act, double weight_scale = 2.0) {
  diffnet::Model m;
  m.arch = random_arch(rng, max_dense, max_dim, act);
  m.seed = rng();
  m.theta = diffnet::init_params(m.arch, m.seed);
  std::normal_distribution<double> bias(0.0, 0.1);
  std::size_t off = 0;
  for (const auto& layer : m.arch.layers()) {
    if (layer.kind != LayerKind::kDense) continue;
    for (std::size_t i = 0; i < layer.out * layer.in; ++i) m.theta[off + i] *= weight_scale;
    for (std::size_t o = 0; o < layer.out; ++o) m.theta[off + layer.out * layer.in + o] = bias(rng);
    off += layer.out * layer.in + layer.out;
  }
  return m;
}

}  // namespace p3a::testing
