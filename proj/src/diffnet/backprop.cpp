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

#include "p3a/diffnet/backprop.hpp"

#include <cmath>
#include <vector>

#include "p3a/diffnet/loss.hpp"
#include "p3a/error.hpp"

namespace p3a::diffnet {

namespace {

double softplus(double z) {
  const double kz = kSoftplusSharpness * z;
  // log(1 + e^kz) = max(kz, 0) + log1p(e^-|kz|)
  return (std::max(kz, 0.0) + std::log1p(std::exp(-std::abs(kz)))) / kSoftplusSharpness;
}

double softplus_slope(double z) {
  const double kz = kSoftplusSharpness * z;
  if (kz >= 0.0) return 1.0 / (1.0 + std::exp(-kz));
  const double e = std::exp(kz);
  return e / (1.0 + e);
}

void check_input(const ModelArch& arch, const ParamVector& theta, const Tensor& x) {
  check_params(arch, theta);
  if (x.size() != arch.input_dim()) {
    throw ShapeError("input has " + std::to_string(x.size()) + " values, model expects " +
                     std::to_string(arch.input_dim()));
  }
}

// Activations entering each layer plus the final logits.
std::vector<std::vector<double>> run_forward(const ModelArch& arch, const ParamVector& theta,
                                             const Tensor& x) {
  const auto& layers = arch.layers();
  std::vector<std::vector<double>> acts;
  acts.reserve(layers.size() + 1);
  acts.emplace_back(x.values().begin(), x.values().end());
  const auto params = theta.values();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const Layer& l = layers[li];
    const std::vector<double>& in = acts.back();
    std::vector<double> out(l.out);
    switch (l.kind) {
      case LayerKind::kDense: {
        const double* w = params.data() + arch.param_offset(li);
        const double* b = w + l.out * l.in;
        for (std::size_t o = 0; o < l.out; ++o) {
          double acc = b[o];
          const double* row = w + o * l.in;
          for (std::size_t i = 0; i < l.in; ++i) acc += row[i] * in[i];
          out[o] = acc;
        }
        break;
      }
      case LayerKind::kRelu:
        for (std::size_t i = 0; i < l.out; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
        break;
      case LayerKind::kSoftplus:
        for (std::size_t i = 0; i < l.out; ++i) out[i] = softplus(in[i]);
        break;
    }
    acts.push_back(std::move(out));
  }
  return acts;
}

// Shared backward pass; g_theta is filled only when non-null.
Tensor run_backward(const ModelArch& arch, const ParamVector& theta,
                    const std::vector<std::vector<double>>& acts, std::size_t y_true,
                    double* loss, std::vector<double>* g_theta) {
  const auto& layers = arch.layers();
  Tensor logits = Tensor::vector(acts.back());
  *loss = loss_ce(logits, y_true);
  Tensor probs = softmax(logits);
  std::vector<double> delta(probs.values().begin(), probs.values().end());
  delta[y_true] -= 1.0;

  const auto params = theta.values();
  for (std::size_t li = layers.size(); li-- > 0;) {
    const Layer& l = layers[li];
    const std::vector<double>& in = acts[li];
    std::vector<double> prev(l.in, 0.0);
    switch (l.kind) {
      case LayerKind::kDense: {
        const std::size_t off = arch.param_offset(li);
        const double* w = params.data() + off;
        if (g_theta) {
          double* gw = g_theta->data() + off;
          double* gb = gw + l.out * l.in;
          for (std::size_t o = 0; o < l.out; ++o) {
            for (std::size_t i = 0; i < l.in; ++i) gw[o * l.in + i] = delta[o] * in[i];
            gb[o] = delta[o];
          }
        }
        for (std::size_t o = 0; o < l.out; ++o) {
          const double d = delta[o];
          const double* row = w + o * l.in;
          for (std::size_t i = 0; i < l.in; ++i) prev[i] += row[i] * d;
        }
        break;
      }
      case LayerKind::kRelu:
        // Subgradient at 0 is 0.
        for (std::size_t i = 0; i < l.in; ++i) prev[i] = in[i] > 0.0 ? delta[i] : 0.0;
        break;
      case LayerKind::kSoftplus:
        for (std::size_t i = 0; i < l.in; ++i) prev[i] = delta[i] * softplus_slope(in[i]);
        break;
    }
    delta = std::move(prev);
  }
  return Tensor::vector(std::move(delta));
}

}  // namespace

Tensor forward(const ModelArch& arch, const ParamVector& theta, const Tensor& x) {
  check_input(arch, theta, x);
  auto acts = run_forward(arch, theta, x);
  Tensor logits = Tensor::vector(std::move(acts.back()));
  return logits;
}

DualGrad backward_dual(const ModelArch& arch, const ParamVector& theta,
                       const LabeledSample& sample) {
  check_input(arch, theta, sample.x);
  const auto acts = run_forward(arch, theta, sample.x);
  DualGrad out;
  std::vector<double> g_theta(arch.param_count(), 0.0);
  out.g_x = run_backward(arch, theta, acts, sample.y_true, &out.loss, &g_theta);
  out.g_theta = Tensor::vector(std::move(g_theta));
  return out;
}

InputGrad input_gradient(const ModelArch& arch, const ParamVector& theta,
                         const LabeledSample& sample) {
  check_input(arch, theta, sample.x);
  const auto acts = run_forward(arch, theta, sample.x);
  InputGrad out;
  out.g_x = run_backward(arch, theta, acts, sample.y_true, &out.loss, nullptr);
  return out;
}

}  // namespace p3a::diffnet
