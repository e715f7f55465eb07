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

#include "p3a/diffnet/train.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "p3a/diffnet/backprop.hpp"
#include "p3a/diffnet/loss.hpp"
#include "p3a/error.hpp"

namespace p3a::diffnet {

ParamVector train_sgd(const ModelArch& arch, const std::vector<LabeledSample>& dataset,
                      const TrainOptions& options) {
  if (dataset.empty()) throw ValidationError("train_sgd: dataset is empty");
  if (!(options.lr > 0.0)) throw ValidationError("train_sgd: learning rate must be positive");

  ParamVector theta = init_params(arch, options.seed);
  // Separate stream for the visiting order so init stays comparable.
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const DualGrad grad = backward_dual(arch, theta, dataset[idx]);
      for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= options.lr * grad.g_theta[k];
    }
    theta.require_finite("train_sgd epoch " + std::to_string(epoch));
  }
  return theta;
}

double accuracy(const ModelArch& arch, const ParamVector& theta,
                const std::vector<LabeledSample>& dataset) {
  if (dataset.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& s : dataset) {
    if (argmax(forward(arch, theta, s.x)) == s.y_true) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

}  // namespace p3a::diffnet
