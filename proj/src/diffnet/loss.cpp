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

#include "p3a/diffnet/loss.hpp"

#include <algorithm>
#include <cmath>

#include "p3a/error.hpp"

namespace p3a::diffnet {

namespace {

double log_sum_exp(const Tensor& logits) {
  const double m = *std::max_element(logits.values().begin(), logits.values().end());
  double acc = 0.0;
  for (double v : logits.values()) acc += std::exp(v - m);
  return m + std::log(acc);
}

void require_classes(const Tensor& logits) {
  if (logits.size() < 2) throw ShapeError("logits need at least two classes");
}

}  // namespace

Tensor softmax(const Tensor& logits) {
  require_classes(logits);
  const double lse = log_sum_exp(logits);
  Tensor p = Tensor::zeros_like(logits);
  for (std::size_t i = 0; i < logits.size(); ++i) p[i] = std::exp(logits[i] - lse);
  return p;
}

double loss_ce(const Tensor& logits, std::size_t y_true) {
  require_classes(logits);
  if (y_true >= logits.size()) {
    throw ValidationError("class index " + std::to_string(y_true) + " out of range for " +
                          std::to_string(logits.size()) + " classes");
  }
  return log_sum_exp(logits) - logits[y_true];
}

double kl_metric(const Tensor& logits_ref, const Tensor& logits_adv) {
  require_classes(logits_ref);
  if (!logits_ref.same_shape(logits_adv)) throw ShapeError("kl_metric: class count mismatch");
  const double lse_ref = log_sum_exp(logits_ref);
  const double lse_adv = log_sum_exp(logits_adv);
  double kl = 0.0;
  for (std::size_t i = 0; i < logits_ref.size(); ++i) {
    const double log_p = logits_ref[i] - lse_ref;
    const double log_q = logits_adv[i] - lse_adv;
    kl += std::exp(log_p) * (log_p - log_q);
  }
  // Rounding can leave a tiny negative residue when p == q.
  return std::max(kl, 0.0);
}

std::size_t argmax(const Tensor& logits) {
  return static_cast<std::size_t>(
      std::distance(logits.values().begin(),
                    std::max_element(logits.values().begin(), logits.values().end())));
}

}  // namespace p3a::diffnet
