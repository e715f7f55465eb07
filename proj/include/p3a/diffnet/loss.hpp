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

#include "p3a/numerics/tensor.hpp"

namespace p3a::diffnet {

using numerics::Tensor;

Tensor softmax(const Tensor& logits);

// Cross-entropy -log softmax(logits)[y_true], max-subtracted for stability.
double loss_ce(const Tensor& logits, std::size_t y_true);

// KL(softmax(logits_ref) || softmax(logits_adv)), the divergence of the
// adversarial prediction from the clean one.
double kl_metric(const Tensor& logits_ref, const Tensor& logits_adv);

std::size_t argmax(const Tensor& logits);

}  // namespace p3a::diffnet
