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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "p3a/diffnet/model.hpp"

namespace p3a::attack {

using numerics::Tensor;

struct CandidateGain {
  std::string method;  // e.g. "Defensive"
  int direction = 0;   // +1 / -1
  double gain = 0.0;
};

// What a parameter-adaptive supervision step did: the scored candidates and
// the one whose gradient it returned. `selected_method` is "Identity" when
// the unperturbed parameters won.
struct DspTrace {
  double baseline_grad_norm = 0.0;
  std::vector<CandidateGain> candidates;
  std::string selected_method = "Identity";
  int selected_direction = 0;
  double selected_gain = 0.0;

  std::string selected_label() const;
};

struct DspResult {
  Tensor gradient;
  std::optional<DspTrace> trace;
};

// Supervision gradient for the current adversarial input. Providers may keep
// per-attack state, so build a fresh one for each attack run.
using DspProvider = std::function<DspResult(const Tensor& x, std::size_t y_true)>;

// dL/dx at the model's own parameters.
DspResult dsp_vanilla(const diffnet::Model& model, const Tensor& x, std::size_t y_true);
DspProvider vanilla_provider(const diffnet::Model& model);

}  // namespace p3a::attack
