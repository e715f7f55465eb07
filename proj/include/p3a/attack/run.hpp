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

#include <optional>
#include <vector>

#include "p3a/attack/config.hpp"
#include "p3a/attack/dsp.hpp"
#include "p3a/diffnet/model.hpp"

namespace p3a::attack {

// Everything below is measured at the victim's original parameters.
struct AttackStep {
  Tensor x_adv;
  double ce_loss = 0.0;
  double kl = 0.0;  // KL(clean prediction || adversarial prediction)
  std::size_t predicted = 0;
  double linf = 0.0;  // ||x_adv - x0||_inf
  std::vector<DspTrace> dsp_traces;
};

struct AttackTrace {
  double clean_loss = 0.0;
  std::size_t clean_predicted = 0;
  std::vector<AttackStep> steps;
};

// Runs cfg.iterations steps of cfg.strategy from sample.x, drawing the
// supervision gradient from `dsp`. `grid` is required by DI and TI.
AttackTrace run_attack(const diffnet::Model& model, const diffnet::LabeledSample& sample,
                       const AttackConfig& cfg, const DspProvider& dsp,
                       const std::optional<numerics::GridShape>& grid = std::nullopt);

}  // namespace p3a::attack
