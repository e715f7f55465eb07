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

#include <random>
#include <vector>

#include "p3a/attack/config.hpp"
#include "p3a/attack/dsp.hpp"
#include "p3a/numerics/tensor.hpp"

namespace p3a::attack {

using numerics::GridShape;

// One optimization step and the supervision traces it consumed.
struct StepOutcome {
  Tensor x_next;
  Tensor momentum;  // empty for memoryless strategies
  std::vector<DspTrace> traces;
};

// clip_ball(x_adv + step_size * sign(g), x0, eps); a zero g leaves x_adv as is.
Tensor step_bim(const Tensor& x_adv, const Tensor& g, const AttackConfig& cfg, const Tensor& x0);

// Momentum accumulation state <- mu * state + g / ||g||_1, then a signed step
// along the state. A zero g leaves both untouched.
StepOutcome step_mi(const Tensor& x_adv, const Tensor& g, const Tensor& momentum,
                    const AttackConfig& cfg, const Tensor& x0);

// Supervision gradient taken at di_transform(x_adv), then a BIM step.
StepOutcome step_di(const Tensor& x_adv, std::size_t y_true, const AttackConfig& cfg,
                    const DspProvider& dsp, const Tensor& x0, const GridShape& grid,
                    std::mt19937_64& rng);

// Supervision gradient smoothed by `kernel` over the grid, then a BIM step.
StepOutcome step_ti(const Tensor& x_adv, std::size_t y_true, const AttackConfig& cfg,
                    const DspProvider& dsp, const Tensor& x0, const GridShape& grid,
                    const Tensor& kernel);

// Nesterov lookahead x_adv + step_size * mu * state, gradient averaged over
// the m copies lookahead / 2^i, then the MI update.
StepOutcome step_sini(const Tensor& x_adv, std::size_t y_true, const Tensor& momentum,
                      const AttackConfig& cfg, const DspProvider& dsp, const Tensor& x0);

}  // namespace p3a::attack
