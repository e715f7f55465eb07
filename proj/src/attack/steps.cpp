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

#include "p3a/attack/steps.hpp"

#include <cmath>

#include "p3a/attack/transforms.hpp"
#include "p3a/error.hpp"
#include "p3a/numerics/ops.hpp"

namespace p3a::attack {

using numerics::clip_ball;
using numerics::is_zero;

namespace {

void require_same(const Tensor& a, const Tensor& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

Tensor signed_step(const Tensor& x_adv, const Tensor& direction, const AttackConfig& cfg,
                   const Tensor& x0) {
  Tensor moved = x_adv;
  for (std::size_t i = 0; i < moved.size(); ++i) {
    const double d = direction[i];
    const double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    moved[i] += cfg.step_size * s;
  }
  return clip_ball(moved, x0, cfg.eps);
}

void append_trace(StepOutcome& out, DspResult& r) {
  if (r.trace) out.traces.push_back(std::move(*r.trace));
}

}  // namespace

Tensor step_bim(const Tensor& x_adv, const Tensor& g, const AttackConfig& cfg, const Tensor& x0) {
  require_same(x_adv, g, "step_bim");
  require_same(x_adv, x0, "step_bim");
  if (is_zero(g)) return x_adv;
  return signed_step(x_adv, g, cfg, x0);
}

StepOutcome step_mi(const Tensor& x_adv, const Tensor& g, const Tensor& momentum,
                    const AttackConfig& cfg, const Tensor& x0) {
  require_same(x_adv, g, "step_mi");
  require_same(x_adv, momentum, "step_mi");
  if (is_zero(g)) return {x_adv, momentum, {}};
  const double l1 = numerics::norm(g, numerics::NormOrder::kL1);
  Tensor state = momentum;
  for (std::size_t i = 0; i < state.size(); ++i) state[i] = cfg.mu * state[i] + g[i] / l1;
  state.require_finite("step_mi momentum");
  Tensor next = signed_step(x_adv, state, cfg, x0);
  return {std::move(next), std::move(state), {}};
}

StepOutcome step_di(const Tensor& x_adv, std::size_t y_true, const AttackConfig& cfg,
                    const DspProvider& dsp, const Tensor& x0, const GridShape& grid,
                    std::mt19937_64& rng) {
  const Tensor transformed = di_transform(x_adv, grid, cfg, rng);
  DspResult r = dsp(transformed, y_true);
  StepOutcome out;
  out.x_next = step_bim(x_adv, r.gradient, cfg, x0);
  append_trace(out, r);
  return out;
}

StepOutcome step_ti(const Tensor& x_adv, std::size_t y_true, const AttackConfig& cfg,
                    const DspProvider& dsp, const Tensor& x0, const GridShape& grid,
                    const Tensor& kernel) {
  DspResult r = dsp(x_adv, y_true);
  const Tensor smoothed = numerics::smooth2d(r.gradient, grid, kernel);
  StepOutcome out;
  out.x_next = step_bim(x_adv, smoothed, cfg, x0);
  append_trace(out, r);
  return out;
}

StepOutcome step_sini(const Tensor& x_adv, std::size_t y_true, const Tensor& momentum,
                      const AttackConfig& cfg, const DspProvider& dsp, const Tensor& x0) {
  require_same(x_adv, momentum, "step_sini");
  if (cfg.sini_copies < 1) throw ValidationError("sini_copies must be at least 1");
  Tensor lookahead = x_adv;
  const double reach = cfg.step_size * cfg.mu;
  for (std::size_t i = 0; i < lookahead.size(); ++i) lookahead[i] += reach * momentum[i];

  StepOutcome out;
  Tensor g_sum = Tensor::zeros_like(x_adv);
  double scale = 1.0;
  for (std::size_t copy = 0; copy < cfg.sini_copies; ++copy) {
    Tensor scaled_input = lookahead;
    for (double& v : scaled_input.values()) v /= scale;
    DspResult r = dsp(scaled_input, y_true);
    require_same(x_adv, r.gradient, "step_sini");
    for (std::size_t i = 0; i < g_sum.size(); ++i) g_sum[i] += r.gradient[i];
    append_trace(out, r);
    scale *= 2.0;
  }
  const double inv_m = 1.0 / static_cast<double>(cfg.sini_copies);
  for (double& v : g_sum.values()) v *= inv_m;

  StepOutcome mi = step_mi(x_adv, g_sum, momentum, cfg, x0);
  out.x_next = std::move(mi.x_next);
  out.momentum = std::move(mi.momentum);
  return out;
}

}  // namespace p3a::attack
