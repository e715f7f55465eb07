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

#include "p3a/attack/run.hpp"

#include <algorithm>
#include <random>

#include "p3a/attack/steps.hpp"
#include "p3a/diffnet/backprop.hpp"
#include "p3a/diffnet/loss.hpp"
#include "p3a/error.hpp"
#include "p3a/numerics/ops.hpp"

namespace p3a::attack {

namespace {

const numerics::GridShape& require_grid(const std::optional<numerics::GridShape>& grid,
                                        std::size_t input_dim, Strategy s) {
  if (!grid) {
    throw ValidationError(to_string(s) + " needs a grid-shaped input; no grid was given");
  }
  if (grid->flat_size() != input_dim) {
    throw ValidationError(to_string(s) + ": grid does not match the model input dimension");
  }
  return *grid;
}

}  // namespace

AttackTrace run_attack(const diffnet::Model& model, const diffnet::LabeledSample& sample,
                       const AttackConfig& cfg, const DspProvider& dsp,
                       const std::optional<numerics::GridShape>& grid) {
  cfg.validate();
  const Tensor& x0 = sample.x;
  if (x0.size() != model.arch.input_dim()) {
    throw ShapeError("sample length does not match the model input dimension");
  }
  for (double v : x0.values()) {
    if (v < numerics::kInputMin || v > numerics::kInputMax) {
      throw ValidationError("sample values must lie in [0, 1]");
    }
  }

  std::mt19937_64 rng(cfg.seed);
  const Tensor clean_logits = diffnet::forward(model, x0);
  AttackTrace trace;
  trace.clean_loss = diffnet::loss_ce(clean_logits, sample.y_true);
  trace.clean_predicted = diffnet::argmax(clean_logits);

  Tensor x_adv = x0;
  if (cfg.strategy == Strategy::kPgd && cfg.pgd_init_scale > 0.0 && cfg.eps > 0.0) {
    const double amp = cfg.eps * cfg.pgd_init_scale;
    std::uniform_real_distribution<double> noise(-amp, amp);
    for (std::size_t i = 0; i < x_adv.size(); ++i) {
      x_adv[i] = std::clamp(x0[i] + noise(rng), numerics::kInputMin, numerics::kInputMax);
    }
  }

  Tensor momentum = Tensor::zeros_like(x0);
  Tensor kernel;
  if (cfg.strategy == Strategy::kTi) kernel = numerics::gaussian_kernel(cfg.ti_kernel_side, cfg.ti_sigma);

  trace.steps.reserve(cfg.iterations);
  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    StepOutcome out;
    switch (cfg.strategy) {
      case Strategy::kBim:
      case Strategy::kPgd: {
        DspResult r = dsp(x_adv, sample.y_true);
        out.x_next = step_bim(x_adv, r.gradient, cfg, x0);
        if (r.trace) out.traces.push_back(std::move(*r.trace));
        break;
      }
      case Strategy::kMi: {
        DspResult r = dsp(x_adv, sample.y_true);
        out = step_mi(x_adv, r.gradient, momentum, cfg, x0);
        if (r.trace) out.traces.push_back(std::move(*r.trace));
        break;
      }
      case Strategy::kDi:
        out = step_di(x_adv, sample.y_true, cfg, dsp, x0,
                      require_grid(grid, x0.size(), cfg.strategy), rng);
        break;
      case Strategy::kTi:
        out = step_ti(x_adv, sample.y_true, cfg, dsp, x0,
                      require_grid(grid, x0.size(), cfg.strategy), kernel);
        break;
      case Strategy::kSini:
        out = step_sini(x_adv, sample.y_true, momentum, cfg, dsp, x0);
        break;
    }
    x_adv = std::move(out.x_next);
    if (!out.momentum.empty()) momentum = std::move(out.momentum);

    const Tensor logits = diffnet::forward(model, x_adv);
    AttackStep step;
    step.ce_loss = diffnet::loss_ce(logits, sample.y_true);
    step.kl = diffnet::kl_metric(clean_logits, logits);
    step.predicted = diffnet::argmax(logits);
    step.linf = numerics::norm(numerics::sub(x_adv, x0), numerics::NormOrder::kLinf);
    step.x_adv = x_adv;
    step.dsp_traces = std::move(out.traces);
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

}  // namespace p3a::attack
