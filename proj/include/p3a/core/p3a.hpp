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
#include <string>
#include <vector>

#include "p3a/attack/dsp.hpp"
#include "p3a/diffnet/backprop.hpp"
#include "p3a/diffnet/model.hpp"

namespace p3a::core {

using diffnet::ParamVector;
using numerics::Tensor;

// Parameter-update directions F(theta). Declaration order is the tie-break
// order used when two candidates score the same.
enum class UpdateMethod { kDefensive, kDecoupling, kMagnitude, kUniform };

inline constexpr UpdateMethod kAllMethods[] = {UpdateMethod::kDefensive, UpdateMethod::kDecoupling,
                                               UpdateMethod::kMagnitude, UpdateMethod::kUniform};

std::string to_string(UpdateMethod m);
UpdateMethod update_method_from_string(const std::string& name);

enum class DirectionPolicy { kPlus, kMinus, kBoth };
enum class DfdVariant { kForward, kCentral };
enum class Granularity { kPerStep, kPerAttack };

struct FixedChoice {
  UpdateMethod method = UpdateMethod::kDefensive;
  int direction = +1;
};

struct P3AConfig {
  double alpha_lr = 1e-4;
  std::vector<UpdateMethod> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  DirectionPolicy directions = DirectionPolicy::kBoth;
  double uniform_s = 1.0;
  bool normalize_direction = false;
  // Raw-gradient sample step of the gain criterion; only the validation
  // checks evaluate it, selection ranks by the unscaled gain.
  double beta = 1e-3;
  DfdVariant dfd_variant = DfdVariant::kForward;
  std::optional<FixedChoice> fixed;  // unset: adaptive argmax selection
  Granularity granularity = Granularity::kPerStep;
  std::size_t max_candidates = 8;

  void validate() const;
  // "adaptive" or the fixed choice, e.g. "fixed(Defensive+)".
  std::string selection_label() const;
};

struct Candidate {
  std::optional<UpdateMethod> method;  // empty for the identity candidate
  int direction = 0;
  ParamVector theta_prime;
  Tensor g_prime;
  double gain = 0.0;

  std::string label() const;
};

// F(theta) for one update method, unit-L2 when cfg.normalize_direction.
Tensor make_direction(UpdateMethod method, const ParamVector& theta, const Tensor& g_theta,
                      const P3AConfig& cfg);

// Predicted loss gain of stepping along g_prime instead of g_base, up to the
// positive factor beta / alpha: (g_prime - g_base) . g_base.
double score_candidate(const Tensor& g_prime, const Tensor& g_base);

// Scored perturbed-parameter candidates in tie-break order, identity last.
std::vector<Candidate> build_candidates(const diffnet::Model& model,
                                        const diffnet::LabeledSample& sample,
                                        const diffnet::DualGrad& base, const P3AConfig& cfg);

struct P3AResult {
  Tensor gradient;
  attack::DspTrace trace;
};

// Supervision gradient of the best parameter candidate (adaptive), or of the
// configured candidate (fixed). The model is never modified.
P3AResult p3a_dsp(const diffnet::Model& model, const Tensor& x, std::size_t y_true,
                  const P3AConfig& cfg);

// Provider wrapping p3a_dsp. With Granularity::kPerAttack the first call picks
// the candidate and later calls reuse that choice, so build one per run.
attack::DspProvider p3a_provider(const diffnet::Model& model, P3AConfig cfg);

}  // namespace p3a::core
