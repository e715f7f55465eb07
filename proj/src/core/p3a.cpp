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

#include "p3a/core/p3a.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>

#include "p3a/error.hpp"
#include "p3a/numerics/ops.hpp"

namespace p3a::core {

using attack::CandidateGain;
using attack::DspTrace;
using diffnet::DualGrad;
using diffnet::LabeledSample;
using diffnet::Model;

std::string to_string(UpdateMethod m) {
  switch (m) {
    case UpdateMethod::kDefensive: return "Defensive";
    case UpdateMethod::kDecoupling: return "Decoupling";
    case UpdateMethod::kMagnitude: return "Magnitude";
    case UpdateMethod::kUniform: return "Uniform";
  }
  return "?";
}

UpdateMethod update_method_from_string(const std::string& name) {
  std::string low;
  for (char c : name) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (UpdateMethod m : kAllMethods) {
    std::string cand = to_string(m);
    for (char& c : cand) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == cand) return m;
  }
  throw ValidationError("unknown update method '" + name + "'");
}

void P3AConfig::validate() const {
  if (!(alpha_lr > 0.0) || !std::isfinite(alpha_lr)) {
    throw ValidationError("p3a alpha_lr must be positive");
  }
  if (methods.empty() && !fixed) throw ValidationError("p3a needs at least one update method");
  if (!(beta > 0.0)) throw ValidationError("p3a beta must be positive");
  if (!std::isfinite(uniform_s)) throw ValidationError("p3a uniform_s must be finite");
  if (fixed && fixed->direction != 1 && fixed->direction != -1) {
    throw ValidationError("fixed direction must be +1 or -1");
  }
  if (max_candidates == 0) throw ValidationError("p3a max_candidates must be positive");
}

std::string P3AConfig::selection_label() const {
  if (!fixed) return "adaptive";
  return "fixed(" + to_string(fixed->method) + (fixed->direction > 0 ? "+" : "-") + ")";
}

std::string Candidate::label() const {
  if (!method) return "Identity";
  return to_string(*method) + (direction > 0 ? "+" : "-");
}

Tensor make_direction(UpdateMethod method, const ParamVector& theta, const Tensor& g_theta,
                      const P3AConfig& cfg) {
  Tensor dir;
  switch (method) {
    case UpdateMethod::kDefensive:
      dir = g_theta;
      break;
    case UpdateMethod::kUniform:
      dir = Tensor::filled(theta.shape(), cfg.uniform_s);
      break;
    case UpdateMethod::kMagnitude:
      // d(theta^2)/d(theta)
      dir = numerics::scaled(theta, 2.0);
      break;
    case UpdateMethod::kDecoupling:
      dir = numerics::sign(g_theta);
      break;
  }
  if (dir.size() != theta.size()) {
    throw ShapeError("update direction length differs from the parameter count");
  }
  if (cfg.normalize_direction) {
    const double n = numerics::norm(dir, numerics::NormOrder::kL2);
    if (n > 0.0) dir = numerics::scaled(dir, 1.0 / n);
  }
  return dir;
}

double score_candidate(const Tensor& g_prime, const Tensor& g_base) {
  if (!g_prime.same_shape(g_base)) throw ShapeError("score_candidate: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < g_base.size(); ++i) acc += (g_prime[i] - g_base[i]) * g_base[i];
  return acc;
}

namespace {

struct Evaluated {
  ParamVector theta_prime;
  Tensor g_prime;
};

Evaluated evaluate(const Model& model, const LabeledSample& sample, const Tensor& direction,
                   double scale) {
  Evaluated e;
  e.theta_prime = diffnet::perturb_params(model.theta, direction, scale);
  e.g_prime = diffnet::input_gradient(model.arch, e.theta_prime, sample).g_x;
  return e;
}

bool wants(DirectionPolicy policy, int direction) {
  if (policy == DirectionPolicy::kBoth) return true;
  return (policy == DirectionPolicy::kPlus) == (direction > 0);
}

Candidate identity_candidate(const Model& model, const DualGrad& base) {
  Candidate c;
  c.theta_prime = model.theta;
  c.g_prime = base.g_x;
  c.gain = 0.0;
  return c;
}

// Scores one (method, direction) pair. Under the central variant the gain
// is the symmetric difference estimate, signed by the direction.
Candidate scored(const Model& model, const LabeledSample& sample, const DualGrad& base,
                 const P3AConfig& cfg, UpdateMethod method, int direction,
                 const Tensor& dir) {
  Evaluated mine = evaluate(model, sample, dir, direction * cfg.alpha_lr);
  Candidate c;
  c.method = method;
  c.direction = direction;
  if (cfg.dfd_variant == DfdVariant::kForward) {
    c.gain = score_candidate(mine.g_prime, base.g_x);
  } else {
    const Evaluated other = evaluate(model, sample, dir, -direction * cfg.alpha_lr);
    double acc = 0.0;
    for (std::size_t i = 0; i < base.g_x.size(); ++i) {
      acc += 0.5 * (mine.g_prime[i] - other.g_prime[i]) * base.g_x[i];
    }
    c.gain = acc;
  }
  c.theta_prime = std::move(mine.theta_prime);
  c.g_prime = std::move(mine.g_prime);
  return c;
}

DspTrace make_trace(const DualGrad& base, const std::vector<Candidate>& all,
                    const Candidate& chosen) {
  DspTrace t;
  t.baseline_grad_norm = numerics::norm(base.g_x, numerics::NormOrder::kL2);
  for (const Candidate& c : all) {
    if (c.method) t.candidates.push_back(CandidateGain{to_string(*c.method), c.direction, c.gain});
  }
  t.selected_method = chosen.method ? to_string(*chosen.method) : "Identity";
  t.selected_direction = chosen.direction;
  t.selected_gain = chosen.gain;
  return t;
}

std::size_t argmax_gain(const std::vector<Candidate>& cands) {
  // Strict comparison keeps the earliest candidate on ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (cands[i].gain > cands[best].gain) best = i;
  }
  return best;
}

P3AResult fixed_result(const Model& model, const LabeledSample& sample, const DualGrad& base,
                       const P3AConfig& cfg, const FixedChoice& choice) {
  const Tensor dir = make_direction(choice.method, model.theta, base.g_theta, cfg);
  Candidate c = scored(model, sample, base, cfg, choice.method, choice.direction, dir);
  DspTrace trace = make_trace(base, {c}, c);
  return {std::move(c.g_prime), std::move(trace)};
}

}  // namespace

std::vector<Candidate> build_candidates(const Model& model, const LabeledSample& sample,
                                        const DualGrad& base, const P3AConfig& cfg) {
  std::vector<Candidate> out;
  for (UpdateMethod method : kAllMethods) {
    if (std::find(cfg.methods.begin(), cfg.methods.end(), method) == cfg.methods.end()) continue;
    const Tensor dir = make_direction(method, model.theta, base.g_theta, cfg);
    for (int direction : {+1, -1}) {
      if (!wants(cfg.directions, direction)) continue;
      if (out.size() >= cfg.max_candidates) break;
      out.push_back(scored(model, sample, base, cfg, method, direction, dir));
    }
  }
  out.push_back(identity_candidate(model, base));
  return out;
}

P3AResult p3a_dsp(const Model& model, const Tensor& x, std::size_t y_true, const P3AConfig& cfg) {
  cfg.validate();
  const LabeledSample sample{x, y_true};
  const DualGrad base = diffnet::backward_dual(model, sample);
  if (cfg.fixed) return fixed_result(model, sample, base, cfg, *cfg.fixed);

  std::vector<Candidate> cands = build_candidates(model, sample, base, cfg);
  std::size_t best = argmax_gain(cands);
  // A perturbation lost to rounding reproduces g exactly; report it as the
  // identity it is.
  if (cands[best].gain == 0.0 && cands[best].g_prime == base.g_x) best = cands.size() - 1;
  DspTrace trace = make_trace(base, cands, cands[best]);
  return {std::move(cands[best].g_prime), std::move(trace)};
}

attack::DspProvider p3a_provider(const Model& model, P3AConfig cfg) {
  cfg.validate();
  if (cfg.granularity == Granularity::kPerStep || cfg.fixed) {
    return [&model, cfg](const Tensor& x, std::size_t y) {
      P3AResult r = p3a_dsp(model, x, y, cfg);
      return attack::DspResult{std::move(r.gradient), std::move(r.trace)};
    };
  }
  // Per-attack: remember the first adaptive choice; nullopt inside means
  // the identity won.
  auto choice = std::make_shared<std::optional<std::optional<FixedChoice>>>();
  return [&model, cfg, choice](const Tensor& x, std::size_t y) {
    if (!choice->has_value()) {
      P3AResult r = p3a_dsp(model, x, y, cfg);
      if (r.trace.selected_direction == 0) {
        *choice = std::optional<FixedChoice>{};
      } else {
        *choice = std::optional<FixedChoice>{
            FixedChoice{update_method_from_string(r.trace.selected_method),
                        r.trace.selected_direction}};
      }
      return attack::DspResult{std::move(r.gradient), std::move(r.trace)};
    }
    const std::optional<FixedChoice>& picked = **choice;
    const LabeledSample sample{x, y};
    const DualGrad base = diffnet::backward_dual(model, sample);
    if (!picked) {
      DspTrace t = make_trace(base, {}, identity_candidate(model, base));
      return attack::DspResult{base.g_x, std::move(t)};
    }
    P3AResult r = fixed_result(model, sample, base, cfg, *picked);
    return attack::DspResult{std::move(r.gradient), std::move(r.trace)};
  };
}

}  // namespace p3a::core
