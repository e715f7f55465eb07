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

#include "p3a/attack/dsp.hpp"

#include "p3a/diffnet/backprop.hpp"

namespace p3a::attack {

std::string DspTrace::selected_label() const {
  if (selected_direction > 0) return selected_method + "+";
  if (selected_direction < 0) return selected_method + "-";
  return selected_method;
}

DspResult dsp_vanilla(const diffnet::Model& model, const Tensor& x, std::size_t y_true) {
  return {diffnet::input_gradient(model, {x, y_true}).g_x, std::nullopt};
}

DspProvider vanilla_provider(const diffnet::Model& model) {
  // The model outlives every attack run that uses the provider.
  return [&model](const Tensor& x, std::size_t y_true) { return dsp_vanilla(model, x, y_true); };
}

}  // namespace p3a::attack
