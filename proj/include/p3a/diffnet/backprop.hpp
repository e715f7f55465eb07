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

#include "p3a/diffnet/model.hpp"

namespace p3a::diffnet {

struct DualGrad {
  double loss = 0.0;
  Tensor g_x;      // dL/dx, length input_dim
  Tensor g_theta;  // dL/dtheta, flat parameter layout
};

struct InputGrad {
  double loss = 0.0;
  Tensor g_x;
};

Tensor forward(const ModelArch& arch, const ParamVector& theta, const Tensor& x);

// Cross-entropy loss with gradients w.r.t. both the input and the parameters.
DualGrad backward_dual(const ModelArch& arch, const ParamVector& theta,
                       const LabeledSample& sample);

// Same backward pass without accumulating parameter gradients. The g_x it
// returns is bit-identical to backward_dual's.
InputGrad input_gradient(const ModelArch& arch, const ParamVector& theta,
                         const LabeledSample& sample);

inline Tensor forward(const Model& m, const Tensor& x) { return forward(m.arch, m.theta, x); }
inline DualGrad backward_dual(const Model& m, const LabeledSample& s) {
  return backward_dual(m.arch, m.theta, s);
}
inline InputGrad input_gradient(const Model& m, const LabeledSample& s) {
  return input_gradient(m.arch, m.theta, s);
}

}  // namespace p3a::diffnet
