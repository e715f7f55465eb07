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

#include "p3a/numerics/tensor.hpp"

namespace p3a::core {

using numerics::Tensor;

// Maps a point u to the gradient of some f(v, u) with respect to v.
using GradFn = std::function<Tensor(const Tensor& u)>;

// Directional finite differences: both estimate the mixed second derivative
// (d^2 f / dv du) * delta_u from two first-order gradients.
//   forward: (grad(u + eps du) - grad(u)) / eps             error O(eps)
//   central: (grad(u + eps du) - grad(u - eps du)) / 2 eps  error O(eps^2)
Tensor dfd_forward(const GradFn& grad_fn, const Tensor& u, const Tensor& delta_u, double eps_fd);
Tensor dfd_central(const GradFn& grad_fn, const Tensor& u, const Tensor& delta_u, double eps_fd);

}  // namespace p3a::core
