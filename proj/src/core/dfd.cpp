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

#include "p3a/core/dfd.hpp"

#include <cmath>

#include "p3a/error.hpp"
#include "p3a/numerics/ops.hpp"

namespace p3a::core {

namespace {

void check_args(const Tensor& u, const Tensor& delta_u, double eps_fd) {
  if (!(eps_fd > 0.0) || !std::isfinite(eps_fd)) {
    throw ValidationError("finite-difference step must be positive and finite");
  }
  if (!u.same_shape(delta_u)) throw ShapeError("dfd: direction shape differs from the point");
}

Tensor shifted(const Tensor& u, const Tensor& delta_u, double scale) {
  Tensor out = u;
  numerics::axpy(scale, delta_u, out);
  return out;
}

Tensor difference_quotient(const Tensor& hi, const Tensor& lo, double denom) {
  if (!hi.same_shape(lo)) throw ShapeError("dfd: gradient shapes differ between evaluations");
  Tensor out = Tensor::zeros_like(hi);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (hi[i] - lo[i]) / denom;
  out.require_finite("directional finite difference");
  return out;
}

}  // namespace

Tensor dfd_forward(const GradFn& grad_fn, const Tensor& u, const Tensor& delta_u, double eps_fd) {
  check_args(u, delta_u, eps_fd);
  const Tensor hi = grad_fn(shifted(u, delta_u, eps_fd));
  const Tensor base = grad_fn(u);
  hi.require_finite("dfd forward evaluation");
  base.require_finite("dfd base evaluation");
  return difference_quotient(hi, base, eps_fd);
}

Tensor dfd_central(const GradFn& grad_fn, const Tensor& u, const Tensor& delta_u, double eps_fd) {
  check_args(u, delta_u, eps_fd);
  const Tensor hi = grad_fn(shifted(u, delta_u, eps_fd));
  const Tensor lo = grad_fn(shifted(u, delta_u, -eps_fd));
  hi.require_finite("dfd forward evaluation");
  lo.require_finite("dfd backward evaluation");
  return difference_quotient(hi, lo, 2.0 * eps_fd);
}

}  // namespace p3a::core
