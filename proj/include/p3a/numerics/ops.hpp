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

#include "p3a/numerics/tensor.hpp"

namespace p3a::numerics {

enum class NormOrder { kL1, kL2, kLinf };

// Inputs are clamped into this range by every projection.
inline constexpr double kInputMin = 0.0;
inline constexpr double kInputMax = 1.0;

double dot(const Tensor& a, const Tensor& b);
double norm(const Tensor& a, NormOrder order);

// Elementwise sign with sign(0) = 0.
Tensor sign(const Tensor& a);

// Projection onto the Linf ball of radius eps around x0, intersected with
// the valid input box [0, 1].
Tensor clip_ball(const Tensor& x, const Tensor& x0, double eps);

// Per-channel 2-D convolution of g (channel-last grid layout) with a square,
// odd-sided kernel whose entries sum to 1. Same-size output, zero padding.
Tensor smooth2d(const Tensor& g, const GridShape& grid, const Tensor& kernel);

// side x side Gaussian renormalized to sum 1. sigma == 0 yields the delta
// kernel.
Tensor gaussian_kernel(std::size_t side, double sigma);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scaled(const Tensor& a, double s);
// y += s * x
void axpy(double s, const Tensor& x, Tensor& y);

bool is_zero(const Tensor& a);

}  // namespace p3a::numerics
