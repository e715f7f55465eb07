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

#include "p3a/attack/config.hpp"
#include "p3a/numerics/tensor.hpp"

namespace p3a::attack {

using numerics::GridShape;
using numerics::Tensor;

// Diverse-input transform. With probability cfg.di_prob the image is
// area-averaged down to a random size in [ceil(di_min_scale * side), side]
// and pasted at a random offset on a zero canvas of the original size;
// otherwise it is returned unchanged. Consumes rng draws either way.
Tensor di_transform(const Tensor& x, const GridShape& grid, const AttackConfig& cfg,
                    std::mt19937_64& rng);

// Area-average resampling of one grid to another size.
Tensor area_resize(const Tensor& x, const GridShape& from, std::size_t height, std::size_t width);

}  // namespace p3a::attack
