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

#include <cstddef>
#include <cstdint>
#include <string>

namespace p3a::attack {

enum class Strategy { kBim, kPgd, kMi, kDi, kTi, kSini };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

// One attack of the FGSM family. `step_size` is the per-step coefficient on
// sign(.), `eps` the Linf budget around the clean input.
struct AttackConfig {
  Strategy strategy = Strategy::kBim;
  double eps = 0.1;
  double step_size = 0.02;
  std::size_t iterations = 10;

  double mu = 1.0;               // MI / SINI momentum decay
  double di_prob = 0.5;          // DI transform probability
  double di_min_scale = 0.75;    // DI smallest resize, as a fraction of the side
  std::size_t ti_kernel_side = 5;
  double ti_sigma = 1.5;         // 0 selects the delta kernel
  std::size_t sini_copies = 5;   // SINI scale copies m
  double pgd_init_scale = 1.0;   // PGD random start amplitude, fraction of eps

  std::uint64_t seed = 0;

  // Throws ValidationError on out-of-range fields.
  void validate() const;
  std::string label() const { return to_string(strategy); }
};

}  // namespace p3a::attack
