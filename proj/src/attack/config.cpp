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

#include "p3a/attack/config.hpp"

#include <cctype>
#include <cmath>

#include "p3a/error.hpp"

namespace p3a::attack {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kBim: return "BIM";
    case Strategy::kPgd: return "PGD";
    case Strategy::kMi: return "MI";
    case Strategy::kDi: return "DI";
    case Strategy::kTi: return "TI";
    case Strategy::kSini: return "SINI";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  std::string up;
  for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  // Accept the "-FGSM" suffixed names as aliases.
  if (up.size() > 5 && up.ends_with("-FGSM")) up.resize(up.size() - 5);
  if (up == "BIM") return Strategy::kBim;
  if (up == "PGD") return Strategy::kPgd;
  if (up == "MI") return Strategy::kMi;
  if (up == "DI") return Strategy::kDi;
  if (up == "TI") return Strategy::kTi;
  if (up == "SINI") return Strategy::kSini;
  throw ValidationError("unknown attack strategy '" + name + "'");
}

void AttackConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(eps)) throw ValidationError("attack eps must lie in [0, 1]");
  if (!(step_size >= 0.0) || !std::isfinite(step_size)) {
    throw ValidationError("attack step_size must be non-negative");
  }
  if (iterations < 1) throw ValidationError("attack iterations must be at least 1");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ValidationError("momentum mu must be non-negative");
  if (!in_unit(di_prob)) throw ValidationError("di_prob must lie in [0, 1]");
  if (!(di_min_scale > 0.0 && di_min_scale <= 1.0)) {
    throw ValidationError("di_min_scale must lie in (0, 1]");
  }
  if (ti_kernel_side == 0 || ti_kernel_side % 2 == 0) {
    throw ValidationError("ti_kernel_side must be odd");
  }
  if (!(ti_sigma >= 0.0)) throw ValidationError("ti_sigma must be non-negative");
  if (sini_copies < 1) throw ValidationError("sini_copies must be at least 1");
  if (!in_unit(pgd_init_scale)) throw ValidationError("pgd_init_scale must lie in [0, 1]");
}

}  // namespace p3a::attack
