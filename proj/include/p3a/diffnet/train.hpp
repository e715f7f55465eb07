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

#include <cstdint>
#include <vector>

#include "p3a/diffnet/model.hpp"

namespace p3a::diffnet {

struct TrainOptions {
  std::size_t epochs = 20;
  double lr = 0.05;
  std::uint64_t seed = 0;
};

// Plain per-sample SGD on cross-entropy, starting from init_params(arch,
// seed) and visiting samples in a seeded shuffled order each epoch.
ParamVector train_sgd(const ModelArch& arch, const std::vector<LabeledSample>& dataset,
                      const TrainOptions& options);

double accuracy(const ModelArch& arch, const ParamVector& theta,
                const std::vector<LabeledSample>& dataset);

}  // namespace p3a::diffnet
