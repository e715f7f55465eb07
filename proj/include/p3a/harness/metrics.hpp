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
#include <span>
#include <vector>

namespace p3a::harness {

struct PredictionRecord {
  std::size_t predicted = 0;  // after the attack
  std::size_t label = 0;
  std::size_t clean_predicted = 0;
};

// Fraction of records misclassified after the attack. With
// `initially_correct_only` the denominator is the records the model got
// right before the attack; otherwise it is every record.
double asr(std::span<const PredictionRecord> records, bool initially_correct_only = false);

// One-sided exact sign test for "differences tend to be positive": the
// probability of at least as many positives among the non-zero differences
// under a fair coin. Returns 1 when every difference is zero.
double sign_test_p_value(std::span<const double> differences);

struct SignCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};
SignCounts sign_counts(std::span<const double> differences);

double mean(std::span<const double> values);

}  // namespace p3a::harness
