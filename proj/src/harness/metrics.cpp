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

#include "p3a/harness/metrics.hpp"

#include <boost/math/distributions/binomial.hpp>

#include "p3a/error.hpp"

namespace p3a::harness {

double asr(std::span<const PredictionRecord> records, bool initially_correct_only) {
  if (records.empty()) throw ValidationError("asr: no records");
  std::size_t wrong = 0;
  std::size_t total = 0;
  for (const auto& r : records) {
    if (initially_correct_only && r.clean_predicted != r.label) continue;
    ++total;
    if (r.predicted != r.label) ++wrong;
  }
  if (total == 0) return 0.0;
  return static_cast<double>(wrong) / static_cast<double>(total);
}

SignCounts sign_counts(std::span<const double> differences) {
  SignCounts c;
  for (double d : differences) {
    if (d > 0.0) ++c.positive;
    else if (d < 0.0) ++c.negative;
    else ++c.zero;
  }
  return c;
}

double sign_test_p_value(std::span<const double> differences) {
  const SignCounts c = sign_counts(differences);
  const std::size_t n = c.positive + c.negative;
  if (n == 0) return 1.0;
  if (c.positive == 0) return 1.0;
  const boost::math::binomial_distribution<double> fair(static_cast<double>(n), 0.5);
  // P(X >= positive) = 1 - P(X <= positive - 1)
  return boost::math::cdf(boost::math::complement(fair, static_cast<double>(c.positive - 1)));
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

}  // namespace p3a::harness
