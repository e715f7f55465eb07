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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "p3a/core/dfd.hpp"
#include "p3a/error.hpp"
#include "p3a/numerics/ops.hpp"

using namespace p3a::core;

namespace {

// Least-squares slope of log(err) against log(eps).
double loglog_slope(const std::vector<double>& eps, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double x = std::log(eps[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("u-linear gradients are differenced exactly") {
  // f(v, u) = v^2 u, df/dv = 2 v u, at v = 3.
  const GradFn grad = [](const Tensor& u) { return Tensor::vector({2.0 * 3.0 * u[0]}); };
  const Tensor u = Tensor::vector({1.0}), du = Tensor::vector({5.0});
  for (double eps : {0.5, 0.25, 1e-3, 1e-6}) {
    CHECK(dfd_forward(grad, u, du, eps)[0] == doctest::Approx(30.0).epsilon(1e-9));
    CHECK(dfd_central(grad, u, du, eps)[0] == doctest::Approx(30.0).epsilon(1e-9));
  }
  CHECK(dfd_forward(grad, u, du, 0.5)[0] == 30.0);
  CHECK(p3a::numerics::is_zero(dfd_forward(grad, u, Tensor::vector({0.0}), 1e-3)));
  CHECK(p3a::numerics::is_zero(dfd_central(grad, u, Tensor::vector({0.0}), 1e-3)));
}

TEST_CASE("quadratic in u: forward error eps, central exact") {
  // f(v, u) = v u^2, df/dv = u^2; mixed derivative times du is 2 u du = 2.
  const GradFn grad = [](const Tensor& u) { return Tensor::vector({u[0] * u[0]}); };
  const Tensor u = Tensor::vector({1.0}), du = Tensor::vector({1.0});
  // ((1 + e)^2 - 1) / e = 2 + e
  CHECK(dfd_forward(grad, u, du, 1e-3)[0] == doctest::Approx(2.001).epsilon(1e-9));
  CHECK(std::abs(dfd_central(grad, u, du, 1e-3)[0] - 2.0) <= 1e-9);
}

TEST_CASE("cubic in u: measured orders of accuracy") {
  // f(v, u) = v u^3 at u = 1.3, du = 0.7; exact value 3 u^2 du.
  const GradFn grad = [](const Tensor& u) { return Tensor::vector({u[0] * u[0] * u[0]}); };
  const Tensor u = Tensor::vector({1.3}), du = Tensor::vector({0.7});
  const double exact = 3.0 * 1.3 * 1.3 * 0.7;
  std::vector<double> eps, fwd, ctr;
  for (double e = 1e-1; e >= 0.99e-4; e /= 2.0) {
    eps.push_back(e);
    fwd.push_back(std::abs(dfd_forward(grad, u, du, e)[0] - exact));
    ctr.push_back(std::abs(dfd_central(grad, u, du, e)[0] - exact));
  }
  CHECK(loglog_slope(eps, fwd) >= 0.9);
  CHECK(loglog_slope(eps, ctr) >= 1.8);
  // Halving eps quarters the central error.
  CHECK(ctr[0] / ctr[1] == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("DFD argument errors") {
  const GradFn grad = [](const Tensor& u) { return u; };
  const Tensor u = Tensor::vector({1.0, 2.0});
  CHECK_THROWS_AS(dfd_forward(grad, u, u, 0.0), p3a::ValidationError);
  CHECK_THROWS_AS(dfd_central(grad, u, u, -1.0), p3a::ValidationError);
  CHECK_THROWS_AS(dfd_forward(grad, u, Tensor::vector({1.0}), 1e-3), p3a::ShapeError);
  const GradFn blows_up = [](const Tensor& v) { return Tensor::vector({v[0] > 1.0 ? 1e308 : -1e308}); };
  CHECK_THROWS_AS(dfd_forward(blows_up, Tensor::vector({1.0}), Tensor::vector({1.0}), 1e-3), p3a::NonFiniteError);
}
