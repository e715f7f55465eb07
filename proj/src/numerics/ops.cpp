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

#include "p3a/numerics/ops.hpp"

#include <algorithm>
#include <cmath>

#include "p3a/error.hpp"

namespace p3a::numerics {

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

}  // namespace

double dot(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  if (!std::isfinite(acc)) throw NonFiniteError("dot: non-finite result");
  return acc;
}

double norm(const Tensor& a, NormOrder order) {
  double acc = 0.0;
  switch (order) {
    case NormOrder::kL1:
      for (double v : a.values()) acc += std::abs(v);
      return acc;
    case NormOrder::kL2:
      for (double v : a.values()) acc += v * v;
      return std::sqrt(acc);
    case NormOrder::kLinf:
      for (double v : a.values()) acc = std::max(acc, std::abs(v));
      return acc;
  }
  return acc;
}

Tensor sign(const Tensor& a) {
  Tensor out = Tensor::zeros_like(a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] > 0.0 ? 1.0 : (a[i] < 0.0 ? -1.0 : 0.0);
  }
  return out;
}

Tensor clip_ball(const Tensor& x, const Tensor& x0, double eps) {
  require_same_shape(x, x0, "clip_ball");
  if (!(eps >= 0.0)) throw ValidationError("clip_ball: eps must be non-negative");
  Tensor out = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lo = std::max(kInputMin, x0[i] - eps);
    const double hi = std::min(kInputMax, x0[i] + eps);
    // x0 far outside [0,1] makes the intersection empty; the input range wins.
    out[i] = lo <= hi ? std::clamp(x[i], lo, hi) : std::clamp(x[i], kInputMin, kInputMax);
  }
  return out;
}

Tensor smooth2d(const Tensor& g, const GridShape& grid, const Tensor& kernel) {
  grid.validate();
  if (g.size() != grid.flat_size()) {
    throw ShapeError("smooth2d: gradient length " + std::to_string(g.size()) +
                     " incompatible with grid " + std::to_string(grid.height) + "x" +
                     std::to_string(grid.width) + "x" + std::to_string(grid.channels));
  }
  const auto& ks = kernel.shape();
  if (ks.size() != 2 || ks[0] != ks[1] || ks[0] % 2 == 0) {
    throw ValidationError("smooth2d: kernel must be square with odd side, got " +
                          kernel.shape_string());
  }
  double total = 0.0;
  for (double v : kernel.values()) total += v;
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("smooth2d: kernel entries must sum to 1");
  }

  const long side = static_cast<long>(ks[0]);
  const long half = side / 2;
  const long h = static_cast<long>(grid.height);
  const long w = static_cast<long>(grid.width);
  Tensor out = Tensor::zeros_like(g);
  for (std::size_t c = 0; c < grid.channels; ++c) {
    for (long r = 0; r < h; ++r) {
      for (long q = 0; q < w; ++q) {
        double acc = 0.0;
        // out[r,q] = sum_{i,j} k[i,j] * g[r + half - i, q + half - j]
        for (long i = 0; i < side; ++i) {
          const long rr = r + half - i;
          if (rr < 0 || rr >= h) continue;
          for (long j = 0; j < side; ++j) {
            const long qq = q + half - j;
            if (qq < 0 || qq >= w) continue;
            acc += kernel[static_cast<std::size_t>(i * side + j)] *
                   g[grid.index(static_cast<std::size_t>(rr), static_cast<std::size_t>(qq), c)];
          }
        }
        out[grid.index(static_cast<std::size_t>(r), static_cast<std::size_t>(q), c)] = acc;
      }
    }
  }
  return out;
}

Tensor gaussian_kernel(std::size_t side, double sigma) {
  if (side == 0 || side % 2 == 0) throw ValidationError("gaussian_kernel: side must be odd");
  if (sigma < 0.0) throw ValidationError("gaussian_kernel: sigma must be non-negative");
  Tensor k({side, side});
  const long half = static_cast<long>(side / 2);
  if (sigma == 0.0) {
    k[static_cast<std::size_t>(half) * side + static_cast<std::size_t>(half)] = 1.0;
    return k;
  }
  double total = 0.0;
  for (long i = -half; i <= half; ++i) {
    for (long j = -half; j <= half; ++j) {
      const double v = std::exp(-static_cast<double>(i * i + j * j) / (2.0 * sigma * sigma));
      k[static_cast<std::size_t>((i + half) * static_cast<long>(side) + (j + half))] = v;
      total += v;
    }
  }
  for (double& v : k.values()) v /= total;
  return k;
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  out.require_finite("add");
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  Tensor out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  out.require_finite("sub");
  return out;
}

Tensor scaled(const Tensor& a, double s) {
  Tensor out = a;
  for (double& v : out.values()) v *= s;
  out.require_finite("scaled");
  return out;
}

void axpy(double s, const Tensor& x, Tensor& y) {
  require_same_shape(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
  y.require_finite("axpy");
}

bool is_zero(const Tensor& a) {
  return std::all_of(a.values().begin(), a.values().end(), [](double v) { return v == 0.0; });
}

}  // namespace p3a::numerics
