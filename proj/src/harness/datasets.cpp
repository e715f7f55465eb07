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

#include "p3a/harness/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "p3a/error.hpp"

namespace p3a::harness {

using numerics::Tensor;

namespace {

constexpr double kBackground = 0.1;
constexpr double kForeground = 0.9;
constexpr std::size_t kMaxPlacementTries = 20000;

}  // namespace

Dataset gen_blobs(const BlobsSpec& spec, std::uint64_t seed) {
  if (spec.classes < 2) throw ValidationError("blobs need at least two classes");
  if (spec.dim == 0) throw ValidationError("blobs dim must be positive");
  if (!(spec.separation > 0.0)) throw ValidationError("blobs separation must be positive");
  if (spec.n < spec.classes) throw ValidationError("blobs n must be at least the class count");

  std::mt19937_64 rng(seed);
  // Centers live in a box twice the separation wide, so the class count a
  // given dim can hold at this separation is bounded.
  const double box = 2.0 * spec.separation;
  std::uniform_real_distribution<double> place(0.0, box);
  std::vector<std::vector<double>> centers;
  for (std::size_t k = 0; k < spec.classes; ++k) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kMaxPlacementTries && !placed; ++attempt) {
      std::vector<double> c(spec.dim);
      for (double& v : c) v = place(rng);
      placed = std::all_of(centers.begin(), centers.end(), [&](const std::vector<double>& o) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < spec.dim; ++i) d2 += (c[i] - o[i]) * (c[i] - o[i]);
        return std::sqrt(d2) >= spec.separation;
      });
      if (placed) centers.push_back(std::move(c));
    }
    if (!placed) {
      throw ValidationError("infeasible blob packing: cannot place " +
                            std::to_string(spec.classes) + " centers " +
                            std::to_string(spec.separation) + " sigma apart in " +
                            std::to_string(spec.dim) + " dimensions");
    }
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> raw(spec.n, std::vector<double>(spec.dim));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const auto& c = centers[i % spec.classes];
    for (std::size_t d = 0; d < spec.dim; ++d) {
      raw[i][d] = c[d] + gauss(rng);
      lo = std::min(lo, raw[i][d]);
      hi = std::max(hi, raw[i][d]);
    }
  }
  // One scale for every axis keeps the separation ratio intact.
  const double span = hi > lo ? hi - lo : 1.0;
  Dataset out;
  out.num_classes = spec.classes;
  out.input_dim = spec.dim;
  out.grid = GridShape{1, spec.dim, 1};
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::vector<double> x(spec.dim);
    for (std::size_t d = 0; d < spec.dim; ++d) {
      x[d] = std::clamp((raw[i][d] - lo) / span, 0.0, 1.0);
    }
    out.samples.push_back({Tensor::vector(std::move(x)), i % spec.classes});
  }
  return out;
}

std::vector<double> grid_shape_template(std::size_t cls, std::size_t side, long shift) {
  std::vector<double> img(side * side, kBackground);
  const long s = static_cast<long>(side);
  const auto wrap = [](long v, long m) { return ((v % m) + m) % m; };
  for (long r = 0; r < s; ++r) {
    for (long q = 0; q < s; ++q) {
      bool on = false;
      switch (cls) {
        case 0: on = wrap(r + shift, 4) < 2; break;  // horizontal bars
        case 1: on = wrap(q + shift, 4) < 2; break;  // vertical bars
        case 2: {                                    // centered disk
          const double cy = (s - 1) / 2.0 + static_cast<double>(shift);
          const double cx = (s - 1) / 2.0 - static_cast<double>(shift);
          const double rad = s / 4.0;
          on = (r - cy) * (r - cy) + (q - cx) * (q - cx) <= rad * rad;
          break;
        }
        case 3: on = std::abs(r - q + shift) <= 1; break;  // diagonal
        case 4: on = (wrap(r + shift, 8) < 4) != (wrap(q + shift, 8) < 4); break;  // checker
        default: throw ValidationError("grid shapes support at most 5 classes");
      }
      if (on) img[static_cast<std::size_t>(r * s + q)] = kForeground;
    }
  }
  return img;
}

Dataset gen_grid_shapes(const GridShapesSpec& spec, std::uint64_t seed) {
  if (spec.classes < 2) throw ValidationError("grid shapes need at least two classes");
  if (spec.classes > 5) throw ValidationError("grid shapes support at most 5 classes");
  if (spec.side < 8) throw ValidationError("grid shapes need side >= 8");
  if (spec.n < spec.classes) throw ValidationError("grid shapes n must be at least the class count");
  if (spec.noise < 0.0) throw ValidationError("grid shapes noise must be non-negative");

  std::mt19937_64 rng(seed);
  const long j = static_cast<long>(spec.jitter);
  std::uniform_int_distribution<long> pick_shift(-j, j);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Dataset out;
  out.num_classes = spec.classes;
  out.input_dim = spec.side * spec.side;
  out.grid = GridShape{spec.side, spec.side, 1};
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t cls = i % spec.classes;
    std::vector<double> img = grid_shape_template(cls, spec.side, spec.jitter ? pick_shift(rng) : 0);
    if (spec.noise > 0.0) {
      for (double& v : img) v = std::clamp(v + spec.noise * gauss(rng), 0.0, 1.0);
    }
    out.samples.push_back({Tensor::vector(std::move(img)), cls});
  }
  return out;
}

Dataset make_dataset(const DatasetSpec& spec) {
  return std::visit(
      [&](const auto& kind) -> Dataset {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, BlobsSpec>) {
          return gen_blobs(kind, spec.seed);
        } else if constexpr (std::is_same_v<T, GridShapesSpec>) {
          return gen_grid_shapes(kind, spec.seed);
        } else if constexpr (std::is_same_v<T, IdxSpec>) {
          return load_idx(kind.images, kind.labels, kind.num_classes, kind.limit);
        } else {
          return load_csv(kind.path, kind.num_classes, kind.grid);
        }
      },
      spec.kind);
}

Split split_dataset(const Dataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test_fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(data.samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(order.size())));
  Split s;
  s.train = Dataset{{}, data.num_classes, data.input_dim, data.grid};
  s.test = s.train;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& dst = i + n_test < order.size() ? s.train : s.test;
    dst.samples.push_back(data.samples[order[i]]);
  }
  return s;
}

}  // namespace p3a::harness
