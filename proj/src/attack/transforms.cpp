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

#include "p3a/attack/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "p3a/error.hpp"

namespace p3a::attack {

namespace {

struct Overlap {
  std::size_t src;
  double weight;
};

// For each destination cell, the source cells it covers and by how much.
std::vector<std::vector<Overlap>> overlaps(std::size_t src_len, std::size_t dst_len) {
  std::vector<std::vector<Overlap>> out(dst_len);
  const double ratio = static_cast<double>(src_len) / static_cast<double>(dst_len);
  for (std::size_t d = 0; d < dst_len; ++d) {
    const double lo = static_cast<double>(d) * ratio;
    const double hi = static_cast<double>(d + 1) * ratio;
    const auto first = static_cast<std::size_t>(std::floor(lo));
    const auto last = std::min(src_len, static_cast<std::size_t>(std::ceil(hi)));
    for (std::size_t s = first; s < last; ++s) {
      const double w = std::min(hi, static_cast<double>(s + 1)) - std::max(lo, static_cast<double>(s));
      if (w > 0.0) out[d].push_back({s, w});
    }
  }
  return out;
}

}  // namespace

Tensor area_resize(const Tensor& x, const GridShape& from, std::size_t height, std::size_t width) {
  const auto rows = overlaps(from.height, height);
  const auto cols = overlaps(from.width, width);
  const GridShape to{height, width, from.channels};
  Tensor out({to.flat_size()});
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t q = 0; q < width; ++q) {
      for (std::size_t c = 0; c < from.channels; ++c) {
        double acc = 0.0;
        double area = 0.0;
        for (const Overlap& ro : rows[r]) {
          for (const Overlap& co : cols[q]) {
            const double w = ro.weight * co.weight;
            acc += w * x[from.index(ro.src, co.src, c)];
            area += w;
          }
        }
        out[to.index(r, q, c)] = acc / area;
      }
    }
  }
  return out;
}

Tensor di_transform(const Tensor& x, const GridShape& grid, const AttackConfig& cfg,
                    std::mt19937_64& rng) {
  grid.validate();
  if (x.size() != grid.flat_size()) {
    throw ShapeError("di_transform: input length " + std::to_string(x.size()) +
                     " does not match grid");
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (!(coin(rng) < cfg.di_prob)) return x;

  const auto min_side = [&](std::size_t side) {
    const auto s = static_cast<std::size_t>(std::ceil(cfg.di_min_scale * static_cast<double>(side)));
    return std::clamp<std::size_t>(s, 1, side);
  };
  std::uniform_int_distribution<std::size_t> pick_w(min_side(grid.width), grid.width);
  const std::size_t new_w = pick_w(rng);
  std::size_t new_h = grid.height;
  if (grid.height == grid.width) {
    new_h = new_w;
  } else {
    const double ratio = static_cast<double>(new_w) / static_cast<double>(grid.width);
    new_h = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(ratio * static_cast<double>(grid.height))),
        min_side(grid.height), grid.height);
  }
  std::uniform_int_distribution<std::size_t> pick_y(0, grid.height - new_h);
  std::uniform_int_distribution<std::size_t> pick_x(0, grid.width - new_w);
  const std::size_t oy = pick_y(rng);
  const std::size_t ox = pick_x(rng);

  if (new_h == grid.height && new_w == grid.width) return x;
  const Tensor small = area_resize(x, grid, new_h, new_w);
  const GridShape small_grid{new_h, new_w, grid.channels};
  Tensor out = Tensor::zeros_like(x);
  for (std::size_t r = 0; r < new_h; ++r) {
    for (std::size_t q = 0; q < new_w; ++q) {
      for (std::size_t c = 0; c < grid.channels; ++c) {
        out[grid.index(r + oy, q + ox, c)] = small[small_grid.index(r, q, c)];
      }
    }
  }
  return out;
}

}  // namespace p3a::attack
