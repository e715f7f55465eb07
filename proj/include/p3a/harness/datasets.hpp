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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "p3a/diffnet/model.hpp"
#include "p3a/numerics/tensor.hpp"

namespace p3a::harness {

using diffnet::LabeledSample;
using numerics::GridShape;

struct Dataset {
  std::vector<LabeledSample> samples;
  std::size_t num_classes = 0;
  std::size_t input_dim = 0;
  std::optional<GridShape> grid;
};

// K Gaussian clusters (unit sigma) whose centers are at least
// `separation` sigmas apart, affinely rescaled into [0, 1]^dim.
struct BlobsSpec {
  std::size_t classes = 2;
  std::size_t dim = 2;
  double separation = 6.0;
  std::size_t n = 200;
};

// Procedural side x side images: horizontal bars, vertical bars, centered
// disk, diagonal, checker (the first `classes` of them).
struct GridShapesSpec {
  std::size_t classes = 4;
  std::size_t side = 16;
  std::size_t n = 400;
  double noise = 0.05;
  std::size_t jitter = 1;  // max pattern shift in pixels
};

struct IdxSpec {
  std::string images;
  std::string labels;
  std::size_t num_classes = 10;
  std::size_t limit = 0;  // 0 = all
};

struct CsvSpec {
  std::string path;
  std::size_t num_classes = 0;  // 0 = infer as max label + 1
  std::optional<GridShape> grid;
};

struct DatasetSpec {
  std::variant<BlobsSpec, GridShapesSpec, IdxSpec, CsvSpec> kind = BlobsSpec{};
  std::uint64_t seed = 0;
  double test_fraction = 0.5;
};

Dataset gen_blobs(const BlobsSpec& spec, std::uint64_t seed);
Dataset gen_grid_shapes(const GridShapesSpec& spec, std::uint64_t seed);

// Noise-free, unshifted template of one grid-shape class.
std::vector<double> grid_shape_template(std::size_t cls, std::size_t side, long shift = 0);

// IDX image file (magic 0x00000803, u8 pixels scaled by 1/255) paired with an
// IDX label file (magic 0x00000801).
Dataset load_idx(const std::string& images_path, const std::string& labels_path,
                 std::size_t num_classes, std::size_t limit = 0);
// Rows "label,v1,...,vm" with every v in [0, 1].
Dataset load_csv(const std::string& path, std::size_t num_classes = 0,
                 std::optional<GridShape> grid = std::nullopt);

Dataset make_dataset(const DatasetSpec& spec);

struct Split {
  Dataset train;
  Dataset test;
};

// Seeded shuffle, then the last round(test_fraction * n) samples form the
// test set.
Split split_dataset(const Dataset& data, double test_fraction, std::uint64_t seed);

}  // namespace p3a::harness
