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

#include <filesystem>
#include <map>

#include "p3a/atomic_file.hpp"
#include "p3a/diffnet/train.hpp"
#include "p3a/error.hpp"
#include "p3a/harness/datasets.hpp"

using namespace p3a::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "p3a_datasets_test";
  fs::create_directories(dir);
  return dir / name;
}

void put_u32_be(std::string& s, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) s.push_back(static_cast<char>((v >> shift) & 0xff));
}

// IDX image and label files holding `n` images of rows x cols.
std::pair<std::string, std::string> idx_bytes(std::uint32_t n, std::uint32_t rows, std::uint32_t cols,
                                              const std::vector<unsigned char>& pixels,
                                              const std::vector<unsigned char>& labels) {
  std::string img, lbl;
  put_u32_be(img, 0x803);
  put_u32_be(img, n);
  put_u32_be(img, rows);
  put_u32_be(img, cols);
  img.append(pixels.begin(), pixels.end());
  put_u32_be(lbl, 0x801);
  put_u32_be(lbl, n);
  lbl.append(labels.begin(), labels.end());
  return {img, lbl};
}

bool bytes_equal(const Dataset& a, const Dataset& b) {
  if (a.samples.size() != b.samples.size()) return false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    if (!(a.samples[i].x == b.samples[i].x) || a.samples[i].y_true != b.samples[i].y_true) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("blobs") {
  BlobsSpec spec;
  const Dataset d = gen_blobs(spec, 1);
  CHECK(d.samples.size() == 200);
  CHECK(d.num_classes == 2);
  CHECK(bytes_equal(d, gen_blobs(spec, 1)));
  CHECK_FALSE(bytes_equal(d, gen_blobs(spec, 2)));
  for (const auto& s : d.samples)
    for (double v : s.x.values()) CHECK((v >= 0.0 && v <= 1.0));

  const auto lin = p3a::diffnet::ModelArch::mlp(2, {}, 2, p3a::diffnet::Activation::kNone);
  for (std::uint64_t seed : {3, 4, 5}) {
    const Dataset b = gen_blobs(spec, seed);
    const auto theta = p3a::diffnet::train_sgd(lin, b.samples, {20, 0.05, seed});
    CHECK(p3a::diffnet::accuracy(lin, theta, b.samples) >= 0.99);
  }

  spec.classes = 40;
  spec.dim = 1;
  CHECK_THROWS_WITH_AS(gen_blobs(spec, 1), doctest::Contains("infeasible"), p3a::ValidationError);
  spec = BlobsSpec{};
  spec.separation = 0.0;
  CHECK_THROWS_AS(gen_blobs(spec, 1), p3a::ValidationError);
  spec = BlobsSpec{};
  spec.n = 1;
  CHECK_THROWS_AS(gen_blobs(spec, 1), p3a::ValidationError);
}

TEST_CASE("grid shapes") {
  GridShapesSpec spec;
  spec.noise = 0.0;
  spec.jitter = 0;
  spec.classes = 5;
  spec.n = 23;
  const Dataset d = gen_grid_shapes(spec, 9);
  CHECK(d.grid == GridShape{16, 16, 1});
  std::map<std::size_t, int> counts;
  for (const auto& s : d.samples) {
    ++counts[s.y_true];
    CHECK(s.x.data() == grid_shape_template(s.y_true, 16));
  }
  for (const auto& [cls, n] : counts) CHECK((n == 4 || n == 5));

  // The five templates are distinct.
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a + 1; b < 5; ++b) CHECK(grid_shape_template(a, 16) != grid_shape_template(b, 16));

  spec = GridShapesSpec{};
  const Dataset noisy = gen_grid_shapes(spec, 9);
  for (const auto& s : noisy.samples)
    for (double v : s.x.values()) CHECK((v >= 0.0 && v <= 1.0));
  CHECK(bytes_equal(noisy, gen_grid_shapes(spec, 9)));

  spec.classes = 6;
  CHECK_THROWS_AS(gen_grid_shapes(spec, 1), p3a::ValidationError);
  spec = GridShapesSpec{};
  spec.side = 7;
  CHECK_THROWS_AS(gen_grid_shapes(spec, 1), p3a::ValidationError);
}

TEST_CASE("an MLP learns the grid shapes") {
  DatasetSpec spec;
  spec.kind = GridShapesSpec{};
  spec.seed = 21;
  const Dataset d = make_dataset(spec);
  const Split split = split_dataset(d, 0.5, 21);
  CHECK(split.train.samples.size() == 200);
  CHECK(split.test.samples.size() == 200);
  const auto arch = p3a::diffnet::ModelArch::mlp(256, {64}, 4, p3a::diffnet::Activation::kRelu);
  const auto theta = p3a::diffnet::train_sgd(arch, split.train.samples, {20, 0.05, 21});
  CHECK(p3a::diffnet::accuracy(arch, theta, split.test.samples) >= 0.95);
}

TEST_CASE("split is a seeded partition") {
  const Dataset d = gen_blobs(BlobsSpec{}, 4);
  const Split a = split_dataset(d, 0.25, 8);
  CHECK(a.train.samples.size() == 150);
  CHECK(a.test.samples.size() == 50);
  CHECK(bytes_equal(a.test, split_dataset(d, 0.25, 8).test));
  CHECK_THROWS_AS(split_dataset(d, 1.5, 8), p3a::ValidationError);
}

TEST_CASE("IDX loading") {
  const auto [img, lbl] = idx_bytes(2, 2, 3, {0, 255, 128, 1, 2, 3, 9, 8, 7, 6, 5, 255}, {1, 0});
  p3a::write_file_atomic(scratch("img.idx"), img);
  p3a::write_file_atomic(scratch("lbl.idx"), lbl);
  const Dataset d = load_idx(scratch("img.idx").string(), scratch("lbl.idx").string(), 10);
  REQUIRE(d.samples.size() == 2);
  CHECK(d.grid == GridShape{2, 3, 1});
  CHECK(d.samples[0].x[0] == 0.0);
  CHECK(d.samples[0].x[1] == 1.0);
  CHECK(d.samples[0].x[2] == 128.0 / 255.0);
  CHECK(d.samples[0].y_true == 1);
  CHECK(d.samples[1].x[5] == 1.0);
  CHECK(load_idx(scratch("img.idx").string(), scratch("lbl.idx").string(), 10, 1).samples.size() == 1);

  p3a::write_file_atomic(scratch("short.idx"), img.substr(0, img.size() - 4));
  CHECK_THROWS_WITH_AS(load_idx(scratch("short.idx").string(), scratch("lbl.idx").string(), 10),
                       doctest::Contains("byte offset 24"), p3a::ParseError);
  p3a::write_file_atomic(scratch("tiny.idx"), img.substr(0, 6));
  CHECK_THROWS_WITH_AS(load_idx(scratch("tiny.idx").string(), scratch("lbl.idx").string(), 10),
                       doctest::Contains("byte offset 6"), p3a::ParseError);

  std::string bad = img;
  bad[3] = 0x01;
  p3a::write_file_atomic(scratch("bad.idx"), bad);
  CHECK_THROWS_WITH_AS(load_idx(scratch("bad.idx").string(), scratch("lbl.idx").string(), 10),
                       doctest::Contains("magic"), p3a::ParseError);
  CHECK_THROWS_WITH_AS(load_idx(scratch("img.idx").string(), scratch("lbl.idx").string(), 1),
                       doctest::Contains("byte offset 8"), p3a::ParseError);
}

TEST_CASE("CSV loading") {
  p3a::write_file_atomic(scratch("ok.csv"), "0, 0.1, 0.2\n2,1,0\n\n1,0.5,0.25\n");
  const Dataset d = load_csv(scratch("ok.csv").string());
  CHECK(d.samples.size() == 3);
  CHECK(d.num_classes == 3);
  CHECK(d.samples[1].x == p3a::numerics::Tensor::vector({1, 0}));
  CHECK(d.grid == GridShape{1, 2, 1});

  p3a::write_file_atomic(scratch("range.csv"), "0,0.1,0.2\n1,1.5,0\n");
  CHECK_THROWS_WITH_AS(load_csv(scratch("range.csv").string()), doctest::Contains("byte offset 12"),
                       p3a::ParseError);
  p3a::write_file_atomic(scratch("ragged.csv"), "0,0.1,0.2\n1,0.5\n");
  CHECK_THROWS_AS(load_csv(scratch("ragged.csv").string()), p3a::ParseError);
  CHECK_THROWS_AS(load_csv(scratch("ok.csv").string(), 2), p3a::ParseError);
  CHECK_THROWS_WITH_AS(load_csv(scratch("missing.csv").string()), doctest::Contains("missing.csv"),
                       p3a::ValidationError);
}
