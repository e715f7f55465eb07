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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace p3a::numerics {

// Dense row-major array of doubles. Values are checked to be finite when a
// tensor is built from data; elementwise writes through values() are not
// re-checked, so producers of new values call require_finite() themselves.
class Tensor {
 public:
  Tensor() = default;

  // Zero-filled tensor of the given shape.
  explicit Tensor(std::vector<std::size_t> shape);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor vector(std::vector<double> data);
  static Tensor vector(std::initializer_list<double> data) {
    return vector(std::vector<double>(data));
  }
  static Tensor filled(std::vector<std::size_t> shape, double value);
  static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  // Throws NonFiniteError naming `context` if any value is NaN or infinite.
  void require_finite(const std::string& context) const;

  std::string shape_string() const;

  // Exact elementwise comparison (used for bit-exact reduction checks).
  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Height x width x channels layout of a flattened image, channel-last.
struct GridShape {
  std::size_t height = 1;
  std::size_t width = 1;
  std::size_t channels = 1;

  std::size_t flat_size() const { return height * width * channels; }
  std::size_t index(std::size_t row, std::size_t col, std::size_t ch) const {
    return (row * width + col) * channels + ch;
  }
  void validate() const;
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

}  // namespace p3a::numerics
