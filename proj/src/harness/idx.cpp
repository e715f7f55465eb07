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

#include <charconv>
#include <cstdint>
#include <string>

#include "p3a/atomic_file.hpp"
#include "p3a/error.hpp"
#include "p3a/harness/datasets.hpp"

namespace p3a::harness {

using numerics::Tensor;

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

class ByteReader {
 public:
  ByteReader(const std::string& bytes, std::string name) : bytes_(bytes), name_(std::move(name)) {}

  std::uint32_t u32_be() {
    need(4, "32-bit header field");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(bytes_[pos_++]);
    return v;
  }

  const unsigned char* take(std::size_t n, const char* what) {
    need(n, what);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    pos_ += n;
    return p;
  }

  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw ParseError(name_ + ": truncated file, " + what + " needs " + std::to_string(n) +
                           " bytes but only " + std::to_string(bytes_.size() - pos_) + " remain",
                       static_cast<long long>(bytes_.size()));
    }
  }

  const std::string& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path,
                 std::size_t num_classes, std::size_t limit) {
  const std::string img_bytes = read_file(images_path);
  const std::string lbl_bytes = read_file(labels_path);
  ByteReader img(img_bytes, images_path);
  ByteReader lbl(lbl_bytes, labels_path);

  if (const auto magic = img.u32_be(); magic != kImageMagic) {
    throw ParseError(images_path + ": bad image magic " + std::to_string(magic) +
                         ", expected 0x00000803",
                     0);
  }
  if (const auto magic = lbl.u32_be(); magic != kLabelMagic) {
    throw ParseError(labels_path + ": bad label magic " + std::to_string(magic) +
                         ", expected 0x00000801",
                     0);
  }
  const std::size_t count = img.u32_be();
  const std::size_t rows = img.u32_be();
  const std::size_t cols = img.u32_be();
  const std::size_t label_count = lbl.u32_be();
  if (count != label_count) {
    throw ParseError("image count " + std::to_string(count) + " differs from label count " +
                         std::to_string(label_count),
                     4);
  }
  if (rows == 0 || cols == 0) throw ParseError(images_path + ": zero image extent", 8);

  const std::size_t n = limit ? std::min(limit, count) : count;
  Dataset out;
  out.num_classes = num_classes;
  out.input_dim = rows * cols;
  out.grid = GridShape{rows, cols, 1};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t label_offset = lbl.pos();
    const std::size_t label = *lbl.take(1, "label byte");
    if (label >= num_classes) {
      throw ParseError(labels_path + ": label " + std::to_string(label) + " out of range for " +
                           std::to_string(num_classes) + " classes",
                       static_cast<long long>(label_offset));
    }
    const unsigned char* px = img.take(rows * cols, "image payload");
    std::vector<double> x(rows * cols);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = static_cast<double>(px[k]) / 255.0;
    out.samples.push_back({Tensor::vector(std::move(x)), label});
  }
  return out;
}

Dataset load_csv(const std::string& path, std::size_t num_classes, std::optional<GridShape> grid) {
  const std::string text = read_file(path);
  Dataset out;
  std::size_t max_label = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t line_start = pos;
    pos = end + 1;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    std::vector<double> fields;
    std::size_t col_start = 0;
    std::size_t label = 0;
    bool first = true;
    while (col_start <= line.size()) {
      std::size_t comma = line.find(',', col_start);
      if (comma == std::string_view::npos) comma = line.size();
      std::string_view cell = line.substr(col_start, comma - col_start);
      while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
      while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
      const auto offset = static_cast<long long>(line_start + col_start);
      if (first) {
        const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), label);
        if (ec != std::errc() || p != cell.data() + cell.size()) {
          throw ParseError(path + ": bad label '" + std::string(cell) + "'", offset);
        }
        if (num_classes && label >= num_classes) {
          throw ParseError(path + ": label " + std::to_string(label) + " out of range", offset);
        }
        first = false;
      } else {
        double v = 0.0;
        const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || p != cell.data() + cell.size()) {
          throw ParseError(path + ": bad value '" + std::string(cell) + "'", offset);
        }
        if (!(v >= 0.0 && v <= 1.0)) {
          throw ParseError(path + ": value " + std::string(cell) + " outside [0, 1]", offset);
        }
        fields.push_back(v);
      }
      col_start = comma + 1;
    }
    if (fields.empty()) throw ParseError(path + ": row has no values", static_cast<long long>(line_start));
    if (out.input_dim == 0) out.input_dim = fields.size();
    if (fields.size() != out.input_dim) {
      throw ParseError(path + ": row has " + std::to_string(fields.size()) + " values, expected " +
                           std::to_string(out.input_dim),
                       static_cast<long long>(line_start));
    }
    max_label = std::max(max_label, label);
    out.samples.push_back({Tensor::vector(std::move(fields)), label});
  }
  if (out.samples.empty()) throw ValidationError(path + ": no rows");
  out.num_classes = num_classes ? num_classes : max_label + 1;
  if (out.num_classes < 2) throw ValidationError(path + ": need at least two classes");
  if (grid && grid->flat_size() != out.input_dim) {
    throw ValidationError(path + ": grid does not match the row width");
  }
  out.grid = grid ? grid : std::optional<GridShape>(GridShape{1, out.input_dim, 1});
  return out;
}

}  // namespace p3a::harness
