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

#include "p3a/diffnet/model_io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <json.hpp>

#include "p3a/atomic_file.hpp"
#include "p3a/error.hpp"

namespace p3a::diffnet {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "p3a-model";
constexpr int kVersion = 1;

json layer_to_json(const Layer& l) {
  json j;
  j["kind"] = to_string(l.kind);
  if (l.kind == LayerKind::kDense) {
    j["in"] = l.in;
    j["out"] = l.out;
  } else {
    j["dim"] = l.in;
  }
  return j;
}

Layer layer_from_json(const json& j) {
  const LayerKind kind = layer_kind_from_string(j.at("kind").get<std::string>());
  if (kind == LayerKind::kDense) {
    return Layer::dense(j.at("in").get<std::size_t>(), j.at("out").get<std::size_t>());
  }
  const auto dim = j.at("dim").get<std::size_t>();
  return kind == LayerKind::kRelu ? Layer::relu(dim) : Layer::softplus(dim);
}

}  // namespace

std::string encode_params_le(const ParamVector& theta) {
  std::string bytes(theta.size() * 8, '\0');
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(theta[i]);
    for (int b = 0; b < 8; ++b) {
      bytes[i * 8 + static_cast<std::size_t>(b)] = static_cast<char>((bits >> (8 * b)) & 0xffu);
    }
  }
  return bytes;
}

ParamVector decode_params_le(const std::string& bytes, std::size_t expected_count) {
  if (bytes.size() != expected_count * 8) {
    throw ParseError("parameter payload holds " + std::to_string(bytes.size()) +
                         " bytes, expected " + std::to_string(expected_count * 8),
                     static_cast<long long>(std::min(bytes.size(), expected_count * 8)));
  }
  std::vector<double> values(expected_count);
  for (std::size_t i = 0; i < expected_count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i * 8 + static_cast<std::size_t>(b)]))
              << (8 * b);
    }
    values[i] = std::bit_cast<double>(bits);
  }
  return Tensor::vector(std::move(values));
}

std::string base64_encode(const std::string& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw ParseError("base64 payload length is not a multiple of 4", -1);
  std::string out(3 * (text.size() / 4), '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw ParseError("invalid base64 parameter payload", -1);
  // EVP_DecodeBlock keeps the zero bytes produced by '=' padding.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

namespace {

json manifest(const ModelFile& file) {
  const Model& m = file.model;
  check_params(m.arch, m.theta);
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["input_dim"] = m.arch.input_dim();
  j["num_classes"] = m.arch.num_classes();
  j["seed"] = m.seed;
  j["layers"] = json::array();
  for (const Layer& l : m.arch.layers()) j["layers"].push_back(layer_to_json(l));
  if (file.grid) {
    j["grid"] = {{"height", file.grid->height},
                 {"width", file.grid->width},
                 {"channels", file.grid->channels}};
  }
  j["param_count"] = m.arch.param_count();
  return j;
}

}  // namespace

std::string serialize_model(const ModelFile& file) {
  json j = manifest(file);
  j["params"] = {{"dtype", "f64le"},
                 {"encoding", "base64"},
                 {"data", base64_encode(encode_params_le(file.model.theta))}};
  return j.dump(2) + "\n";
}

void save_model(const std::filesystem::path& path, const ModelFile& file, ParamStorage storage) {
  if (storage == ParamStorage::kEmbeddedBase64) {
    write_file_atomic(path, serialize_model(file));
    return;
  }
  json j = manifest(file);
  std::filesystem::path bin = path;
  bin.replace_extension(".bin");
  write_file_atomic(bin, encode_params_le(file.model.theta));
  j["params"] = {{"dtype", "f64le"}, {"encoding", "file"}, {"file", bin.filename().string()}};
  write_file_atomic(path, j.dump(2) + "\n");
}

ModelFile load_model(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ValidationError("model file '" + path.string() + "' does not exist");
  }
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("model file '" + path.string() + "' is not valid JSON: " + e.what(),
                     static_cast<long long>(e.byte));
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw ValidationError("'" + path.string() + "' is not a p3a model file");
    }
    std::vector<Layer> layers;
    for (const auto& lj : j.at("layers")) layers.push_back(layer_from_json(lj));
    ModelFile file;
    file.model.arch = ModelArch(j.at("input_dim").get<std::size_t>(), std::move(layers));
    file.model.seed = j.value("seed", std::uint64_t{0});
    if (file.model.arch.num_classes() != j.at("num_classes").get<std::size_t>()) {
      throw ValidationError("num_classes disagrees with the final layer width");
    }
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      file.grid = numerics::GridShape{g.at("height").get<std::size_t>(),
                                      g.at("width").get<std::size_t>(),
                                      g.at("channels").get<std::size_t>()};
      if (file.grid->flat_size() != file.model.arch.input_dim()) {
        throw ValidationError("grid size does not match the model input dimension");
      }
    }
    const auto& p = j.at("params");
    if (p.at("dtype").get<std::string>() != "f64le") {
      throw ValidationError("unsupported parameter dtype");
    }
    const std::string encoding = p.at("encoding").get<std::string>();
    std::string bytes;
    if (encoding == "base64") {
      bytes = base64_decode(p.at("data").get<std::string>());
    } else if (encoding == "file") {
      const auto bin = path.parent_path() / p.at("file").get<std::string>();
      if (!std::filesystem::exists(bin)) {
        throw ValidationError("parameter file '" + bin.string() + "' does not exist");
      }
      bytes = read_file(bin);
    } else {
      throw ValidationError("unknown parameter encoding '" + encoding + "'");
    }
    file.model.theta = decode_params_le(bytes, file.model.arch.param_count());
    return file;
  } catch (const json::exception& e) {
    throw ValidationError("model file '" + path.string() + "': " + e.what());
  }
}

}  // namespace p3a::diffnet
