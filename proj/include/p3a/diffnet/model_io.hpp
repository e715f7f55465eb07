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

#include <filesystem>
#include <optional>
#include <string>

#include "p3a/diffnet/model.hpp"

namespace p3a::diffnet {

// A model file is a JSON manifest (architecture, seed, class count, optional
// input grid) plus the flat parameters as little-endian float64, either
// embedded as base64 or stored in a sibling binary file named by the
// manifest.
struct ModelFile {
  Model model;
  std::optional<numerics::GridShape> grid;
};

enum class ParamStorage { kEmbeddedBase64, kSiblingBinary };

void save_model(const std::filesystem::path& path, const ModelFile& file,
                ParamStorage storage = ParamStorage::kEmbeddedBase64);
ModelFile load_model(const std::filesystem::path& path);
// The exact bytes save_model writes with embedded parameters.
std::string serialize_model(const ModelFile& file);

// Little-endian float64 byte image of a parameter vector, and its inverse.
std::string encode_params_le(const ParamVector& theta);
ParamVector decode_params_le(const std::string& bytes, std::size_t expected_count);

std::string base64_encode(const std::string& bytes);
std::string base64_decode(const std::string& text);

}  // namespace p3a::diffnet
