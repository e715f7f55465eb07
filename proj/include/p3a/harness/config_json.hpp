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
#include <json.hpp>

#include "p3a/attack/config.hpp"
#include "p3a/core/p3a.hpp"
#include "p3a/harness/datasets.hpp"
#include "p3a/harness/experiment.hpp"

namespace p3a::harness {

// JSON <-> config structs. Missing keys keep their defaults; unknown keys
// are rejected so typos surface as validation errors. Relative paths are
// resolved against `base_dir`.
attack::AttackConfig attack_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const attack::AttackConfig& c);

core::P3AConfig p3a_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const core::P3AConfig& c);

DatasetSpec dataset_spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json to_json(const DatasetSpec& d);

ArchSpec arch_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ArchSpec& a);

diffnet::TrainOptions train_options_from_json(const nlohmann::json& j);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir);
nlohmann::json to_json(const ExperimentConfig& c);

// Parses a file, mapping JSON syntax errors to ParseError.
nlohmann::json load_json_file(const std::filesystem::path& path);

}  // namespace p3a::harness
