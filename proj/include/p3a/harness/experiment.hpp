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
#include <vector>

#include "p3a/attack/config.hpp"
#include "p3a/core/p3a.hpp"
#include "p3a/diffnet/model.hpp"
#include "p3a/diffnet/train.hpp"
#include "p3a/harness/datasets.hpp"

namespace p3a::harness {

struct ArchSpec {
  std::vector<std::size_t> hidden{64};
  diffnet::Activation activation = diffnet::Activation::kRelu;
};

// Either a saved model file or an architecture trained on the dataset's
// training split.
struct VictimSpec {
  std::string model_path;
  std::optional<ArchSpec> arch;
  diffnet::TrainOptions train;
};

struct ExperimentConfig {
  std::string name = "experiment";
  VictimSpec victim;
  DatasetSpec dataset;
  std::vector<attack::AttackConfig> attacks;
  std::optional<core::P3AConfig> p3a;  // absent: baseline only
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  bool asr_initially_correct = false;
  bool per_sample_rows = false;
  std::size_t jobs = 1;

  void validate() const;
};

struct PreparedVictim {
  diffnet::Model model;
  std::optional<numerics::GridShape> grid;
  Dataset train;
  Dataset test;
  std::string model_hash;  // git blob hash of the serialized model
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

// Loads or trains the victim and splits the dataset.
PreparedVictim prepare_victim(const ExperimentConfig& cfg);

// Independent stream seed for (experiment seed, attack index, sample index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t attack_index,
                          std::uint64_t sample_index);

struct StepRow {
  std::size_t step = 0;  // 1-based
  double mean_ce = 0.0;
  double mean_kl = 0.0;
  double asr = 0.0;
  // Filled for P3A rows only: paired P3A - baseline differences and the
  // supervision summary.
  double delta_ce = 0.0;
  double delta_kl = 0.0;
  double delta_asr = 0.0;
  double mean_gain = 0.0;
  std::string selected_mode;
};

struct SampleOutcome {
  std::size_t index = 0;  // into the test split
  std::size_t y_true = 0;
  std::size_t clean_predicted = 0;
  double clean_ce = 0.0;
  std::vector<double> base_ce, p3a_ce;
  std::vector<double> base_kl, p3a_kl;
  std::vector<std::size_t> base_pred, p3a_pred;
};

struct AttackReport {
  attack::AttackConfig config;
  std::vector<StepRow> baseline;
  std::vector<StepRow> p3a;  // empty without a P3A config
  std::vector<SampleOutcome> samples;

  std::size_t dsp_traces = 0;
  std::size_t negative_gain_traces = 0;
  std::size_t identity_selections = 0;
  std::size_t ball_violations = 0;   // ||x_adv - x0||_inf > eps + 1e-9
  std::size_t range_violations = 0;  // x_adv outside [0, 1]

  std::vector<double> final_delta_ce() const;
};

struct Report {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::string model_hash;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  bool has_p3a = false;
  std::string p3a_selection;
  std::string config_json;  // echo of the configuration
  std::vector<AttackReport> attacks;
};

Report run_experiment(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg, const PreparedVictim& victim);

}  // namespace p3a::harness
