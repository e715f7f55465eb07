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
#include <string>
#include <vector>

#include "p3a/harness/experiment.hpp"

namespace p3a::harness {

// Columns: attack,step,mean_ce,delta_ce,mean_kl,delta_kl,asr,delta_asr,
// mean_gain,selected_method_mode. Baseline-only reports drop the delta and
// P3A columns: attack,step,mean_ce,mean_kl,asr.
std::string report_csv(const Report& report);
std::string report_json(const Report& report);
// One row per (attack, sample) with final-step outcomes of both runs.
std::string samples_csv(const Report& report);

// report.csv, report.json and (when requested) samples.csv under out_dir.
void write_report(const Report& report, const std::filesystem::path& out_dir);

// Reads report.csv files and renders their rows side by side.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv_table(const std::filesystem::path& path);
std::string comparison_table(const std::vector<std::filesystem::path>& reports, bool final_only);

// Git blob hash ("blob <len>\0" + content, SHA-1, hex).
std::string git_blob_hash(const std::string& content);

}  // namespace p3a::harness
