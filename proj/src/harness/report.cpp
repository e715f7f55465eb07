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

#include "p3a/harness/report.hpp"

#include <fmt/format.h>
#include <openssl/sha.h>

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "p3a/atomic_file.hpp"
#include "p3a/error.hpp"
#include "p3a/harness/metrics.hpp"

namespace p3a::harness {

using nlohmann::ordered_json;

namespace {

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string attack_name(const AttackReport& a) { return attack::to_string(a.config.strategy); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string report_csv(const Report& report) {
  std::string out;
  if (report.has_p3a) {
    out += "attack,step,mean_ce,delta_ce,mean_kl,delta_kl,asr,delta_asr,mean_gain,selected_method_mode\n";
    for (const auto& a : report.attacks) {
      for (const auto& r : a.p3a) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", attack_name(a), r.step, num(r.mean_ce),
                           num(r.delta_ce), num(r.mean_kl), num(r.delta_kl), num(r.asr),
                           num(r.delta_asr), num(r.mean_gain), r.selected_mode);
      }
    }
  } else {
    out += "attack,step,mean_ce,mean_kl,asr\n";
    for (const auto& a : report.attacks) {
      for (const auto& r : a.baseline) {
        out += fmt::format("{},{},{},{},{}\n", attack_name(a), r.step, num(r.mean_ce), num(r.mean_kl),
                           num(r.asr));
      }
    }
  }
  return out;
}

std::string samples_csv(const Report& report) {
  std::string out = report.has_p3a
                        ? "attack,sample,y_true,clean_predicted,clean_ce,base_ce,base_pred,p3a_ce,p3a_pred,delta_ce\n"
                        : "attack,sample,y_true,clean_predicted,clean_ce,base_ce,base_pred\n";
  for (const auto& a : report.attacks) {
    for (const auto& s : a.samples) {
      out += fmt::format("{},{},{},{},{},{},{}", attack_name(a), s.index, s.y_true, s.clean_predicted,
                         num(s.clean_ce), num(s.base_ce.back()), s.base_pred.back());
      if (report.has_p3a) {
        out += fmt::format(",{},{},{}", num(s.p3a_ce.back()), s.p3a_pred.back(),
                           num(s.p3a_ce.back() - s.base_ce.back()));
      }
      out += "\n";
    }
  }
  return out;
}

std::string report_json(const Report& report) {
  ordered_json j;
  j["name"] = report.name;
  j["seed"] = report.seed;
  j["samples"] = report.samples;
  j["model_hash"] = report.model_hash;
  j["train_accuracy"] = report.train_accuracy;
  j["test_accuracy"] = report.test_accuracy;
  j["p3a"] = report.has_p3a ? ordered_json(report.p3a_selection) : ordered_json(nullptr);
  j["config"] = ordered_json::parse(report.config_json);
  j["attacks"] = ordered_json::array();
  for (const auto& a : report.attacks) {
    ordered_json aj;
    aj["attack"] = attack_name(a);
    aj["ball_violations"] = a.ball_violations;
    aj["range_violations"] = a.range_violations;
    auto rows_json = [](const std::vector<StepRow>& rows, bool paired) {
      ordered_json arr = ordered_json::array();
      for (const auto& r : rows) {
        ordered_json rj{{"step", r.step}, {"mean_ce", r.mean_ce}, {"mean_kl", r.mean_kl}, {"asr", r.asr}};
        if (paired) {
          rj["delta_ce"] = r.delta_ce;
          rj["delta_kl"] = r.delta_kl;
          rj["delta_asr"] = r.delta_asr;
          rj["mean_gain"] = r.mean_gain;
          rj["selected_method_mode"] = r.selected_mode;
        }
        arr.push_back(std::move(rj));
      }
      return arr;
    };
    aj["baseline"] = rows_json(a.baseline, false);
    if (report.has_p3a) {
      aj["p3a"] = rows_json(a.p3a, true);
      aj["dsp_traces"] = a.dsp_traces;
      aj["negative_gain_traces"] = a.negative_gain_traces;
      aj["identity_selections"] = a.identity_selections;
      const auto deltas = a.final_delta_ce();
      const SignCounts sc = sign_counts(deltas);
      aj["final_delta_ce"] = {{"mean", mean(deltas)},
                              {"positive", sc.positive},
                              {"negative", sc.negative},
                              {"zero", sc.zero},
                              {"sign_test_p", sign_test_p_value(deltas)}};
    }
    j["attacks"].push_back(std::move(aj));
  }
  return j.dump(2) + "\n";
}

void write_report(const Report& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  write_file_atomic(out_dir / "report.csv", report_csv(report));
  write_file_atomic(out_dir / "report.json", report_json(report));
  const auto cfg = nlohmann::json::parse(report.config_json);
  if (cfg.value("per_sample_rows", false)) write_file_atomic(out_dir / "samples.csv", samples_csv(report));
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ValidationError(path.string() + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw ValidationError(path.string() + ": empty CSV");
  return table;
}

std::string comparison_table(const std::vector<std::filesystem::path>& reports, bool final_only) {
  if (reports.empty()) throw ValidationError("no report files given");
  // Union of columns in first-seen order, with a leading source column.
  std::vector<std::string> columns{"report"};
  std::vector<std::vector<std::string>> rows;
  std::vector<CsvTable> tables;
  for (const auto& p : reports) {
    tables.push_back(read_csv_table(p));
    for (const auto& h : tables.back().header) {
      if (std::find(columns.begin(), columns.end(), h) == columns.end()) columns.push_back(h);
    }
  }
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const CsvTable& table = tables[t];
    std::string source = reports[t].parent_path().filename().string();
    if (source.empty()) source = reports[t].filename().string();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      if (final_only && r + 1 < table.rows.size() && table.rows[r + 1][0] == table.rows[r][0]) continue;
      std::vector<std::string> row(columns.size());
      row[0] = source;
      for (std::size_t c = 0; c < table.header.size(); ++c) {
        const auto it = std::find(columns.begin(), columns.end(), table.header[c]);
        row[static_cast<std::size_t>(it - columns.begin())] = table.rows[r][c];
      }
      rows.push_back(std::move(row));
    }
  }
  std::vector<std::size_t> width(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    width[c] = columns[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto render = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) line += "  ";
      line += fmt::format("{:<{}}", cells[c], width[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
  };
  std::string out = render(columns);
  for (const auto& row : rows) out += render(row);
  return out;
}

std::string git_blob_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob += content;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  std::string hex;
  for (unsigned char b : digest) hex += fmt::format("{:02x}", b);
  return hex;
}

}  // namespace p3a::harness
