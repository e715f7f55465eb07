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

// Command-line front end: train, attack, ablate, report.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "p3a/atomic_file.hpp"
#include "p3a/diffnet/model_io.hpp"
#include "p3a/diffnet/train.hpp"
#include "p3a/error.hpp"
#include "p3a/harness/config_json.hpp"
#include "p3a/harness/experiment.hpp"
#include "p3a/harness/report.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
namespace h = p3a::harness;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::optional<std::size_t> jobs;
};

// --seed beats P3A_SEED, which beats the config file.
std::optional<std::uint64_t> seed_override(const CommonFlags& flags) {
  if (flags.seed) return flags.seed;
  if (const char* env = std::getenv("P3A_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw p3a::ValidationError(std::string("P3A_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return std::nullopt;
}

h::ExperimentConfig load_experiment(const CommonFlags& flags, json* raw = nullptr) {
  const json j = h::load_json_file(flags.config);
  if (raw) *raw = j;
  h::ExperimentConfig cfg = h::experiment_config_from_json(j, fs::path(flags.config).parent_path());
  if (auto s = seed_override(flags)) cfg.seed = *s;
  if (flags.jobs) cfg.jobs = *flags.jobs;
  if (cfg.jobs == 0) throw p3a::ValidationError("--jobs must be at least 1");
  return cfg;
}

int cmd_train(const CommonFlags& flags) {
  const json j = h::load_json_file(flags.config);
  const fs::path base = fs::path(flags.config).parent_path();
  for (const auto& [key, _] : j.items()) {
    if (key != "arch" && key != "dataset" && key != "train" && key != "output" && key != "storage") {
      throw p3a::ValidationError("train config: unknown key '" + key + "'");
    }
  }
  if (!j.contains("dataset")) throw p3a::ValidationError("train config needs a 'dataset'");
  const h::DatasetSpec ds = h::dataset_spec_from_json(j["dataset"], base);
  const h::ArchSpec arch = j.contains("arch") ? h::arch_spec_from_json(j["arch"]) : h::ArchSpec{};
  p3a::diffnet::TrainOptions train =
      j.contains("train") ? h::train_options_from_json(j["train"]) : p3a::diffnet::TrainOptions{};
  if (auto s = seed_override(flags)) train.seed = *s;
  const std::string storage = j.value("storage", std::string("base64"));
  if (storage != "base64" && storage != "file") {
    throw p3a::ValidationError("train config: storage must be 'base64' or 'file'");
  }

  const h::Dataset data = h::make_dataset(ds);
  const h::Split split = h::split_dataset(data, ds.test_fraction, ds.seed);
  p3a::diffnet::ModelFile file;
  file.model.arch = p3a::diffnet::ModelArch::mlp(data.input_dim, arch.hidden, data.num_classes, arch.activation);
  file.model.seed = train.seed;
  file.model.theta = p3a::diffnet::train_sgd(file.model.arch, split.train.samples, train);
  file.grid = data.grid;

  fs::create_directories(flags.out_dir);
  const fs::path out = fs::path(flags.out_dir) / j.value("output", std::string("model.json"));
  p3a::diffnet::save_model(out, file,
                           storage == "file" ? p3a::diffnet::ParamStorage::kSiblingBinary
                                             : p3a::diffnet::ParamStorage::kEmbeddedBase64);
  fmt::print("wrote {} (train acc {:.4f}, test acc {:.4f})\n", out.string(),
             p3a::diffnet::accuracy(file.model.arch, file.model.theta, split.train.samples),
             p3a::diffnet::accuracy(file.model.arch, file.model.theta, split.test.samples));
  return 0;
}

void print_summary(const h::Report& report) {
  for (const auto& a : report.attacks) {
    const auto& rows = report.has_p3a ? a.p3a : a.baseline;
    const auto& last = rows.back();
    if (report.has_p3a) {
      fmt::print("{:<5} final mean_ce {:.6f} delta_ce {:+.6f} asr {:.3f} delta_asr {:+.3f}\n",
                 p3a::attack::to_string(a.config.strategy), last.mean_ce, last.delta_ce, last.asr,
                 last.delta_asr);
    } else {
      fmt::print("{:<5} final mean_ce {:.6f} asr {:.3f}\n", p3a::attack::to_string(a.config.strategy),
                 last.mean_ce, last.asr);
    }
  }
}

int cmd_attack(const CommonFlags& flags) {
  const h::ExperimentConfig cfg = load_experiment(flags);
  const h::Report report = h::run_experiment(cfg);
  h::write_report(report, flags.out_dir);
  print_summary(report);
  fmt::print("reports written to {}\n", flags.out_dir);
  return 0;
}

// A sweep point: a label for the output directory and the mutation it applies.
struct SweepPoint {
  std::string label;
  std::function<void(h::ExperimentConfig&)> apply;
};

std::string number_label(double v) { return fmt::format("{:g}", v); }

std::vector<SweepPoint> sweep_points(const json& sweep) {
  if (!sweep.is_object() || sweep.size() != 1) {
    throw p3a::ValidationError("'sweep' must be an object with exactly one of alpha_lr, step_size, method");
  }
  const auto& [key, values] = *sweep.items().begin();
  if (!values.is_array() || values.empty()) throw p3a::ValidationError("sweep values must be a non-empty array");
  std::vector<SweepPoint> points;
  for (const auto& v : values) {
    if (key == "alpha_lr") {
      const double a = v.get<double>();
      points.push_back({"alpha_lr_" + number_label(a), [a](h::ExperimentConfig& c) {
                          if (!c.p3a) c.p3a = p3a::core::P3AConfig{};
                          c.p3a->alpha_lr = a;
                        }});
    } else if (key == "step_size") {
      const double s = v.get<double>();
      points.push_back({"step_size_" + number_label(s), [s](h::ExperimentConfig& c) {
                          for (auto& a : c.attacks) a.step_size = s;
                        }});
    } else if (key == "method") {
      const std::string sel = v.get<std::string>();
      // Reuse the JSON parser so selection labels have one spelling.
      points.push_back({"method_" + sel, [sel](h::ExperimentConfig& c) {
                          json pj = c.p3a ? h::to_json(*c.p3a) : json::object();
                          pj["selection"] = sel;
                          c.p3a = h::p3a_config_from_json(pj);
                        }});
    } else {
      throw p3a::ValidationError("unknown sweep parameter '" + key + "'");
    }
  }
  return points;
}

int cmd_ablate(const CommonFlags& flags) {
  json raw;
  const h::ExperimentConfig base = load_experiment(flags, &raw);
  if (!raw.contains("sweep")) throw p3a::ValidationError("ablate config needs a 'sweep'");
  const auto points = sweep_points(raw["sweep"]);
  for (const auto& p : points) {
    h::ExperimentConfig probe = base;
    p.apply(probe);
    probe.validate();
  }
  const h::PreparedVictim victim = h::prepare_victim(base);
  std::string summary = "point,attack,step,mean_ce,delta_ce,mean_kl,delta_kl,asr,delta_asr,mean_gain\n";
  for (const auto& p : points) {
    h::ExperimentConfig cfg = base;
    p.apply(cfg);
    cfg.name = base.name + "/" + p.label;
    const h::Report report = h::run_experiment(cfg, victim);
    h::write_report(report, fs::path(flags.out_dir) / p.label);
    for (const auto& a : report.attacks) {
      for (const auto& r : a.p3a) {
        summary += fmt::format("{},{},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", p.label,
                               p3a::attack::to_string(a.config.strategy), r.step, r.mean_ce, r.delta_ce,
                               r.mean_kl, r.delta_kl, r.asr, r.delta_asr, r.mean_gain);
      }
    }
    fmt::print("{}\n", p.label);
    print_summary(report);
  }
  p3a::write_file_atomic(fs::path(flags.out_dir) / "ablation.csv", summary);
  return 0;
}

int cmd_report(const std::vector<std::string>& files, bool final_only, const CommonFlags& flags,
               bool out_dir_given) {
  std::vector<fs::path> paths(files.begin(), files.end());
  const std::string table = h::comparison_table(paths, final_only);
  std::cout << table;
  if (out_dir_given) {
    fs::create_directories(flags.out_dir);
    p3a::write_file_atomic(fs::path(flags.out_dir) / "comparison.txt", table);
  }
  return 0;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  auto* opt = cmd->add_option("--config", flags.config, "JSON configuration file");
  if (needs_config) opt->required();
  cmd->add_option("--seed", flags.seed, "Seed override (beats P3A_SEED and the config)");
  cmd->add_option("--out-dir", flags.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--jobs", flags.jobs, "Worker thread cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-adaptive adversarial attack engine"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* train = app.add_subcommand("train", "Train a victim model and write a model file");
  add_common(train, flags, true);
  auto* attack = app.add_subcommand("attack", "Run an experiment and write report.csv / report.json");
  add_common(attack, flags, true);
  auto* ablate = app.add_subcommand("ablate", "Sweep alpha_lr, step_size or the update method");
  add_common(ablate, flags, true);
  auto* report = app.add_subcommand("report", "Align report CSVs into one comparison table");
  add_common(report, flags, false);
  std::vector<std::string> files;
  bool final_only = false;
  report->add_option("files", files, "report.csv files")->required()->check(CLI::ExistingFile);
  report->add_flag("--final", final_only, "Only the last step of each attack");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*train) return cmd_train(flags);
    if (*attack) return cmd_attack(flags);
    if (*ablate) return cmd_ablate(flags);
    if (*report) return cmd_report(files, final_only, flags, report->count("--out-dir") > 0);
  } catch (const p3a::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad configuration value: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
