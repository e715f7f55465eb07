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

#include "p3a/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "p3a/attack/run.hpp"
#include "p3a/diffnet/model_io.hpp"
#include "p3a/diffnet/train.hpp"
#include "p3a/error.hpp"
#include "p3a/numerics/ops.hpp"
#include "p3a/harness/config_json.hpp"
#include "p3a/harness/metrics.hpp"
#include "p3a/harness/report.hpp"

namespace p3a::harness {

namespace {

constexpr double kBallSlack = 1e-9;

struct VariantRun {
  std::vector<double> ce, kl;
  std::vector<std::size_t> pred;
  std::vector<std::vector<attack::DspTrace>> traces;  // per step
  std::size_t ball_violations = 0;
  std::size_t range_violations = 0;
  double clean_loss = 0.0;
  std::size_t clean_pred = 0;
};

VariantRun summarize(attack::AttackTrace&& trace, const numerics::Tensor& x0, double eps) {
  VariantRun v;
  v.clean_loss = trace.clean_loss;
  v.clean_pred = trace.clean_predicted;
  for (auto& step : trace.steps) {
    v.ce.push_back(step.ce_loss);
    v.kl.push_back(step.kl);
    v.pred.push_back(step.predicted);
    double linf = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
      const double xi = step.x_adv[i];
      if (xi < numerics::kInputMin || xi > numerics::kInputMax) ++v.range_violations;
      linf = std::max(linf, std::abs(xi - x0[i]));
    }
    if (linf > eps + kBallSlack) ++v.ball_violations;
    v.traces.push_back(std::move(step.dsp_traces));
  }
  return v;
}

struct SampleResult {
  VariantRun base;
  VariantRun p3a;
  bool has_p3a = false;
};

// Mean over samples of each step's values, with ASR from the predictions.
std::vector<StepRow> aggregate(const std::vector<const VariantRun*>& runs,
                               const std::vector<LabeledSample>& samples,
                               std::size_t steps, bool initially_correct_only) {
  std::vector<StepRow> rows(steps);
  const double n = static_cast<double>(runs.size());
  for (std::size_t t = 0; t < steps; ++t) {
    StepRow& row = rows[t];
    row.step = t + 1;
    std::vector<PredictionRecord> records;
    for (std::size_t s = 0; s < runs.size(); ++s) {
      row.mean_ce += runs[s]->ce[t];
      row.mean_kl += runs[s]->kl[t];
      records.push_back({runs[s]->pred[t], samples[s].y_true, runs[s]->clean_pred});
    }
    row.mean_ce /= n;
    row.mean_kl /= n;
    row.asr = asr(records, initially_correct_only);
  }
  return rows;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (victim.model_path.empty() && !victim.arch) {
    throw ValidationError("victim needs either a model path or an arch to train");
  }
  if (attacks.empty()) throw ValidationError("experiment needs at least one attack");
  for (const auto& a : attacks) a.validate();
  if (p3a) p3a->validate();
  if (samples == 0) throw ValidationError("sample count must be positive");
  if (!victim.model_path.empty() && !std::filesystem::exists(victim.model_path)) {
    throw ValidationError("victim model file '" + victim.model_path + "' does not exist");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t attack_index,
                          std::uint64_t sample_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(attack_index), static_cast<std::uint32_t>(sample_index),
                    static_cast<std::uint32_t>(sample_index >> 32)};
  std::uint32_t words[2];
  seq.generate(std::begin(words), std::end(words));
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

PreparedVictim prepare_victim(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dataset data = make_dataset(cfg.dataset);
  Split split = split_dataset(data, cfg.dataset.test_fraction, cfg.dataset.seed);
  PreparedVictim v;
  v.grid = data.grid;
  diffnet::ModelFile file;
  if (!cfg.victim.model_path.empty()) {
    file = diffnet::load_model(cfg.victim.model_path);
    if (file.model.arch.input_dim() != data.input_dim) {
      throw ValidationError("model input dimension " + std::to_string(file.model.arch.input_dim()) +
                            " does not match the dataset's " + std::to_string(data.input_dim));
    }
    if (file.model.arch.num_classes() != data.num_classes) {
      throw ValidationError("model class count does not match the dataset");
    }
    if (file.grid) v.grid = file.grid;
  } else {
    const ArchSpec& a = *cfg.victim.arch;
    file.model.arch = diffnet::ModelArch::mlp(data.input_dim, a.hidden, data.num_classes, a.activation);
    file.model.seed = cfg.victim.train.seed;
    file.model.theta = diffnet::train_sgd(file.model.arch, split.train.samples, cfg.victim.train);
    file.grid = data.grid;
  }
  v.model = std::move(file.model);
  v.model_hash = git_blob_hash(diffnet::serialize_model({v.model, v.grid}));
  v.train_accuracy = diffnet::accuracy(v.model.arch, v.model.theta, split.train.samples);
  v.test_accuracy = diffnet::accuracy(v.model.arch, v.model.theta, split.test.samples);
  v.train = std::move(split.train);
  v.test = std::move(split.test);
  return v;
}

Report run_experiment(const ExperimentConfig& cfg) { return run_experiment(cfg, prepare_victim(cfg)); }

Report run_experiment(const ExperimentConfig& cfg, const PreparedVictim& victim) {
  cfg.validate();
  if (cfg.samples > victim.test.samples.size()) {
    throw ValidationError("requested " + std::to_string(cfg.samples) + " samples but the test split has " +
                          std::to_string(victim.test.samples.size()));
  }
  // Seeded choice of which test samples to attack.
  std::vector<std::size_t> picked(victim.test.samples.size());
  std::iota(picked.begin(), picked.end(), std::size_t{0});
  std::mt19937_64 pick_rng(cfg.seed);
  std::shuffle(picked.begin(), picked.end(), pick_rng);
  picked.resize(cfg.samples);
  std::vector<LabeledSample> samples;
  for (std::size_t idx : picked) samples.push_back(victim.test.samples[idx]);

  Report report;
  report.name = cfg.name;
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.model_hash = victim.model_hash;
  report.train_accuracy = victim.train_accuracy;
  report.test_accuracy = victim.test_accuracy;
  report.has_p3a = cfg.p3a.has_value();
  report.p3a_selection = cfg.p3a ? cfg.p3a->selection_label() : "";
  report.config_json = to_json(cfg).dump();

  const diffnet::Model& model = victim.model;
  for (std::size_t ai = 0; ai < cfg.attacks.size(); ++ai) {
    const attack::AttackConfig& base_cfg = cfg.attacks[ai];
    std::vector<SampleResult> results(samples.size());

    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;
    std::string error_where;
    auto worker = [&] {
      for (;;) {
        const std::size_t s = next.fetch_add(1);
        if (s >= samples.size()) return;
        std::string stage = "baseline";
        try {
          attack::AttackConfig acfg = base_cfg;
          acfg.seed = derive_seed(cfg.seed, ai, s);
          const LabeledSample& sample = samples[s];
          SampleResult r;
          r.base = summarize(
              attack::run_attack(model, sample, acfg, attack::vanilla_provider(model), victim.grid),
              sample.x, acfg.eps);
          if (cfg.p3a) {
            stage = "p3a";
            r.has_p3a = true;
            r.p3a = summarize(attack::run_attack(model, sample, acfg,
                                                 core::p3a_provider(model, *cfg.p3a), victim.grid),
                              sample.x, acfg.eps);
            if (r.p3a.clean_loss != r.base.clean_loss) {
              throw Error("paired runs diverged before the first supervision call");
            }
          }
          results[s] = std::move(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) {
            first_error = std::current_exception();
            error_where = "sample " + std::to_string(picked[s]) + ", attack " +
                          attack::to_string(base_cfg.strategy) + ", stage " + stage;
          }
          next.store(samples.size());
          return;
        }
      }
    };
    const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, samples.size());
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (first_error) {
      try {
        std::rethrow_exception(first_error);
      } catch (const ValidationError& e) {
        throw ValidationError(error_where + ": " + e.what());
      } catch (const std::exception& e) {
        throw Error(error_where + ": " + e.what());
      }
    }

    AttackReport ar;
    ar.config = base_cfg;
    const std::size_t steps = base_cfg.iterations;
    std::vector<const VariantRun*> base_runs, p3a_runs;
    for (const auto& r : results) {
      base_runs.push_back(&r.base);
      ar.ball_violations += r.base.ball_violations;
      ar.range_violations += r.base.range_violations;
      if (r.has_p3a) {
        p3a_runs.push_back(&r.p3a);
        ar.ball_violations += r.p3a.ball_violations;
        ar.range_violations += r.p3a.range_violations;
      }
    }
    ar.baseline = aggregate(base_runs, samples, steps, cfg.asr_initially_correct);
    if (cfg.p3a) {
      ar.p3a = aggregate(p3a_runs, samples, steps, cfg.asr_initially_correct);
      for (std::size_t t = 0; t < steps; ++t) {
        StepRow& row = ar.p3a[t];
        row.delta_ce = row.mean_ce - ar.baseline[t].mean_ce;
        row.delta_kl = row.mean_kl - ar.baseline[t].mean_kl;
        row.delta_asr = row.asr - ar.baseline[t].asr;
        double gain_sum = 0.0;
        std::size_t gain_count = 0;
        std::map<std::string, std::size_t> modes;
        for (const VariantRun* run : p3a_runs) {
          for (const auto& tr : run->traces[t]) {
            gain_sum += tr.selected_gain;
            ++gain_count;
            ++modes[tr.selected_label()];
            ++ar.dsp_traces;
            if (tr.selected_gain < 0.0) ++ar.negative_gain_traces;
            if (tr.selected_direction == 0) ++ar.identity_selections;
          }
        }
        row.mean_gain = gain_count ? gain_sum / static_cast<double>(gain_count) : 0.0;
        // Most frequent label; std::map order breaks ties alphabetically.
        std::size_t best = 0;
        for (const auto& [label, count] : modes) {
          if (count > best) {
            best = count;
            row.selected_mode = label;
          }
        }
      }
    }
    for (std::size_t s = 0; s < results.size(); ++s) {
      SampleOutcome o;
      o.index = picked[s];
      o.y_true = samples[s].y_true;
      o.clean_predicted = results[s].base.clean_pred;
      o.clean_ce = results[s].base.clean_loss;
      o.base_ce = results[s].base.ce;
      o.base_kl = results[s].base.kl;
      o.base_pred = results[s].base.pred;
      if (results[s].has_p3a) {
        o.p3a_ce = results[s].p3a.ce;
        o.p3a_kl = results[s].p3a.kl;
        o.p3a_pred = results[s].p3a.pred;
      }
      ar.samples.push_back(std::move(o));
    }
    report.attacks.push_back(std::move(ar));
  }
  report.config_json = to_json(cfg).dump();
  return report;
}

std::vector<double> AttackReport::final_delta_ce() const {
  std::vector<double> out;
  for (const auto& s : samples) {
    if (s.p3a_ce.empty()) continue;
    out.push_back(s.p3a_ce.back() - s.base_ce.back());
  }
  return out;
}

}  // namespace p3a::harness
