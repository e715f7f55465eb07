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

// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
// Exit status is 0 once every criterion has been evaluated, whatever the
// verdicts; pass --strict to exit 1 when any criterion fails. An exception
// while evaluating exits 2.

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "p3a/attack/run.hpp"
#include "p3a/core/dfd.hpp"
#include "p3a/core/p3a.hpp"
#include "p3a/diffnet/backprop.hpp"
#include "p3a/harness/experiment.hpp"
#include "p3a/harness/metrics.hpp"
#include "p3a/harness/report.hpp"
#include "p3a/numerics/ops.hpp"
#include "support.hpp"

namespace t = p3a::testing;
namespace h = p3a::harness;
using p3a::attack::AttackConfig;
using p3a::attack::Strategy;
using p3a::core::DirectionPolicy;
using p3a::core::P3AConfig;
using p3a::core::UpdateMethod;
using p3a::diffnet::Activation;
using p3a::diffnet::LabeledSample;
using p3a::diffnet::Model;
using p3a::numerics::Tensor;

namespace {

// Pinned tolerances and sizes.
constexpr int kGradModels = 100;
constexpr double kFdStep = 1e-5;
constexpr double kFdRel = 1e-6;
constexpr double kFdAbs = 1e-8;
constexpr double kForwardSlopeMin = 0.9;
constexpr double kCentralSlopeMin = 1.8;
constexpr int kClairautTrials = 50;
constexpr double kClairautEps = 1e-4;
constexpr double kClairautRel = 1e-4;
constexpr int kSignTrials = 500;
constexpr double kSignAlpha = 1e-4;
constexpr double kSignBeta = 1e-3;
constexpr double kSignAgreementMin = 0.90;
constexpr int kReductionSamples = 20;
constexpr double kSignificance = 0.05;
constexpr int kSignificantAttacksMin = 5;
constexpr int kAsrNonNegativeMin = 4;
constexpr double kAdaptiveSlack = 0.10;
constexpr double kDistinctMin = 1e-9;

struct Verdict {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details = {};
};

// Totals over every experiment the suite runs.
struct CampaignLedger {
  std::size_t adaptive_traces = 0;
  std::size_t adaptive_negative = 0;
  std::size_t ball = 0;
  std::size_t range = 0;
  std::size_t steps_checked = 0;

  void add(const h::Report& r, bool adaptive) {
    for (const auto& a : r.attacks) {
      ball += a.ball_violations;
      range += a.range_violations;
      steps_checked += a.samples.size() * a.config.iterations * (r.has_p3a ? 2 : 1);
      if (adaptive) {
        adaptive_traces += a.dsp_traces;
        adaptive_negative += a.negative_gain_traces;
      }
    }
  }
};

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = std::log(xs[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Model smooth_model(std::mt19937_64& rng, std::size_t max_dim) {
  Model m;
  do {
    m = t::random_model(rng, 3, max_dim, Activation::kSoftplus);
  } while (m.arch.layers().size() == 1);
  return m;
}

// ---------------------------------------------------------------------------

Verdict gradient_oracle() {
  std::mt19937_64 rng(101);
  double worst = 0.0;  // largest error / allowed ratio
  std::size_t components = 0, bad = 0;
  for (int i = 0; i < kGradModels; ++i) {
    const Model m = t::random_model(rng, 3, 16, Activation::kRelu);
    const Tensor x = t::random_unit_input(rng, m.arch.input_dim());
    const std::size_t y = rng() % m.arch.num_classes();
    const auto d = p3a::diffnet::backward_dual(m, {x, y});
    const auto gx = t::fd_grad_x(m.arch, m.theta.data(), x.data(), y, kFdStep);
    const auto gt = t::fd_grad_theta(m.arch, m.theta.data(), x.data(), y, kFdStep);
    const auto check = [&](double got, double want) {
      const double allowed = std::max(kFdRel * std::abs(want), kFdAbs);
      const double err = std::abs(got - want);
      worst = std::max(worst, err / allowed);
      ++components;
      bad += err > allowed;
    };
    for (std::size_t k = 0; k < gx.size(); ++k) check(d.g_x[k], gx[k]);
    for (std::size_t k = 0; k < gt.size(); ++k) check(d.g_theta[k], gt[k]);
  }
  return {bad == 0, fmt::format("gradient oracle: {} models, {} components, {} outside tolerance, worst err/tol {:.3g}",
                                kGradModels, components, bad, worst)};
}

Verdict dfd_order() {
  // f(v, u) = sum_i v_i u_i^3, so df/dv = u^3 and the exact contraction is 3 u^2 du.
  const Tensor u = Tensor::vector({1.3, -0.4, 0.8});
  const Tensor du = Tensor::vector({0.7, 1.1, -0.5});
  const p3a::core::GradFn grad = [](const Tensor& w) {
    Tensor g = w;
    for (double& e : g.values()) e = e * e * e;
    return g;
  };
  std::vector<double> eps, fwd, ctr;
  for (double e = 1e-1; e >= 0.99e-4; e /= std::sqrt(10.0)) {
    const Tensor f = p3a::core::dfd_forward(grad, u, du, e);
    const Tensor c = p3a::core::dfd_central(grad, u, du, e);
    double ef = 0, ec = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double exact = 3.0 * u[i] * u[i] * du[i];
      ef = std::max(ef, std::abs(f[i] - exact));
      ec = std::max(ec, std::abs(c[i] - exact));
    }
    eps.push_back(e);
    fwd.push_back(ef);
    ctr.push_back(ec);
  }
  const double sf = loglog_slope(eps, fwd), sc = loglog_slope(eps, ctr);
  return {sf >= kForwardSlopeMin && sc >= kCentralSlopeMin,
          fmt::format("finite-difference order: forward slope {:.3f} (min {}), central slope {:.3f} (min {}) over {} steps",
                      sf, kForwardSlopeMin, sc, kCentralSlopeMin, eps.size())};
}

Verdict clairaut() {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < kClairautTrials; ++i) {
    const Model m = smooth_model(rng, 10);
    const Tensor x = t::random_unit_input(rng, m.arch.input_dim());
    const std::size_t y = rng() % m.arch.num_classes();
    const Tensor dx = t::random_normal(rng, x.size());
    const Tensor dth = t::random_normal(rng, m.theta.size());
    // Move x, difference the parameter gradient, contract with dth.
    const p3a::core::GradFn gtheta_of_x = [&](const Tensor& xx) {
      return p3a::diffnet::backward_dual(m.arch, m.theta, {xx, y}).g_theta;
    };
    // Move theta, difference the input gradient, contract with dx.
    const p3a::core::GradFn gx_of_theta = [&](const Tensor& th) {
      return p3a::diffnet::backward_dual(m.arch, th, {x, y}).g_x;
    };
    const double a = p3a::numerics::dot(p3a::core::dfd_central(gtheta_of_x, x, dx, kClairautEps), dth);
    const double b = p3a::numerics::dot(p3a::core::dfd_central(gx_of_theta, m.theta, dth, kClairautEps), dx);
    const double rel = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
    worst = std::max(worst, rel);
    bad += rel > kClairautRel;
  }
  return {bad == 0, fmt::format("mixed-derivative symmetry: {} trials, {} above {} relative, worst {:.3g}",
                                kClairautTrials, bad, kClairautRel, worst)};
}

Verdict sign_agreement() {
  std::mt19937_64 rng(404);
  struct Trial {
    double gain, change;
  };
  std::vector<Trial> trials;
  for (int i = 0; i < kSignTrials; ++i) {
    const Model m = smooth_model(rng, 10);
    const LabeledSample s{t::random_unit_input(rng, m.arch.input_dim()), rng() % m.arch.num_classes()};
    const auto base = p3a::diffnet::backward_dual(m, s);
    P3AConfig cfg;
    cfg.methods = {p3a::core::kAllMethods[rng() % 4]};
    cfg.directions = rng() % 2 ? DirectionPolicy::kPlus : DirectionPolicy::kMinus;
    cfg.alpha_lr = kSignAlpha;
    cfg.beta = kSignBeta;
    const auto cand = p3a::core::build_candidates(m, s, base, cfg).front();
    std::vector<double> xp = s.x.data(), xb = s.x.data();
    for (std::size_t k = 0; k < xp.size(); ++k) {
      xp[k] += kSignBeta * cand.g_prime[k];
      xb[k] += kSignBeta * base.g_x[k];
    }
    trials.push_back({cand.gain, t::ref_loss(m.arch, m.theta.data(), xp, s.y_true) -
                                     t::ref_loss(m.arch, m.theta.data(), xb, s.y_true)});
  }
  std::vector<double> mags;
  for (const auto& tr : trials) mags.push_back(std::abs(tr.gain));
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  const double median = mags[mags.size() / 2];
  int counted = 0, agree = 0;
  for (const auto& tr : trials) {
    if (std::abs(tr.gain) <= median) continue;
    ++counted;
    agree += (tr.gain > 0) == (tr.change > 0);
  }
  const double rate = counted ? static_cast<double>(agree) / counted : 0.0;
  return {counted > 0 && rate >= kSignAgreementMin,
          fmt::format("gain sign vs literal loss change: {}/{} agree above median |gain| ({:.1f}%, min {:.0f}%)", agree,
                      counted, 100 * rate, 100 * kSignAgreementMin)};
}

bool same_trace(const p3a::attack::AttackTrace& a, const p3a::attack::AttackTrace& b) {
  if (a.clean_loss != b.clean_loss || a.clean_predicted != b.clean_predicted || a.steps.size() != b.steps.size())
    return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const auto &p = a.steps[i], &q = b.steps[i];
    if (!(p.x_adv == q.x_adv) || p.ce_loss != q.ce_loss || p.kl != q.kl || p.predicted != q.predicted ||
        p.linf != q.linf)
      return false;
  }
  return true;
}

Verdict reductions() {
  const p3a::numerics::GridShape grid{6, 6, 1};
  std::mt19937_64 rng(606);
  Model m;
  m.arch = p3a::diffnet::ModelArch::mlp(grid.flat_size(), {16}, 4, Activation::kRelu);
  m.theta = p3a::diffnet::init_params(m.arch, 61);
  AttackConfig bim;
  bim.seed = 6060;
  struct Reduction {
    const char* name;
    std::function<void(AttackConfig&)> set;
  };
  const std::vector<Reduction> cases = {
      {"DI(p=0)", [](AttackConfig& c) { c.strategy = Strategy::kDi, c.di_prob = 0.0; }},
      {"TI(delta)", [](AttackConfig& c) { c.strategy = Strategy::kTi, c.ti_sigma = 0.0; }},
      {"MI(mu=0)", [](AttackConfig& c) { c.strategy = Strategy::kMi, c.mu = 0.0; }},
      {"SINI(m=1,mu=0)", [](AttackConfig& c) { c.strategy = Strategy::kSini, c.sini_copies = 1, c.mu = 0.0; }},
      {"PGD(no init)", [](AttackConfig& c) { c.strategy = Strategy::kPgd, c.pgd_init_scale = 0.0; }},
  };
  std::map<std::string, int> equal;
  for (int i = 0; i < kReductionSamples; ++i) {
    const LabeledSample s{t::random_unit_input(rng, grid.flat_size()), rng() % 4};
    bim.seed = rng();
    const auto ref = p3a::attack::run_attack(m, s, bim, p3a::attack::vanilla_provider(m), grid);
    for (const auto& rc : cases) {
      AttackConfig c = bim;
      rc.set(c);
      equal[rc.name] += same_trace(ref, p3a::attack::run_attack(m, s, c, p3a::attack::vanilla_provider(m), grid));
    }
  }
  bool all = true;
  std::string parts;
  for (const auto& rc : cases) {
    all = all && equal[rc.name] == kReductionSamples;
    parts += fmt::format(" {} {}/{}", rc.name, equal[rc.name], kReductionSamples);
  }
  return {all, "reductions to BIM, full-trace equality:" + parts};
}

// ---------------------------------------------------------------------------
// Desk-scale victims.

struct Victim {
  std::string name;
  h::ExperimentConfig cfg;
  h::PreparedVictim prepared;
};

h::ExperimentConfig victim_config(const std::string& name, std::vector<std::size_t> hidden, h::DatasetSpec ds) {
  h::ExperimentConfig cfg;
  cfg.name = name;
  cfg.victim.arch = h::ArchSpec{std::move(hidden), Activation::kRelu};
  cfg.victim.train = {10, 0.05, 1};
  cfg.dataset = std::move(ds);
  for (Strategy s : {Strategy::kBim, Strategy::kPgd, Strategy::kMi, Strategy::kDi, Strategy::kTi, Strategy::kSini}) {
    AttackConfig a;  // eps 0.1, step 0.02, 10 iterations
    a.strategy = s;
    cfg.attacks.push_back(a);
  }
  cfg.p3a = P3AConfig{};
  cfg.samples = 200;
  cfg.seed = 7;
  return cfg;
}

std::vector<Victim> make_victims() {
  h::DatasetSpec blobs;
  blobs.kind = h::BlobsSpec{4, 16, 3.0, 600};
  blobs.seed = 3;
  h::DatasetSpec grid;
  grid.kind = h::GridShapesSpec{5, 16, 600, 0.7, 1};
  grid.seed = 3;
  h::DatasetSpec deep = grid;
  deep.seed = 4;
  std::vector<Victim> out;
  out.push_back({"blobs-MLP", victim_config("blobs-mlp", {32}, blobs), {}});
  out.push_back({"grid-MLP", victim_config("grid-mlp", {32}, grid), {}});
  out.push_back({"deep-grid-MLP", victim_config("deep-grid-mlp", {64, 32}, deep), {}});
  for (auto& v : out) v.prepared = h::prepare_victim(v.cfg);
  return out;
}

double mean_final_delta_ce(const h::Report& r) {
  double s = 0.0;
  for (const auto& a : r.attacks) s += a.p3a.back().delta_ce;
  return s / static_cast<double>(r.attacks.size());
}

Verdict direction(const std::vector<Victim>& victims, const std::vector<h::Report>& reports) {
  Verdict v;
  int significant = 0, asr_ok = 0;
  bool means_ok = true;
  const std::size_t n_attacks = reports.front().attacks.size();
  for (std::size_t k = 0; k < n_attacks; ++k) {
    std::vector<double> pooled;
    double asr_sum = 0.0;
    std::string per_victim;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& a = reports[i].attacks[k];
      const auto d = a.final_delta_ce();
      pooled.insert(pooled.end(), d.begin(), d.end());
      asr_sum += a.p3a.back().delta_asr * static_cast<double>(d.size());
      per_victim += fmt::format(" {} {:+.3g}", victims[i].name, h::mean(d));
    }
    const double m = h::mean(pooled);
    const double p = h::sign_test_p_value(pooled);
    const double dasr = asr_sum / static_cast<double>(pooled.size());
    const auto c = h::sign_counts(pooled);
    means_ok = means_ok && m >= 0.0;
    significant += p < kSignificance;
    asr_ok += dasr >= 0.0;
    v.details.push_back(fmt::format("{:<5} mean dCE {:+.4g} (+{} -{} ={}) p {:.3g} dASR {:+.4f} |{}",
                                    p3a::attack::to_string(reports.front().attacks[k].config.strategy), m, c.positive,
                                    c.negative, c.zero, p, dasr, per_victim));
  }
  v.pass = means_ok && significant >= kSignificantAttacksMin && asr_ok >= kAsrNonNegativeMin;
  v.summary = fmt::format(
      "desk-scale direction: mean final dCE >= 0 on all attacks: {}; significant {}/{} (min {}); dASR >= 0 {}/{} (min {})",
      means_ok ? "yes" : "no", significant, n_attacks, kSignificantAttacksMin, asr_ok, n_attacks, kAsrNonNegativeMin);
  for (std::size_t i = 0; i < victims.size(); ++i) {
    v.details.push_back(fmt::format("{}: test accuracy {:.3f}, baseline final BIM ASR {:.3f}", victims[i].name,
                                    victims[i].prepared.test_accuracy, reports[i].attacks[0].baseline.back().asr));
  }
  return v;
}

Verdict ablation(const std::vector<Victim>& victims, const std::vector<h::Report>& adaptive, CampaignLedger& ledger) {
  Verdict v;
  bool distinct_all = true, dominance_all = true;
  for (std::size_t i = 0; i < victims.size(); ++i) {
    std::vector<std::vector<double>> series;
    std::vector<double> finals;
    std::string line = victims[i].name + ":";
    for (UpdateMethod m : p3a::core::kAllMethods) {
      h::ExperimentConfig cfg = victims[i].cfg;
      cfg.p3a->fixed = p3a::core::FixedChoice{m, +1};
      const h::Report r = h::run_experiment(cfg, victims[i].prepared);
      ledger.add(r, false);
      std::vector<double> s;
      for (const auto& a : r.attacks) s.push_back(a.p3a.back().delta_ce);
      series.push_back(s);
      finals.push_back(mean_final_delta_ce(r));
      line += fmt::format(" {}+ {:+.4g}", p3a::core::to_string(m), finals.back());
    }
    for (std::size_t a = 0; a < series.size(); ++a) {
      for (std::size_t b = a + 1; b < series.size(); ++b) {
        double diff = 0.0;
        for (std::size_t k = 0; k < series[a].size(); ++k) diff = std::max(diff, std::abs(series[a][k] - series[b][k]));
        distinct_all = distinct_all && diff > kDistinctMin;
      }
    }
    const double best = *std::max_element(finals.begin(), finals.end());
    const double ad = mean_final_delta_ce(adaptive[i]);
    const bool dom = ad >= best - kAdaptiveSlack * std::abs(best);
    dominance_all = dominance_all && dom;
    v.details.push_back(line + fmt::format(" | adaptive {:+.4g} vs floor {:+.4g} {}", ad,
                                           best - kAdaptiveSlack * std::abs(best), dom ? "ok" : "BELOW"));
  }
  v.pass = distinct_all && dominance_all;
  v.summary = fmt::format("update-method ablation: fixed series distinct: {}; adaptive within {:.0f}% of best fixed on every victim: {}",
                          distinct_all ? "yes" : "no", 100 * kAdaptiveSlack, dominance_all ? "yes" : "no");
  return v;
}

Verdict selection_floor(const std::vector<Victim>& victims, CampaignLedger& ledger) {
  h::ExperimentConfig cfg = victims[1].cfg;
  cfg.samples = 20;
  cfg.p3a->alpha_lr = 1e-300;
  const h::Report r = h::run_experiment(cfg, victims[1].prepared);
  ledger.add(r, true);
  std::size_t identity = 0, traces = 0;
  for (const auto& a : r.attacks) {
    identity += a.identity_selections;
    traces += a.dsp_traces;
  }
  const bool fallback = traces > 0 && identity == traces;
  return {ledger.adaptive_negative == 0 && ledger.adaptive_traces > 0 && fallback,
          fmt::format("selection floor: {} negative of {} adaptive traces; tiny alpha picked identity in {}/{} traces",
                      ledger.adaptive_negative, ledger.adaptive_traces, identity, traces)};
}

Verdict invariants(const CampaignLedger& ledger) {
  return {ledger.ball == 0 && ledger.range == 0 && ledger.steps_checked > 0,
          fmt::format("ball and box: {} ball and {} range violations over {} attack steps", ledger.ball, ledger.range,
                      ledger.steps_checked)};
}

Verdict reproducibility(const std::vector<Victim>& victims, const std::vector<h::Report>& reports) {
  // Fresh preparation (retraining included) and a different worker count.
  h::ExperimentConfig cfg = victims[0].cfg;
  const std::string again = h::report_csv(h::run_experiment(cfg));
  cfg.jobs = 3;
  const std::string threaded = h::report_csv(h::run_experiment(cfg, victims[0].prepared));
  const std::string first = h::report_csv(reports[0]);
  return {again == first && threaded == first,
          fmt::format("reproducibility: rerun {}, 3 workers {} ({} bytes)", again == first ? "identical" : "DIFFERS",
                      threaded == first ? "identical" : "DIFFERS", first.size())};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  std::map<int, Verdict> verdicts;
  const auto timed = [&](int id, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v = fn();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.summary += fmt::format(" ({:.1f}s)", secs);
    verdicts[id] = std::move(v);
  };
  try {
    timed(1, gradient_oracle);
    timed(2, dfd_order);
    timed(3, clairaut);
    timed(4, sign_agreement);
    timed(6, reductions);

    CampaignLedger ledger;
    std::vector<Victim> victims;
    std::vector<h::Report> reports;
    timed(8, [&] {
      victims = make_victims();
      for (const auto& v : victims) {
        reports.push_back(h::run_experiment(v.cfg, v.prepared));
        ledger.add(reports.back(), true);
      }
      return direction(victims, reports);
    });
    timed(9, [&] { return ablation(victims, reports, ledger); });
    timed(5, [&] { return selection_floor(victims, ledger); });
    timed(7, [&] { return invariants(ledger); });
    timed(10, [&] { return reproducibility(victims, reports); });
  } catch (const std::exception& e) {
    fmt::print("ERROR acceptance aborted: {}\n", e.what());
    return 2;
  }
  int passed = 0;
  for (const auto& [id, v] : verdicts) {
    fmt::print("{} [{}] {}\n", v.pass ? "PASS" : "FAIL", id, v.summary);
    for (const auto& d : v.details) fmt::print("       {}\n", d);
    passed += v.pass;
  }
  fmt::print("{}/{} criteria pass\n", passed, verdicts.size());
  return strict && passed != static_cast<int>(verdicts.size()) ? 1 : 0;
}
