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

#include "p3a/harness/config_json.hpp"

#include <set>

#include "p3a/atomic_file.hpp"
#include "p3a/error.hpp"

namespace p3a::harness {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j[key].is_null()) return;
  try {
    out = j[key].get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return p;
  return (base / path).string();
}

std::optional<GridShape> grid_from_json(const json& j) {
  if (!j.contains("grid") || j["grid"].is_null()) return std::nullopt;
  const json& g = j["grid"];
  check_keys(g, {"height", "width", "channels"}, "grid");
  GridShape out;
  read(g, "height", out.height);
  read(g, "width", out.width);
  read(g, "channels", out.channels);
  out.validate();
  return out;
}

core::FixedChoice fixed_from_string(const std::string& s) {
  if (s.size() < 2 || (s.back() != '+' && s.back() != '-')) {
    throw ValidationError("fixed selection '" + s + "' must look like 'Defensive+' or 'Uniform-'");
  }
  return {core::update_method_from_string(s.substr(0, s.size() - 1)), s.back() == '+' ? 1 : -1};
}

std::string activation_name(diffnet::Activation a) {
  switch (a) {
    case diffnet::Activation::kRelu: return "relu";
    case diffnet::Activation::kSoftplus: return "softplus";
    case diffnet::Activation::kNone: return "none";
  }
  return "?";
}

}  // namespace

attack::AttackConfig attack_config_from_json(const json& j) {
  attack::AttackConfig c;
  if (j.is_string()) {
    c.strategy = attack::strategy_from_string(j.get<std::string>());
    return c;
  }
  check_keys(j,
             {"strategy", "eps", "step_size", "iterations", "mu", "di_prob", "di_min_scale",
              "ti_kernel_side", "ti_sigma", "sini_copies", "pgd_init_scale", "seed"},
             "attack config");
  std::string strategy = attack::to_string(c.strategy);
  read(j, "strategy", strategy);
  c.strategy = attack::strategy_from_string(strategy);
  read(j, "eps", c.eps);
  read(j, "step_size", c.step_size);
  read(j, "iterations", c.iterations);
  read(j, "mu", c.mu);
  read(j, "di_prob", c.di_prob);
  read(j, "di_min_scale", c.di_min_scale);
  read(j, "ti_kernel_side", c.ti_kernel_side);
  read(j, "ti_sigma", c.ti_sigma);
  read(j, "sini_copies", c.sini_copies);
  read(j, "pgd_init_scale", c.pgd_init_scale);
  read(j, "seed", c.seed);
  c.validate();
  return c;
}

json to_json(const attack::AttackConfig& c) {
  return {{"strategy", attack::to_string(c.strategy)},
          {"eps", c.eps},
          {"step_size", c.step_size},
          {"iterations", c.iterations},
          {"mu", c.mu},
          {"di_prob", c.di_prob},
          {"di_min_scale", c.di_min_scale},
          {"ti_kernel_side", c.ti_kernel_side},
          {"ti_sigma", c.ti_sigma},
          {"sini_copies", c.sini_copies},
          {"pgd_init_scale", c.pgd_init_scale},
          {"seed", c.seed}};
}

core::P3AConfig p3a_config_from_json(const json& j) {
  core::P3AConfig c;
  check_keys(j,
             {"alpha_lr", "methods", "directions", "uniform_s", "normalize_direction", "beta",
              "dfd_variant", "selection", "granularity", "max_candidates"},
             "p3a config");
  read(j, "alpha_lr", c.alpha_lr);
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j["methods"]) c.methods.push_back(core::update_method_from_string(m.get<std::string>()));
  }
  std::string dirs = "both";
  read(j, "directions", dirs);
  if (dirs == "both") c.directions = core::DirectionPolicy::kBoth;
  else if (dirs == "plus") c.directions = core::DirectionPolicy::kPlus;
  else if (dirs == "minus") c.directions = core::DirectionPolicy::kMinus;
  else throw ValidationError("directions must be plus, minus or both");
  read(j, "uniform_s", c.uniform_s);
  read(j, "normalize_direction", c.normalize_direction);
  read(j, "beta", c.beta);
  std::string variant = "forward";
  read(j, "dfd_variant", variant);
  if (variant == "forward") c.dfd_variant = core::DfdVariant::kForward;
  else if (variant == "central") c.dfd_variant = core::DfdVariant::kCentral;
  else throw ValidationError("dfd_variant must be forward or central");
  std::string selection = "adaptive";
  read(j, "selection", selection);
  if (selection != "adaptive") c.fixed = fixed_from_string(selection);
  std::string gran = "per_step";
  read(j, "granularity", gran);
  if (gran == "per_step") c.granularity = core::Granularity::kPerStep;
  else if (gran == "per_attack") c.granularity = core::Granularity::kPerAttack;
  else throw ValidationError("granularity must be per_step or per_attack");
  read(j, "max_candidates", c.max_candidates);
  c.validate();
  return c;
}

json to_json(const core::P3AConfig& c) {
  json methods = json::array();
  for (auto m : c.methods) methods.push_back(core::to_string(m));
  const char* dirs = c.directions == core::DirectionPolicy::kBoth
                         ? "both"
                         : (c.directions == core::DirectionPolicy::kPlus ? "plus" : "minus");
  std::string selection = "adaptive";
  if (c.fixed) selection = core::to_string(c.fixed->method) + (c.fixed->direction > 0 ? "+" : "-");
  return {{"alpha_lr", c.alpha_lr},
          {"methods", methods},
          {"directions", dirs},
          {"uniform_s", c.uniform_s},
          {"normalize_direction", c.normalize_direction},
          {"beta", c.beta},
          {"dfd_variant", c.dfd_variant == core::DfdVariant::kForward ? "forward" : "central"},
          {"selection", selection},
          {"granularity", c.granularity == core::Granularity::kPerStep ? "per_step" : "per_attack"},
          {"max_candidates", c.max_candidates}};
}

DatasetSpec dataset_spec_from_json(const json& j, const std::filesystem::path& base_dir) {
  DatasetSpec d;
  if (!j.is_object()) throw ValidationError("dataset must be a JSON object");
  std::string kind;
  read(j, "kind", kind);
  read(j, "seed", d.seed);
  read(j, "test_fraction", d.test_fraction);
  const std::set<std::string> common{"kind", "seed", "test_fraction"};
  auto with = [&](std::set<std::string> extra) {
    extra.insert(common.begin(), common.end());
    return extra;
  };
  if (kind == "blobs") {
    check_keys(j, with({"classes", "dim", "separation", "n"}), "blobs dataset");
    BlobsSpec b;
    read(j, "classes", b.classes);
    read(j, "dim", b.dim);
    read(j, "separation", b.separation);
    read(j, "n", b.n);
    d.kind = b;
  } else if (kind == "grid_shapes") {
    check_keys(j, with({"classes", "side", "n", "noise", "jitter"}), "grid_shapes dataset");
    GridShapesSpec g;
    read(j, "classes", g.classes);
    read(j, "side", g.side);
    read(j, "n", g.n);
    read(j, "noise", g.noise);
    read(j, "jitter", g.jitter);
    d.kind = g;
  } else if (kind == "idx") {
    check_keys(j, with({"images", "labels", "num_classes", "limit"}), "idx dataset");
    IdxSpec s;
    read(j, "images", s.images);
    read(j, "labels", s.labels);
    read(j, "num_classes", s.num_classes);
    read(j, "limit", s.limit);
    s.images = resolve(base_dir, s.images);
    s.labels = resolve(base_dir, s.labels);
    d.kind = s;
  } else if (kind == "csv") {
    check_keys(j, with({"path", "num_classes", "grid"}), "csv dataset");
    CsvSpec s;
    read(j, "path", s.path);
    read(j, "num_classes", s.num_classes);
    s.grid = grid_from_json(j);
    s.path = resolve(base_dir, s.path);
    d.kind = s;
  } else {
    throw ValidationError("dataset kind must be blobs, grid_shapes, idx or csv (got '" + kind + "')");
  }
  return d;
}

json to_json(const DatasetSpec& d) {
  json j = std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, BlobsSpec>) {
          return {{"kind", "blobs"}, {"classes", k.classes}, {"dim", k.dim},
                  {"separation", k.separation}, {"n", k.n}};
        } else if constexpr (std::is_same_v<T, GridShapesSpec>) {
          return {{"kind", "grid_shapes"}, {"classes", k.classes}, {"side", k.side},
                  {"n", k.n}, {"noise", k.noise}, {"jitter", k.jitter}};
        } else if constexpr (std::is_same_v<T, IdxSpec>) {
          return {{"kind", "idx"}, {"images", k.images}, {"labels", k.labels},
                  {"num_classes", k.num_classes}, {"limit", k.limit}};
        } else {
          json c = {{"kind", "csv"}, {"path", k.path}, {"num_classes", k.num_classes}};
          if (k.grid) c["grid"] = {{"height", k.grid->height}, {"width", k.grid->width},
                                   {"channels", k.grid->channels}};
          return c;
        }
      },
      d.kind);
  j["seed"] = d.seed;
  j["test_fraction"] = d.test_fraction;
  return j;
}

ArchSpec arch_spec_from_json(const json& j) {
  check_keys(j, {"hidden", "activation"}, "arch");
  ArchSpec a;
  read(j, "hidden", a.hidden);
  std::string act = "relu";
  read(j, "activation", act);
  if (act == "relu") a.activation = diffnet::Activation::kRelu;
  else if (act == "softplus") a.activation = diffnet::Activation::kSoftplus;
  else if (act == "none") a.activation = diffnet::Activation::kNone;
  else throw ValidationError("activation must be relu, softplus or none");
  return a;
}

json to_json(const ArchSpec& a) {
  return {{"hidden", a.hidden}, {"activation", activation_name(a.activation)}};
}

diffnet::TrainOptions train_options_from_json(const json& j) {
  check_keys(j, {"epochs", "lr", "seed"}, "train");
  diffnet::TrainOptions t;
  read(j, "epochs", t.epochs);
  read(j, "lr", t.lr);
  read(j, "seed", t.seed);
  return t;
}

ExperimentConfig experiment_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j,
             {"name", "victim", "dataset", "attacks", "attack_defaults", "p3a", "samples", "seed",
              "asr_initially_correct", "per_sample_rows", "jobs", "sweep"},
             "experiment config");
  ExperimentConfig c;
  read(j, "name", c.name);
  if (!j.contains("victim")) throw ValidationError("experiment config needs a 'victim'");
  const json& v = j["victim"];
  check_keys(v, {"model", "arch", "train"}, "victim");
  read(v, "model", c.victim.model_path);
  c.victim.model_path = resolve(base_dir, c.victim.model_path);
  if (v.contains("arch")) c.victim.arch = arch_spec_from_json(v["arch"]);
  if (v.contains("train")) c.victim.train = train_options_from_json(v["train"]);
  if (!j.contains("dataset")) throw ValidationError("experiment config needs a 'dataset'");
  c.dataset = dataset_spec_from_json(j["dataset"], base_dir);

  json defaults = j.value("attack_defaults", json::object());
  if (!j.contains("attacks")) throw ValidationError("experiment config needs 'attacks'");
  for (const auto& a : j["attacks"]) {
    json merged = defaults;
    if (a.is_string()) merged["strategy"] = a;
    else merged.update(a);
    c.attacks.push_back(attack_config_from_json(merged));
  }
  if (j.contains("p3a") && !j["p3a"].is_null()) c.p3a = p3a_config_from_json(j["p3a"]);
  read(j, "samples", c.samples);
  read(j, "seed", c.seed);
  read(j, "asr_initially_correct", c.asr_initially_correct);
  read(j, "per_sample_rows", c.per_sample_rows);
  read(j, "jobs", c.jobs);
  c.validate();
  return c;
}

json to_json(const ExperimentConfig& c) {
  json victim = json::object();
  if (!c.victim.model_path.empty()) victim["model"] = c.victim.model_path;
  if (c.victim.arch) victim["arch"] = to_json(*c.victim.arch);
  victim["train"] = {{"epochs", c.victim.train.epochs},
                     {"lr", c.victim.train.lr},
                     {"seed", c.victim.train.seed}};
  json attacks = json::array();
  for (const auto& a : c.attacks) attacks.push_back(to_json(a));
  json j = {{"name", c.name},
            {"victim", victim},
            {"dataset", to_json(c.dataset)},
            {"attacks", attacks},
            {"samples", c.samples},
            {"seed", c.seed},
            {"asr_initially_correct", c.asr_initially_correct},
            {"per_sample_rows", c.per_sample_rows}};
  j["p3a"] = c.p3a ? to_json(*c.p3a) : json(nullptr);
  return j;
}

json load_json_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ValidationError("config file '" + path.string() + "' does not exist");
  }
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what(),
                     static_cast<long long>(e.byte));
  }
}

}  // namespace p3a::harness
