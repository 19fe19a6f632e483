// Copyright 2026 The TCKR Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCKR_DESKPIPE_CONFIG_HPP_
#define TCKR_DESKPIPE_CONFIG_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tckr/error.hpp"
#include "tckr/lira.hpp"

namespace tckr::desk {

enum class LabelMode { kHard, kSoft };

// How the audit picks the attack for each model: a fixed (variant, variance
// mode), or the best AUC over all four combinations.
enum class AttackSelection { kFixed, kBest };

struct SimConfig {
  int num_classes = 5;
  int dim = 20;
  int per_class_train = 20;
  int per_class_test = 200;
  int per_class_holdout = 0;  // non-member pool per class; 0 = per_class_train
  double cluster_separation = 1.0;
  double cluster_spread = 1.0;
  std::vector<double> multipliers{0.1, 0.2, 1.0, 5.0, 10.0, 20.0};
  LabelMode label_mode = LabelMode::kSoft;
  int epochs = 300;
  double learning_rate = 0.5;
  int batch_size = 0;  // 0 = full batch
  int hidden_units = 0;
  double init_scale = 0.01;
  int num_shadow_models = 64;
  std::uint64_t master_seed = 0;
  AttackConfig attack;
  AttackSelection attack_selection = AttackSelection::kFixed;

  int holdout_per_class() const {
    return per_class_holdout > 0 ? per_class_holdout : per_class_train;
  }
};

inline void validate(const SimConfig& c) {
  if (c.num_classes < 2) throw ValidationError("num_classes must be >= 2");
  if (c.dim < 1) throw ValidationError("dim must be >= 1");
  if (c.per_class_train < 2) throw ValidationError("per_class_train must be >= 2");
  if (c.per_class_test < 1) throw ValidationError("per_class_test must be >= 1");
  if (c.per_class_holdout < 0) throw ValidationError("per_class_holdout must be >= 0");
  if (!(c.cluster_separation >= 0.0)) throw ValidationError("cluster_separation must be >= 0");
  if (!(c.cluster_spread > 0.0)) throw ValidationError("cluster_spread must be > 0");
  if (c.multipliers.empty()) throw ValidationError("multipliers must not be empty");
  for (double m : c.multipliers) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("multipliers must be > 0");
  }
  if (c.epochs < 0) throw ValidationError("epochs must be >= 0");
  if (!(c.learning_rate > 0.0)) throw ValidationError("learning_rate must be > 0");
  if (c.batch_size < 0) throw ValidationError("batch_size must be >= 0");
  if (c.hidden_units < 0) throw ValidationError("hidden_units must be >= 0");
  if (!(c.init_scale >= 0.0)) throw ValidationError("init_scale must be >= 0");
  if (c.num_shadow_models < 2) throw ValidationError("num_shadow_models must be >= 2");
  validate(c.attack);
}

inline const char* to_string(LabelMode m) { return m == LabelMode::kHard ? "hard" : "soft"; }
inline const char* to_string(AttackSelection s) {
  return s == AttackSelection::kFixed ? "fixed" : "best";
}

inline nlohmann::ordered_json to_json(const SimConfig& c) {
  nlohmann::ordered_json j;
  j["num_classes"] = c.num_classes;
  j["dim"] = c.dim;
  j["per_class_train"] = c.per_class_train;
  j["per_class_test"] = c.per_class_test;
  j["per_class_holdout"] = c.per_class_holdout;
  j["cluster_separation"] = c.cluster_separation;
  j["cluster_spread"] = c.cluster_spread;
  j["multipliers"] = c.multipliers;
  j["label_mode"] = to_string(c.label_mode);
  j["epochs"] = c.epochs;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["hidden_units"] = c.hidden_units;
  j["init_scale"] = c.init_scale;
  j["num_shadow_models"] = c.num_shadow_models;
  j["master_seed"] = c.master_seed;
  j["attack_variant"] = to_string(c.attack.variant);
  j["attack_variance"] = to_string(c.attack.variance_mode);
  j["attack_selection"] = to_string(c.attack_selection);
  j["eps_clamp"] = c.attack.eps_clamp;
  j["var_floor"] = c.attack.var_floor;
  j["min_in"] = c.attack.min_in;
  j["min_out"] = c.attack.min_out;
  return j;
}

// Missing keys keep their defaults; unknown keys and ill-typed values are
// rejected.
inline SimConfig sim_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  SimConfig c;
  static const std::set<std::string> known = {
      "num_classes", "dim", "per_class_train", "per_class_test", "per_class_holdout",
      "cluster_separation", "cluster_spread", "multipliers", "label_mode", "epochs",
      "learning_rate", "batch_size", "hidden_units", "init_scale", "num_shadow_models",
      "master_seed", "attack_variant", "attack_variance", "attack_selection",
      "eps_clamp", "var_floor", "min_in", "min_out"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ValidationError("unknown config key \"" + key + "\"");
  }
  auto int_field = [&](const char* key, int& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) {
      throw ValidationError(std::string("config: \"") + key + "\" must be an integer");
    }
    out = j[key].get<int>();
  };
  auto real_field = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) {
      throw ValidationError(std::string("config: \"") + key + "\" must be a number");
    }
    out = j[key].get<double>();
  };
  auto text_field = [&](const char* key) -> std::string {
    if (!j[key].is_string()) {
      throw ValidationError(std::string("config: \"") + key + "\" must be a string");
    }
    return j[key].get<std::string>();
  };
  int_field("num_classes", c.num_classes);
  int_field("dim", c.dim);
  int_field("per_class_train", c.per_class_train);
  int_field("per_class_test", c.per_class_test);
  int_field("per_class_holdout", c.per_class_holdout);
  real_field("cluster_separation", c.cluster_separation);
  real_field("cluster_spread", c.cluster_spread);
  if (j.contains("multipliers")) {
    if (!j["multipliers"].is_array()) throw ValidationError("config: \"multipliers\" must be an array");
    c.multipliers.clear();
    for (const auto& m : j["multipliers"]) {
      if (!m.is_number()) throw ValidationError("config: multipliers must be numbers");
      c.multipliers.push_back(m.get<double>());
    }
  }
  if (j.contains("label_mode")) {
    const auto s = text_field("label_mode");
    if (s == "hard") c.label_mode = LabelMode::kHard;
    else if (s == "soft") c.label_mode = LabelMode::kSoft;
    else throw ValidationError("config: label_mode must be hard or soft");
  }
  int_field("epochs", c.epochs);
  real_field("learning_rate", c.learning_rate);
  int_field("batch_size", c.batch_size);
  int_field("hidden_units", c.hidden_units);
  real_field("init_scale", c.init_scale);
  int_field("num_shadow_models", c.num_shadow_models);
  if (j.contains("master_seed")) {
    const auto& v = j["master_seed"];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ValidationError("config: \"master_seed\" must be a non-negative integer");
    }
    c.master_seed = j["master_seed"].get<std::uint64_t>();
  }
  if (j.contains("attack_variant")) {
    const auto s = text_field("attack_variant");
    if (s == "online") c.attack.variant = Variant::kOnline;
    else if (s == "offline") c.attack.variant = Variant::kOffline;
    else throw ValidationError("config: attack_variant must be online or offline");
  }
  if (j.contains("attack_variance")) {
    const auto s = text_field("attack_variance");
    if (s == "global") c.attack.variance_mode = VarianceMode::kGlobal;
    else if (s == "per_example" || s == "per-example") c.attack.variance_mode = VarianceMode::kPerExample;
    else throw ValidationError("config: attack_variance must be global or per_example");
  }
  if (j.contains("attack_selection")) {
    const auto s = text_field("attack_selection");
    if (s == "fixed") c.attack_selection = AttackSelection::kFixed;
    else if (s == "best") c.attack_selection = AttackSelection::kBest;
    else throw ValidationError("config: attack_selection must be fixed or best");
  }
  real_field("eps_clamp", c.attack.eps_clamp);
  real_field("var_floor", c.attack.var_floor);
  int_field("min_in", c.attack.min_in);
  int_field("min_out", c.attack.min_out);
  validate(c);
  return c;
}

}  // namespace tckr::desk

#endif  // TCKR_DESKPIPE_CONFIG_HPP_
