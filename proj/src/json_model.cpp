// Copyright 2026 The fedfeare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedfeare/json_model.hpp"

#include <cmath>

#include "fedfeare/error.hpp"

namespace fedfeare {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(Errc::SchemaViolation, what);
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    bad(std::string("missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

std::string require_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    bad(std::string("missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

int require_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    bad(std::string("missing integer field '") + key + "'");
  }
  return j[key].get<int>();
}

}  // namespace

const char* direction_name(Direction dir) {
  return dir == Direction::LE ? "le" : "gt";
}

Direction direction_from_name(const std::string& name) {
  if (name == "le") return Direction::LE;
  if (name == "gt") return Direction::GT;
  bad("op must be 'le' or 'gt', got '" + name + "'");
}

nlohmann::json condition_to_json(const Condition& cond) {
  nlohmann::json j;
  j["op"] = direction_name(cond.direction);
  if (cond.is_opaque()) {
    const OpaqueSplit& o = cond.opaque();
    j["opaque"] = {{"party", o.party},
                   {"feature_id", o.feature_id},
                   {"split_index", o.split_index}};
  } else {
    j["feature"] = cond.plain().feature;
    j["threshold"] = cond.plain().threshold;
  }
  return j;
}

Condition condition_from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad("condition is not an object");
  Condition cond;
  cond.direction = direction_from_name(require_string(j, "op"));
  const bool has_plain = j.contains("feature") || j.contains("threshold");
  const bool has_opaque = j.contains("opaque");
  if (has_plain == has_opaque) {
    bad("condition needs exactly one of (feature, threshold) or opaque");
  }
  if (has_opaque) {
    const nlohmann::json& o = j["opaque"];
    if (!o.is_object()) bad("opaque term is not an object");
    OpaqueSplit split;
    split.party = require_string(o, "party");
    split.feature_id = require_int(o, "feature_id");
    split.split_index = require_int(o, "split_index");
    cond.term = split;
  } else {
    Condition::Plain plain;
    plain.feature = require_string(j, "feature");
    plain.threshold = require_number(j, "threshold");
    if (!std::isfinite(plain.threshold)) bad("threshold is not finite");
    cond.term = plain;
  }
  return cond;
}

nlohmann::json rule_to_json(const Rule& rule) {
  nlohmann::json conditions = nlohmann::json::array();
  for (const Condition& cond : rule.conditions) {
    conditions.push_back(condition_to_json(cond));
  }
  return nlohmann::json{{"conditions", std::move(conditions)}};
}

Rule rule_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("conditions") ||
      !j["conditions"].is_array()) {
    bad("rule needs a conditions array");
  }
  Rule rule;
  for (const nlohmann::json& c : j["conditions"]) {
    rule.conditions.push_back(condition_from_json(c));
  }
  if (rule.conditions.empty()) bad("rule has no conditions");
  return rule;
}

nlohmann::json metrics_to_json(const RuleMetrics& m) {
  return nlohmann::json{{"pi", m.pi},       {"cpi", m.cpi},
                        {"f_score", m.f_score}, {"precision", m.precision},
                        {"recall", m.recall},   {"cp", m.cp},
                        {"cr", m.cr},           {"cl", m.cl}};
}

RuleMetrics metrics_from_json(const nlohmann::json& j) {
  RuleMetrics m;
  m.pi = require_number(j, "pi");
  m.cpi = require_number(j, "cpi");
  m.f_score = require_number(j, "f_score");
  m.precision = require_number(j, "precision");
  m.recall = require_number(j, "recall");
  m.cp = require_number(j, "cp");
  m.cr = require_number(j, "cr");
  m.cl = require_number(j, "cl");
  return m;
}

nlohmann::json params_to_json(const HyperParams& p) {
  return nlohmann::json{{"max_depth", p.max_depth},
                        {"tree_number", p.tree_number},
                        {"pruning_min", p.pruning_min},
                        {"beta", p.beta}};
}

HyperParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad("params is not an object");
  HyperParams p;
  p.max_depth = require_int(j, "max_depth");
  p.tree_number = require_int(j, "tree_number");
  p.pruning_min = require_number(j, "pruning_min");
  p.beta = require_number(j, "beta");
  try {
    p.check();
  } catch (const Error& e) {
    bad(std::string("params out of range: ") + e.what());
  }
  return p;
}

nlohmann::json ruleset_to_json_value(const RuleSet& set) {
  nlohmann::json rules = nlohmann::json::array();
  const bool with_metrics = set.metrics.size() == set.rules.size();
  for (size_t i = 0; i < set.rules.size(); ++i) {
    nlohmann::json r = rule_to_json(set.rules[i]);
    if (with_metrics) r["metrics"] = metrics_to_json(set.metrics[i]);
    rules.push_back(std::move(r));
  }
  nlohmann::json j{{"version", 1},
                   {"params", params_to_json(set.params)},
                   {"rules", std::move(rules)}};
  if (!set.encodings.empty()) {
    nlohmann::json enc = nlohmann::json::object();
    for (const CategoryEncoding& table : set.encodings) {
      nlohmann::json freq = nlohmann::json::object();
      for (const auto& [value, count] : table.counts) freq[value] = count;
      enc[table.feature] = std::move(freq);
    }
    j["encodings"] = std::move(enc);
  }
  return j;
}

RuleSet ruleset_from_json_value(const nlohmann::json& j) {
  if (!j.is_object()) bad("rule set is not a JSON object");
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1) {
    bad("unsupported rule-set version");
  }
  if (!j.contains("params")) bad("rule set lacks params");
  if (!j.contains("rules") || !j["rules"].is_array()) {
    bad("rule set lacks a rules array");
  }
  RuleSet set;
  set.params = params_from_json(j["params"]);
  for (const nlohmann::json& r : j["rules"]) {
    set.rules.push_back(rule_from_json(r));
    if (r.contains("metrics")) {
      set.metrics.push_back(metrics_from_json(r["metrics"]));
    }
  }
  if (!set.metrics.empty() && set.metrics.size() != set.rules.size()) {
    bad("metrics present for only some rules");
  }
  if (j.contains("encodings")) {
    if (!j["encodings"].is_object()) bad("encodings is not an object");
    for (const auto& [feature, freq] : j["encodings"].items()) {
      if (!freq.is_object()) bad("encoding table is not an object");
      CategoryEncoding table;
      table.feature = feature;
      for (const auto& [value, count] : freq.items()) {
        if (!count.is_number()) bad("encoding count is not a number");
        table.counts[value] = count.get<double>();
      }
      set.encodings.push_back(std::move(table));
    }
  }
  return set;
}

}  // namespace fedfeare
