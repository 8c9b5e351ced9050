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

#pragma once

#include <nlohmann/json.hpp>

#include "fedfeare/rule.hpp"

namespace fedfeare {

// JSON views of the model types. The rule-set file format and the wire
// protocol both speak these shapes, so they live in one place.
//
// Condition: {"feature": name, "op": "le"|"gt", "threshold": x} or
//            {"opaque": {"party","feature_id","split_index"}, "op": ...}

nlohmann::json condition_to_json(const Condition& cond);
Condition condition_from_json(const nlohmann::json& j);  // SchemaViolation

nlohmann::json rule_to_json(const Rule& rule);
Rule rule_from_json(const nlohmann::json& j);

nlohmann::json metrics_to_json(const RuleMetrics& m);
RuleMetrics metrics_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const HyperParams& p);
HyperParams params_from_json(const nlohmann::json& j);

nlohmann::json ruleset_to_json_value(const RuleSet& set);
RuleSet ruleset_from_json_value(const nlohmann::json& j);

const char* direction_name(Direction dir);
Direction direction_from_name(const std::string& name);

}  // namespace fedfeare
