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

#include <string>

#include "fedfeare/rule.hpp"

namespace fedfeare {

// Serializes a rule set to the version-1 JSON document. Doubles are printed
// with 17 significant digits so thresholds survive a write/read round trip
// bit-exactly, and keys are emitted in a fixed order, making equal rule sets
// equal bytes. Ends with a newline.
std::string ruleset_to_json(const RuleSet& set);

// Parses and validates a version-1 document. Throws Error{SchemaViolation}
// on anything structurally off, including unknown versions.
RuleSet ruleset_from_json(const std::string& text);

}  // namespace fedfeare
