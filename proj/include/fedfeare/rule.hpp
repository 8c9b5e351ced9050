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

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fedfeare/dataset.hpp"
#include "fedfeare/metrics.hpp"

namespace fedfeare {

// LE covers value <= threshold, GT covers value > threshold. A missing
// value (NaN) is covered by neither direction.
enum class Direction { LE, GT };

// Handle for a split whose threshold lives at another party. The holder only
// knows which party, which of its local features, and which entry of the
// candidate enumeration that party performed when the split was chosen.
struct OpaqueSplit {
  std::string party;
  int feature_id = 0;
  int split_index = 0;

  bool operator==(const OpaqueSplit&) const = default;
};

// One comparison. Exactly one of the two term forms is present: a plaintext
// (feature name, threshold) pair, or an opaque handle.
struct Condition {
  // No default member initializer: Plain must count as default-constructible
  // while Condition is still being defined, or the variant member's default
  // constructor vanishes. Always brace-initialize both fields.
  struct Plain {
    std::string feature;
    double threshold;

    bool operator==(const Plain&) const = default;
  };

  Direction direction = Direction::LE;
  std::variant<Plain, OpaqueSplit> term;

  bool is_opaque() const { return std::holds_alternative<OpaqueSplit>(term); }
  const Plain& plain() const { return std::get<Plain>(term); }
  const OpaqueSplit& opaque() const { return std::get<OpaqueSplit>(term); }

  bool operator==(const Condition&) const = default;
};

// Conjunction of conditions; a row is covered when every condition holds.
struct Rule {
  std::vector<Condition> conditions;

  bool operator==(const Rule&) const = default;
};

// Ordered rule list plus the parameters it was trained under and its
// training report. A row is predicted positive when any rule covers it.
struct RuleSet {
  std::vector<Rule> rules;
  HyperParams params;
  std::vector<RuleMetrics> metrics;   // one row per rule
  std::vector<CategoryEncoding> encodings;  // present when training encoded
};

// True when the condition covers the row. Throws Error{OpaqueCondition} for
// opaque terms and Error{InvalidRule} when the feature is unknown or not
// numeric on this dataset.
bool condition_covers(const Dataset& data, const Condition& cond,
                      uint32_t row);

bool rule_covers(const Dataset& data, const Rule& rule, uint32_t row);

// Rows from `rows` that the rule covers, in input order.
std::vector<uint32_t> covered_rows(const Dataset& data, const Rule& rule,
                                   std::span<const uint32_t> rows);

// Counts for one rule over all rows of labeled data. The caller names the
// target base because recall is defined against the positives of whatever
// residual the rule was learned on, not necessarily this dataset's.
SplitStats evaluate_rule(const Dataset& data, const Rule& rule,
                         uint64_t n_target_base);
SplitStats evaluate_rule_set_entry(const Dataset& data, const Rule& rule,
                                   std::span<const uint32_t> rows,
                                   uint64_t n_target);

// Replays sequential covering over labeled data: rule k is scored on the rows
// no earlier rule covered, with n_target the positives remaining there. On a
// training set this reproduces the trainer's own report exactly. An empty
// dataset yields all-zero rows.
std::vector<RuleMetrics> evaluate_rule_set(const Dataset& data,
                                           const RuleSet& set);

// 0/1 prediction per row; positive when any rule covers. All conditions must
// be plaintext.
std::vector<uint8_t> predict(const Dataset& data, const RuleSet& set);

}  // namespace fedfeare
