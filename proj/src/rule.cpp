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

#include "fedfeare/rule.hpp"

#include <cmath>
#include <numeric>

#include "fedfeare/error.hpp"

namespace fedfeare {

bool condition_covers(const Dataset& data, const Condition& cond,
                      uint32_t row) {
  if (cond.is_opaque()) {
    throw Error(Errc::OpaqueCondition,
                "condition for party '" + cond.opaque().party +
                    "' cannot be evaluated in plaintext");
  }
  const Condition::Plain& term = cond.plain();
  int f = data.feature_index(term.feature);
  if (f < 0) {
    throw Error(Errc::InvalidRule, "unknown feature '" + term.feature + "'");
  }
  if (data.feature_kinds[f] != FeatureKind::Numeric) {
    throw Error(Errc::InvalidRule,
                "feature '" + term.feature + "' is not numeric; encode first");
  }
  double v = data.numeric[f][row];
  if (std::isnan(v)) return false;
  return cond.direction == Direction::LE ? v <= term.threshold
                                         : v > term.threshold;
}

bool rule_covers(const Dataset& data, const Rule& rule, uint32_t row) {
  for (const Condition& cond : rule.conditions) {
    if (!condition_covers(data, cond, row)) return false;
  }
  return true;
}

std::vector<uint32_t> covered_rows(const Dataset& data, const Rule& rule,
                                   std::span<const uint32_t> rows) {
  std::vector<uint32_t> out;
  for (uint32_t r : rows) {
    if (rule_covers(data, rule, r)) out.push_back(r);
  }
  return out;
}

SplitStats evaluate_rule_set_entry(const Dataset& data, const Rule& rule,
                                   std::span<const uint32_t> rows,
                                   uint64_t n_target) {
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "rule evaluation needs labels");
  }
  SplitStats stats;
  stats.n_target = n_target;
  for (uint32_t r : rows) {
    if (!rule_covers(data, rule, r)) continue;
    ++stats.n_cover;
    stats.n_correct += (*data.labels)[r];
  }
  return stats;
}

SplitStats evaluate_rule(const Dataset& data, const Rule& rule,
                         uint64_t n_target_base) {
  std::vector<uint32_t> all(data.n_rows());
  std::iota(all.begin(), all.end(), 0u);
  return evaluate_rule_set_entry(data, rule, all, n_target_base);
}

std::vector<RuleMetrics> evaluate_rule_set(const Dataset& data,
                                           const RuleSet& set) {
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "rule-set evaluation needs labels");
  }
  if (data.n_rows() == 0 || data.positive_count() == 0) {
    // Nothing to measure against; report zeros rather than divide.
    return std::vector<RuleMetrics>(set.rules.size());
  }
  std::vector<uint32_t> residual(data.n_rows());
  std::iota(residual.begin(), residual.end(), 0u);
  std::vector<SplitStats> per_rule;
  per_rule.reserve(set.rules.size());
  for (const Rule& rule : set.rules) {
    uint64_t n_target = data.positive_count(residual);
    SplitStats stats;
    stats.n_target = n_target;
    std::vector<uint32_t> rest;
    rest.reserve(residual.size());
    for (uint32_t r : residual) {
      if (rule_covers(data, rule, r)) {
        ++stats.n_cover;
        stats.n_correct += (*data.labels)[r];
      } else {
        rest.push_back(r);
      }
    }
    per_rule.push_back(stats);
    residual = std::move(rest);
  }
  return compose_rule_metrics(per_rule, data.n_rows(), data.positive_count(),
                              set.params.beta);
}

std::vector<uint8_t> predict(const Dataset& data, const RuleSet& set) {
  std::vector<uint8_t> out(data.n_rows(), 0);
  for (uint32_t r = 0; r < data.n_rows(); ++r) {
    for (const Rule& rule : set.rules) {
      if (rule_covers(data, rule, r)) {
        out[r] = 1;
        break;
      }
    }
  }
  return out;
}

}  // namespace fedfeare
