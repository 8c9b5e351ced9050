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
#include <utility>
#include <vector>

namespace fedfeare {

// Counts behind one candidate rule: rows it covers, covered rows that are
// truly positive, and the positives it was asked to find. n_target is fixed
// when a rule starts growing and never changes while conditions are added.
struct SplitStats {
  uint64_t n_cover = 0;
  uint64_t n_correct = 0;
  uint64_t n_target = 0;

  // Throws Error{Precondition} unless n_correct <= min(n_cover, n_target).
  void check() const;
};

// {precision, recall}. Either is 0 when its denominator is 0.
std::pair<double, double> precision_recall(const SplitStats& stats);

// F_beta = (1 + beta^2) * P * R / (beta^2 * P + R), and 0 when P = R = 0.
// Requires beta > 0 and P, R in [0, 1].
double f_beta(double precision, double recall, double beta);

// Convenience: F_beta straight from counts.
double f_of(const SplitStats& stats, double beta);

struct HyperParams {
  int max_depth = 3;      // conditions per rule
  int tree_number = 3;    // rules per set
  double pruning_min = 0.01;  // required F gain to accept a condition
  double beta = 1.0;

  // Throws Error{Precondition} on max_depth < 1, tree_number < 1,
  // pruning_min < 0, or beta <= 0.
  void check() const;
};

// Per-rule row of the training report. pi and cpi are population shares of
// newly and cumulatively covered rows; precision/recall/f_score are measured
// on the rule's residual; cp/cr are precision and recall of the union of
// covers so far; cl = cp / base positive rate.
struct RuleMetrics {
  double pi = 0.0;
  double cpi = 0.0;
  double f_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double cp = 0.0;
  double cr = 0.0;
  double cl = 0.0;
};

// Builds the report rows from per-rule residual counts. Because rules are
// learned on disjoint residuals, rule k's cover adds exactly n_cover new rows
// and n_correct new true positives to the running union; that identity is what
// lets every trainer (local or federated) share this one composition.
// total_rows > 0 and total_positives > 0 are required.
std::vector<RuleMetrics> compose_rule_metrics(
    const std::vector<SplitStats>& per_rule, uint64_t total_rows,
    uint64_t total_positives, double beta);

}  // namespace fedfeare
