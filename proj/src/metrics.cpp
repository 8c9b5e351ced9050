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

#include "fedfeare/metrics.hpp"

#include "fedfeare/error.hpp"

namespace fedfeare {

void SplitStats::check() const {
  if (n_correct > n_cover || n_correct > n_target) {
    throw Error(Errc::Precondition,
                "n_correct exceeds n_cover or n_target");
  }
}

std::pair<double, double> precision_recall(const SplitStats& stats) {
  stats.check();
  double precision = stats.n_cover == 0
                         ? 0.0
                         : static_cast<double>(stats.n_correct) /
                               static_cast<double>(stats.n_cover);
  double recall = stats.n_target == 0
                      ? 0.0
                      : static_cast<double>(stats.n_correct) /
                            static_cast<double>(stats.n_target);
  return {precision, recall};
}

double f_beta(double precision, double recall, double beta) {
  if (!(beta > 0.0)) {
    throw Error(Errc::Precondition, "beta must be positive");
  }
  if (precision < 0.0 || precision > 1.0 || recall < 0.0 || recall > 1.0) {
    throw Error(Errc::Precondition, "precision and recall must be in [0, 1]");
  }
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denom;
}

double f_of(const SplitStats& stats, double beta) {
  auto [p, r] = precision_recall(stats);
  return f_beta(p, r, beta);
}

void HyperParams::check() const {
  if (max_depth < 1) throw Error(Errc::Precondition, "max_depth must be >= 1");
  if (tree_number < 1) {
    throw Error(Errc::Precondition, "tree_number must be >= 1");
  }
  if (pruning_min < 0.0) {
    throw Error(Errc::Precondition, "pruning_min must be >= 0");
  }
  if (!(beta > 0.0)) throw Error(Errc::Precondition, "beta must be positive");
}

std::vector<RuleMetrics> compose_rule_metrics(
    const std::vector<SplitStats>& per_rule, uint64_t total_rows,
    uint64_t total_positives, double beta) {
  if (total_rows == 0 || total_positives == 0) {
    throw Error(Errc::Precondition,
                "metrics need a nonempty dataset with positives");
  }
  const double n = static_cast<double>(total_rows);
  const double base_rate = static_cast<double>(total_positives) / n;
  std::vector<RuleMetrics> out;
  out.reserve(per_rule.size());
  uint64_t union_cover = 0;
  uint64_t union_correct = 0;
  for (const SplitStats& stats : per_rule) {
    stats.check();
    union_cover += stats.n_cover;
    union_correct += stats.n_correct;
    RuleMetrics m;
    m.pi = static_cast<double>(stats.n_cover) / n;
    m.cpi = static_cast<double>(union_cover) / n;
    auto [p, r] = precision_recall(stats);
    m.precision = p;
    m.recall = r;
    m.f_score = f_beta(p, r, beta);
    m.cp = union_cover == 0 ? 0.0
                            : static_cast<double>(union_correct) /
                                  static_cast<double>(union_cover);
    m.cr = static_cast<double>(union_correct) /
           static_cast<double>(total_positives);
    m.cl = m.cp / base_rate;
    out.push_back(m);
  }
  return out;
}

}  // namespace fedfeare
