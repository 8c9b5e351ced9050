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

#include "fedfeare/inducer.hpp"

#include <cmath>
#include <numeric>

#include "fedfeare/error.hpp"

namespace fedfeare {

namespace {

// Rows of `rows` on the covered side of a bare (feature, threshold,
// direction) test. Missing cells fall out of the working set.
std::vector<uint32_t> filter_covered(const Dataset& data,
                                     std::span<const uint32_t> rows,
                                     const SplitCandidate& c) {
  const std::vector<double>& column = data.numeric[c.feature];
  std::vector<uint32_t> out;
  out.reserve(rows.size());
  for (uint32_t r : rows) {
    double v = column[r];
    if (std::isnan(v)) continue;
    bool covered = c.direction == Direction::LE ? v <= c.threshold
                                                : v > c.threshold;
    if (covered) out.push_back(r);
  }
  return out;
}

}  // namespace

std::optional<Rule> learn_single_rule(const Dataset& data,
                                      std::span<const uint32_t> rows,
                                      const HyperParams& params,
                                      const CandidateGrid* grid,
                                      SplitStats* out_stats,
                                      std::vector<uint32_t>* out_covered) {
  params.check();
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "rule learning needs labels");
  }
  const uint64_t target = data.positive_count(rows);
  if (target == 0) {
    throw Error(Errc::Precondition, "working set has no positive rows");
  }

  Rule rule;
  double max_f = 0.0;
  SplitStats last_stats;
  std::vector<uint32_t> working(rows.begin(), rows.end());
  for (int depth = 0; depth < params.max_depth; ++depth) {
    auto best = find_depth_best(data, working, target, params.beta, grid);
    if (!best) break;
    if (!(best->f_score > max_f + params.pruning_min)) break;
    Condition cond;
    cond.direction = best->candidate.direction;
    cond.term = Condition::Plain{data.feature_names[best->candidate.feature],
                                 best->candidate.threshold};
    rule.conditions.push_back(std::move(cond));
    working = filter_covered(data, working, best->candidate);
    max_f = best->f_score;
    last_stats = best->stats;
  }
  if (rule.conditions.empty()) return std::nullopt;
  if (out_stats) *out_stats = last_stats;
  if (out_covered) *out_covered = std::move(working);
  return rule;
}

RuleSet learn_rule_set(const Dataset& data, const HyperParams& params,
                       const CandidateGrid* grid) {
  params.check();
  data.check();
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "rule learning needs labels");
  }

  RuleSet set;
  set.params = params;
  const uint64_t total_positives = data.positive_count();
  if (data.n_rows() == 0 || total_positives == 0) return set;

  std::vector<uint32_t> residual(data.n_rows());
  std::iota(residual.begin(), residual.end(), 0u);
  std::vector<SplitStats> per_rule;
  for (int t = 0; t < params.tree_number; ++t) {
    if (residual.empty() || data.positive_count(residual) == 0) break;
    SplitStats stats;
    std::vector<uint32_t> covered;
    auto rule = learn_single_rule(data, residual, params, grid, &stats,
                                  &covered);
    if (!rule) break;
    set.rules.push_back(std::move(*rule));
    per_rule.push_back(stats);
    // covered is sorted (filtering preserves order), as is residual.
    std::vector<uint32_t> rest;
    rest.reserve(residual.size() - covered.size());
    size_t c = 0;
    for (uint32_t r : residual) {
      if (c < covered.size() && covered[c] == r) {
        ++c;
      } else {
        rest.push_back(r);
      }
    }
    residual = std::move(rest);
  }
  if (!set.rules.empty()) {
    set.metrics = compose_rule_metrics(per_rule, data.n_rows(),
                                       total_positives, params.beta);
  }
  return set;
}

}  // namespace fedfeare
