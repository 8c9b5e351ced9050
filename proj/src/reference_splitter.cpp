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

#include "fedfeare/reference_splitter.hpp"

#include <cmath>

#include "fedfeare/error.hpp"

namespace fedfeare::reference {

std::optional<SplitEval> best_split(const Dataset& data,
                                    std::span<const uint32_t> rows,
                                    int feature, uint64_t target_base,
                                    double beta) {
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "split search needs labels");
  }
  const std::vector<double>& column = data.numeric[feature];
  const std::vector<uint8_t>& labels = *data.labels;

  std::vector<double> present;
  for (uint32_t r : rows) {
    if (!std::isnan(column[r])) present.push_back(column[r]);
  }
  std::vector<double> thresholds = candidate_splits(present);

  std::optional<SplitEval> best;
  for (size_t j = 0; j < thresholds.size(); ++j) {
    for (Direction dir : {Direction::LE, Direction::GT}) {
      SplitEval eval;
      eval.candidate = {feature, static_cast<int>(j), thresholds[j], dir};
      eval.stats.n_target = target_base;
      for (uint32_t r : rows) {
        double v = column[r];
        if (std::isnan(v)) continue;
        bool covered = dir == Direction::LE ? v <= thresholds[j]
                                            : v > thresholds[j];
        if (!covered) continue;
        ++eval.stats.n_cover;
        eval.stats.n_correct += labels[r];
      }
      eval.f_score = f_of(eval.stats, beta);
      if (!best || split_eval_less(eval, *best)) best = eval;
    }
  }
  return best;
}

std::optional<SplitEval> find_depth_best(const Dataset& data,
                                         std::span<const uint32_t> rows,
                                         uint64_t target_base, double beta) {
  std::vector<std::optional<SplitEval>> per_feature(data.n_features());
  for (size_t f = 0; f < data.n_features(); ++f) {
    if (data.feature_kinds[f] != FeatureKind::Numeric) continue;
    per_feature[f] = reference::best_split(data, rows, static_cast<int>(f),
                                           target_base, beta);
  }
  return pick_best(per_feature);
}

}  // namespace fedfeare::reference
