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

#include "fedfeare/splitter.hpp"

#include <algorithm>
#include <cmath>

#include "fedfeare/error.hpp"

namespace fedfeare {

bool split_eval_less(const SplitEval& a, const SplitEval& b) {
  if (a.f_score != b.f_score) return a.f_score > b.f_score;
  if (a.candidate.feature != b.candidate.feature) {
    return a.candidate.feature < b.candidate.feature;
  }
  if (a.candidate.split_index != b.candidate.split_index) {
    return a.candidate.split_index < b.candidate.split_index;
  }
  return static_cast<int>(a.candidate.direction) <
         static_cast<int>(b.candidate.direction);
}

std::optional<SplitEval> pick_best(
    std::span<const std::optional<SplitEval>> per_feature) {
  std::optional<SplitEval> best;
  for (const auto& entry : per_feature) {
    if (!entry) continue;
    if (!best || split_eval_less(*entry, *best)) best = entry;
  }
  return best;
}

std::vector<double> candidate_splits(std::span<const double> values) {
  std::vector<double> sorted;
  sorted.reserve(values.size());
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(Errc::InvalidData, "non-finite value in candidate input");
    }
    sorted.push_back(v);
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> mids;
  if (sorted.size() < 2) return mids;
  mids.reserve(sorted.size() - 1);
  for (size_t i = 0; i + 1 < sorted.size(); ++i) {
    mids.push_back(sorted[i] + (sorted[i + 1] - sorted[i]) / 2.0);
  }
  return mids;
}

namespace {

void require_numeric(const Dataset& data, int feature) {
  if (feature < 0 || static_cast<size_t>(feature) >= data.n_features()) {
    throw Error(Errc::Precondition, "feature index out of range");
  }
  if (data.feature_kinds[feature] != FeatureKind::Numeric) {
    throw Error(Errc::Precondition, "split search needs a numeric feature");
  }
}

// Considers one scored candidate for the per-feature running best.
void consider(std::optional<SplitEval>& best, int feature, int split_index,
              double threshold, Direction dir, uint64_t cover,
              uint64_t correct, uint64_t target, double beta) {
  SplitEval eval;
  eval.candidate = {feature, split_index, threshold, dir};
  eval.stats = {cover, correct, target};
  eval.f_score = f_of(eval.stats, beta);
  if (!best || split_eval_less(eval, *best)) best = eval;
}

}  // namespace

std::optional<SplitEval> best_split(const Dataset& data,
                                    std::span<const uint32_t> rows,
                                    int feature, uint64_t target_base,
                                    double beta) {
  require_numeric(data, feature);
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "split search needs labels");
  }
  const std::vector<double>& column = data.numeric[feature];
  const std::vector<uint8_t>& labels = *data.labels;

  std::vector<std::pair<double, uint8_t>> present;
  present.reserve(rows.size());
  for (uint32_t r : rows) {
    double v = column[r];
    if (!std::isnan(v)) present.emplace_back(v, labels[r]);
  }
  if (present.size() < 2) return std::nullopt;
  std::sort(present.begin(), present.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const uint64_t m = present.size();
  uint64_t total_pos = 0;
  for (const auto& [v, y] : present) total_pos += y;

  // Walk distinct-value group boundaries carrying prefix counts; each
  // boundary is one candidate threshold scored in both directions.
  std::optional<SplitEval> best;
  uint64_t prefix_n = 0;
  uint64_t prefix_pos = 0;
  int split_index = 0;
  size_t i = 0;
  while (i < present.size()) {
    size_t j = i;
    while (j < present.size() && present[j].first == present[i].first) {
      prefix_pos += present[j].second;
      ++j;
    }
    prefix_n += j - i;
    if (j == present.size()) break;
    double lo = present[i].first;
    double hi = present[j].first;
    double threshold = lo + (hi - lo) / 2.0;
    consider(best, feature, split_index, threshold, Direction::LE, prefix_n,
             prefix_pos, target_base, beta);
    consider(best, feature, split_index, threshold, Direction::GT,
             m - prefix_n, total_pos - prefix_pos, target_base, beta);
    ++split_index;
    i = j;
  }
  return best;
}

std::vector<BinCounts> build_histogram(const Dataset& data,
                                       std::span<const uint32_t> rows,
                                       int feature,
                                       std::span<const double> edges) {
  require_numeric(data, feature);
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "histograms need labels");
  }
  std::vector<BinCounts> bins(edges.size() + 1);
  const std::vector<double>& column = data.numeric[feature];
  const std::vector<uint8_t>& labels = *data.labels;
  for (uint32_t r : rows) {
    double v = column[r];
    if (std::isnan(v)) continue;
    size_t bin = std::lower_bound(edges.begin(), edges.end(), v) -
                 edges.begin();
    ++bins[bin].total;
    bins[bin].positive += labels[r];
  }
  return bins;
}

std::optional<SplitEval> best_from_histogram(int feature,
                                             std::span<const double> edges,
                                             std::span<const BinCounts> bins,
                                             uint64_t target_base,
                                             double beta) {
  if (bins.size() != edges.size() + 1) {
    throw Error(Errc::Precondition, "histogram has wrong bin count");
  }
  uint64_t m = 0;
  uint64_t total_pos = 0;
  for (const BinCounts& b : bins) {
    m += b.total;
    total_pos += b.positive;
  }
  std::optional<SplitEval> best;
  uint64_t prefix_n = 0;
  uint64_t prefix_pos = 0;
  for (size_t j = 0; j < edges.size(); ++j) {
    prefix_n += bins[j].total;
    prefix_pos += bins[j].positive;
    consider(best, feature, static_cast<int>(j), edges[j], Direction::LE,
             prefix_n, prefix_pos, target_base, beta);
    consider(best, feature, static_cast<int>(j), edges[j], Direction::GT,
             m - prefix_n, total_pos - prefix_pos, target_base, beta);
  }
  return best;
}

std::vector<std::optional<SplitEval>> scan_features(
    const Dataset& data, std::span<const uint32_t> rows, uint64_t target_base,
    double beta, const CandidateGrid* grid) {
  if (grid && grid->edges.size() != data.n_features()) {
    throw Error(Errc::Precondition, "grid does not match feature count");
  }
  // Validate shared preconditions here; the parallel loop below must not
  // throw across its region boundary.
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "split search needs labels");
  }
  if (!(beta > 0.0)) {
    throw Error(Errc::Precondition, "beta must be positive");
  }
  const int n_features = static_cast<int>(data.n_features());
  std::vector<std::optional<SplitEval>> per_feature(n_features);
#if FEDFEARE_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int f = 0; f < n_features; ++f) {
    if (data.feature_kinds[f] != FeatureKind::Numeric) continue;
    if (grid) {
      const std::vector<double>& edges = grid->edges[f];
      if (edges.empty()) continue;
      auto bins = build_histogram(data, rows, f, edges);
      per_feature[f] = best_from_histogram(f, edges, bins, target_base, beta);
    } else {
      per_feature[f] = best_split(data, rows, f, target_base, beta);
    }
  }
  return per_feature;
}

std::optional<SplitEval> find_depth_best(const Dataset& data,
                                         std::span<const uint32_t> rows,
                                         uint64_t target_base, double beta,
                                         const CandidateGrid* grid) {
  auto per_feature = scan_features(data, rows, target_base, beta, grid);
  return pick_best(per_feature);
}

}  // namespace fedfeare
