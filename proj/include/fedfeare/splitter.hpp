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
#include <optional>
#include <span>
#include <vector>

#include "fedfeare/dataset.hpp"
#include "fedfeare/metrics.hpp"
#include "fedfeare/rule.hpp"

namespace fedfeare {

// One scored threshold. split_index is the candidate's position in the
// enumeration that produced it (sorted midpoints, or grid edges), which is
// what ties are broken on.
struct SplitCandidate {
  int feature = -1;
  int split_index = -1;
  double threshold = 0.0;
  Direction direction = Direction::LE;
};

struct SplitEval {
  SplitCandidate candidate;
  double f_score = 0.0;
  SplitStats stats;
};

// Candidate ordering used everywhere a winner is picked: higher F first,
// then lower feature index, lower split index, LE before GT. Keeping this
// in one place is what makes local and federated runs choose identically.
bool split_eval_less(const SplitEval& a, const SplitEval& b);

// Best of a per-feature list (entries may be absent); nullopt when all are.
std::optional<SplitEval> pick_best(
    std::span<const std::optional<SplitEval>> per_feature);

// Sorted midpoints of adjacent distinct values. Fewer than two distinct
// values give an empty list. Throws Error{InvalidData} on NaN or infinity;
// callers working from a dataset column drop missing cells first.
std::vector<double> candidate_splits(std::span<const double> values);

// Best split of one numeric feature over the given rows, enumerating the
// midpoints of the values observed there. Missing cells join no candidate
// and are covered by neither direction. nullopt when fewer than two
// distinct values remain. target_base is the positive count the rule is
// hunting (fixed per rule, not per node).
std::optional<SplitEval> best_split(const Dataset& data,
                                    std::span<const uint32_t> rows,
                                    int feature, uint64_t target_base,
                                    double beta);

// Fixed per-feature candidate thresholds. An empty edge list removes the
// feature from consideration.
struct CandidateGrid {
  std::vector<std::vector<double>> edges;  // one sorted list per feature
};

struct BinCounts {
  uint64_t total = 0;
  uint64_t positive = 0;
};

// Histogram of one feature over rows against sorted edges: bin 0 is
// v <= edges[0], bin i is (edges[i-1], edges[i]], bin k is v > edges[k-1].
// Missing cells are dropped. Result has edges.size() + 1 bins.
std::vector<BinCounts> build_histogram(const Dataset& data,
                                       std::span<const uint32_t> rows,
                                       int feature,
                                       std::span<const double> edges);

// Scores every (edge, direction) pair of a histogram and returns the best.
// This is the single scorer shared by the fixed-grid trainer and the
// aggregation coordinator, so both rank identical counts identically.
std::optional<SplitEval> best_from_histogram(int feature,
                                             std::span<const double> edges,
                                             std::span<const BinCounts> bins,
                                             uint64_t target_base,
                                             double beta);

// Per-feature best splits over all numeric features, parallelized across
// features when OpenMP is enabled. With a grid, each feature is scored on
// its fixed edges instead of per-node midpoints.
std::vector<std::optional<SplitEval>> scan_features(
    const Dataset& data, std::span<const uint32_t> rows, uint64_t target_base,
    double beta, const CandidateGrid* grid = nullptr);

// Winner across all features, or nullopt when no feature has a candidate.
std::optional<SplitEval> find_depth_best(const Dataset& data,
                                         std::span<const uint32_t> rows,
                                         uint64_t target_base, double beta,
                                         const CandidateGrid* grid = nullptr);

}  // namespace fedfeare
