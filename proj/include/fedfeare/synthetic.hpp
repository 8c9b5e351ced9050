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
#include <vector>

#include "fedfeare/rule.hpp"

namespace fedfeare {

// Recipe for a synthetic imbalanced table. Features f0..f{n-1} draw uniform
// values in [0, 1), either continuous or snapped to value_levels evenly
// spaced levels (level k holds (k + 0.5) / levels). A row's label is 1 when
// any planted rule covers it; noise_rate then flips each positive to 0
// independently, modelling labels that were never confirmed.
//
// Rules are given explicitly or auto-planted: auto_rules boxes of depth
// rule_depth on disjoint features, sized so expected total coverage is
// positive_rate. Auto-planted thresholds sit on level boundaries, so with
// levels > 0 they are recoverable exactly.
struct SyntheticSpec {
  uint64_t n_rows = 0;
  int n_features = 0;
  int value_levels = 0;  // 0: continuous
  std::vector<Rule> planted_rules;  // when empty, auto-plant
  int auto_rules = 0;
  int rule_depth = 2;
  double positive_rate = 0.01;  // in (0, 0.5]
  double noise_rate = 0.0;      // in [0, 1)
  uint64_t seed = 0;
};

struct SyntheticData {
  Dataset data;            // labels after noise
  RuleSet truth;           // the planted rules
  std::vector<uint8_t> clean_labels;
  uint64_t flipped = 0;    // positives lost to noise
};

// Deterministic per spec (including platform: values are derived from raw
// mt19937_64 draws, not library distributions). Throws Error{Generation}
// when the request is unsatisfiable: rates out of range, auto boxes that
// need more features or finer levels than exist, or zero positives.
SyntheticData gen_synthetic(const SyntheticSpec& spec);

}  // namespace fedfeare
