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

#include <optional>
#include <span>

#include "fedfeare/splitter.hpp"

namespace fedfeare {

// Grows one rule greedily over the given rows: at each depth the single best
// (feature, threshold, direction) is scored against the positives present at
// the start (the rule's fixed target), and kept only when its F beats the
// running best by more than pruning_min. The working set narrows to the
// covered rows after each accepted condition. Returns nullopt when not even
// the first condition clears the gate. The rows must contain at least one
// positive; callers filter exhausted working sets beforehand.
//
// out_stats, when given, receives the counts of the last accepted condition,
// which are the rule's own counts. out_covered receives the rows (from
// `rows`) the finished rule covers.
std::optional<Rule> learn_single_rule(const Dataset& data,
                                      std::span<const uint32_t> rows,
                                      const HyperParams& params,
                                      const CandidateGrid* grid = nullptr,
                                      SplitStats* out_stats = nullptr,
                                      std::vector<uint32_t>* out_covered = nullptr);

// Sequential covering: learns up to tree_number rules, removing each rule's
// covered rows before the next is grown. Stops early when no positives
// remain or a rule cannot be formed. The returned set carries the training
// report composed from each rule's residual counts.
RuleSet learn_rule_set(const Dataset& data, const HyperParams& params,
                       const CandidateGrid* grid = nullptr);

}  // namespace fedfeare
