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

#include "fedfeare/splitter.hpp"

namespace fedfeare::reference {

// Serial split search that rescans every row for every candidate instead of
// carrying prefix counts. Quadratic and deliberately dumb; it exists so the
// production kernel has something independent to be checked against and
// benchmarked over.
std::optional<SplitEval> best_split(const Dataset& data,
                                    std::span<const uint32_t> rows,
                                    int feature, uint64_t target_base,
                                    double beta);

std::optional<SplitEval> find_depth_best(const Dataset& data,
                                         std::span<const uint32_t> rows,
                                         uint64_t target_base, double beta);

}  // namespace fedfeare::reference
