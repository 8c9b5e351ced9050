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

#include <iosfwd>
#include <string>

#include "fedfeare/rule.hpp"

namespace fedfeare {

// Human-oriented view of a single condition, e.g. "f3 > 0.15" or
// "A[2]#5 > ?" for a split whose threshold lives at party A.
std::string condition_text(const Condition& cond);

// CSV training report, one row per rule. Columns: rule, one node_logic_<d>
// per possible depth, then pi, cpi, f_score, precision, recall, cp, cr, cl.
// Requires the set to carry per-rule metrics.
void write_report(std::ostream& out, const RuleSet& set);

}  // namespace fedfeare
