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

#include "fedfeare/report.hpp"

#include <cstdio>
#include <ostream>

#include "fedfeare/error.hpp"

namespace fedfeare {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string condition_text(const Condition& cond) {
  const char* op = cond.direction == Direction::LE ? "<=" : ">";
  if (cond.is_opaque()) {
    const OpaqueSplit& o = cond.opaque();
    return o.party + "[" + std::to_string(o.feature_id) + "]#" +
           std::to_string(o.split_index) + " " + op + " ?";
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", cond.plain().threshold);
  return cond.plain().feature + " " + op + " " + buf;
}

void write_report(std::ostream& out, const RuleSet& set) {
  if (set.metrics.size() != set.rules.size()) {
    throw Error(Errc::Precondition, "rule set carries no training metrics");
  }
  size_t depth = static_cast<size_t>(set.params.max_depth);
  for (const Rule& rule : set.rules) {
    depth = std::max(depth, rule.conditions.size());
  }
  out << "rule";
  for (size_t d = 1; d <= depth; ++d) out << ",node_logic_" << d;
  out << ",pi,cpi,f_score,precision,recall,cp,cr,cl\n";
  for (size_t i = 0; i < set.rules.size(); ++i) {
    out << "rule_" << (i + 1);
    for (size_t d = 0; d < depth; ++d) {
      out << ',';
      if (d < set.rules[i].conditions.size()) {
        out << condition_text(set.rules[i].conditions[d]);
      }
    }
    const RuleMetrics& m = set.metrics[i];
    out << ',' << fmt(m.pi) << ',' << fmt(m.cpi) << ',' << fmt(m.f_score)
        << ',' << fmt(m.precision) << ',' << fmt(m.recall) << ',' << fmt(m.cp)
        << ',' << fmt(m.cr) << ',' << fmt(m.cl) << '\n';
  }
}

}  // namespace fedfeare
