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

#include "fedfeare/ruleset_json.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "fedfeare/error.hpp"
#include "fedfeare/json_model.hpp"

namespace fedfeare {

namespace {

// The writer is hand-rolled so the on-disk number format is pinned to
// 17 significant digits independent of any JSON library's float printer.

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_condition(std::string& out, const Condition& cond) {
  out += '{';
  if (cond.is_opaque()) {
    const OpaqueSplit& o = cond.opaque();
    out += "\"op\":\"";
    out += direction_name(cond.direction);
    out += "\",\"opaque\":{\"feature_id\":";
    out += std::to_string(o.feature_id);
    out += ",\"party\":";
    append_escaped(out, o.party);
    out += ",\"split_index\":";
    out += std::to_string(o.split_index);
    out += '}';
  } else {
    out += "\"feature\":";
    append_escaped(out, cond.plain().feature);
    out += ",\"op\":\"";
    out += direction_name(cond.direction);
    out += "\",\"threshold\":";
    append_double(out, cond.plain().threshold);
  }
  out += '}';
}

void append_metrics(std::string& out, const RuleMetrics& m) {
  out += "{\"cl\":";
  append_double(out, m.cl);
  out += ",\"cp\":";
  append_double(out, m.cp);
  out += ",\"cpi\":";
  append_double(out, m.cpi);
  out += ",\"cr\":";
  append_double(out, m.cr);
  out += ",\"f_score\":";
  append_double(out, m.f_score);
  out += ",\"pi\":";
  append_double(out, m.pi);
  out += ",\"precision\":";
  append_double(out, m.precision);
  out += ",\"recall\":";
  append_double(out, m.recall);
  out += '}';
}

}  // namespace

std::string ruleset_to_json(const RuleSet& set) {
  std::string out = "{";
  if (!set.encodings.empty()) {
    // Tables are emitted in feature-name order so the bytes do not depend on
    // dataset column order.
    std::vector<size_t> order(set.encodings.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return set.encodings[a].feature < set.encodings[b].feature;
    });
    out += "\"encodings\":{";
    for (size_t i = 0; i < order.size(); ++i) {
      if (i) out += ',';
      const CategoryEncoding& table = set.encodings[order[i]];
      append_escaped(out, table.feature);
      out += ":{";
      bool first = true;
      for (const auto& [value, count] : table.counts) {
        if (!first) out += ',';
        first = false;
        append_escaped(out, value);
        out += ':';
        append_double(out, count);
      }
      out += '}';
    }
    out += "},";
  }
  out += "\"params\":{\"beta\":";
  append_double(out, set.params.beta);
  out += ",\"max_depth\":";
  out += std::to_string(set.params.max_depth);
  out += ",\"pruning_min\":";
  append_double(out, set.params.pruning_min);
  out += ",\"tree_number\":";
  out += std::to_string(set.params.tree_number);
  out += "},\"rules\":[";
  const bool with_metrics = set.metrics.size() == set.rules.size();
  for (size_t i = 0; i < set.rules.size(); ++i) {
    if (i) out += ',';
    out += "{\"conditions\":[";
    for (size_t c = 0; c < set.rules[i].conditions.size(); ++c) {
      if (c) out += ',';
      append_condition(out, set.rules[i].conditions[c]);
    }
    out += ']';
    if (with_metrics) {
      out += ",\"metrics\":";
      append_metrics(out, set.metrics[i]);
    }
    out += '}';
  }
  out += "],\"version\":1}\n";
  return out;
}

RuleSet ruleset_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(Errc::SchemaViolation, "rule-set file is not valid JSON");
  }
  return ruleset_from_json_value(j);
}

}  // namespace fedfeare
