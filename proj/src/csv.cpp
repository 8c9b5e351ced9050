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

#include "fedfeare/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "fedfeare/error.hpp"

namespace fedfeare {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + cell.size();
}

}  // namespace

Dataset load_csv_stream(std::istream& in, const DataSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::InvalidData, "file has no header row");
  }
  std::vector<std::string> header = split_line(line);

  int label_col = -1;
  int id_col = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    if (!schema.label_column.empty() && header[i] == schema.label_column) {
      label_col = static_cast<int>(i);
    }
    if (!schema.id_column.empty() && header[i] == schema.id_column) {
      id_col = static_cast<int>(i);
    }
  }
  if (!schema.label_column.empty() && label_col < 0) {
    throw Error(Errc::MissingColumn,
                "label column '" + schema.label_column + "' not in header");
  }
  if (!schema.id_column.empty() && id_col < 0) {
    throw Error(Errc::MissingColumn,
                "id column '" + schema.id_column + "' not in header");
  }
  for (const auto& [name, kind] : schema.kind_overrides) {
    bool found = false;
    for (const std::string& h : header) found = found || h == name;
    if (!found) {
      throw Error(Errc::MissingColumn,
                  "override column '" + name + "' not in header");
    }
  }

  std::vector<int> feature_cols;
  for (size_t i = 0; i < header.size(); ++i) {
    if (static_cast<int>(i) == label_col || static_cast<int>(i) == id_col) {
      continue;
    }
    feature_cols.push_back(static_cast<int>(i));
  }

  std::vector<std::vector<std::string>> raw(feature_cols.size());
  std::vector<std::string> ids;
  std::vector<uint8_t> labels;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw Error(Errc::InvalidData,
                  "row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
    }
    for (size_t f = 0; f < feature_cols.size(); ++f) {
      raw[f].push_back(cells[feature_cols[f]]);
    }
    if (label_col >= 0) {
      const std::string& cell = cells[label_col];
      if (cell != "0" && cell != "1") {
        throw Error(Errc::LabelDomain,
                    "label '" + cell + "' in row " + std::to_string(row));
      }
      labels.push_back(cell == "1" ? 1 : 0);
    }
    ids.push_back(id_col >= 0 ? cells[id_col] : std::to_string(row));
    ++row;
  }

  Dataset data;
  for (size_t f = 0; f < feature_cols.size(); ++f) {
    const std::string& name = header[feature_cols[f]];
    auto override_it = schema.kind_overrides.find(name);
    FeatureKind kind;
    if (override_it != schema.kind_overrides.end()) {
      kind = override_it->second;
    } else {
      kind = FeatureKind::Numeric;
      for (const std::string& cell : raw[f]) {
        double unused;
        if (!cell.empty() && !parse_double(cell, unused)) {
          kind = FeatureKind::Categorical;
          break;
        }
      }
    }
    data.feature_names.push_back(name);
    data.feature_kinds.push_back(kind);
    if (kind == FeatureKind::Numeric) {
      std::vector<double> column;
      column.reserve(raw[f].size());
      for (const std::string& cell : raw[f]) {
        double v;
        // Unparseable cells under a forced-numeric override degrade to
        // missing rather than failing the load.
        column.push_back(parse_double(cell, v)
                             ? v
                             : std::numeric_limits<double>::quiet_NaN());
      }
      data.numeric.push_back(std::move(column));
      data.categorical.emplace_back();
    } else {
      data.numeric.emplace_back();
      data.categorical.push_back(std::move(raw[f]));
    }
  }
  if (label_col >= 0) data.labels = std::move(labels);
  data.instance_ids = std::move(ids);
  data.check();
  return data;
}

Dataset load_csv(const std::string& path, const DataSchema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::InvalidData, "cannot open '" + path + "'");
  }
  return load_csv_stream(in, schema);
}

void write_csv(const Dataset& data, const std::string& path,
               const std::string& label_column,
               const std::string& id_column) {
  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::InvalidData, "cannot write '" + path + "'");
  }
  out << id_column;
  for (const std::string& name : data.feature_names) out << ',' << name;
  if (data.has_labels()) out << ',' << label_column;
  out << '\n';
  char buf[40];
  for (size_t r = 0; r < data.n_rows(); ++r) {
    out << data.instance_ids[r];
    for (size_t f = 0; f < data.n_features(); ++f) {
      out << ',';
      if (data.feature_kinds[f] == FeatureKind::Numeric) {
        double v = data.numeric[f][r];
        if (!std::isnan(v)) {
          std::snprintf(buf, sizeof(buf), "%.17g", v);
          out << buf;
        }
      } else {
        out << data.categorical[f][r];
      }
    }
    if (data.has_labels()) out << ',' << int((*data.labels)[r]);
    out << '\n';
  }
}

}  // namespace fedfeare
