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
#include <map>
#include <string>

#include "fedfeare/dataset.hpp"

namespace fedfeare {

// How to interpret a CSV. Column kinds are inferred: a column is numeric
// when every non-empty cell parses as a double, else categorical; overrides
// force a kind, and cells that then fail to parse become missing. Without an
// id column, row numbers ("0", "1", ...) are the instance ids.
struct DataSchema {
  std::string label_column;  // empty: unlabeled data
  std::string id_column;     // empty: synthesize ids
  std::map<std::string, FeatureKind> kind_overrides;
};

// Loads a comma-separated file with a header row. Cells are taken verbatim
// (no quoting rules); an empty cell is a missing value. Labels must be
// exactly "0" or "1" (Error{LabelDomain}), the configured columns must
// exist (Error{MissingColumn}), and ids must be unique (Error{DuplicateId}).
Dataset load_csv(const std::string& path, const DataSchema& schema);
Dataset load_csv_stream(std::istream& in, const DataSchema& schema);

// Writes a dataset back out: id column first, then features, then the label
// when present. Numerics print with 17 significant digits; missing cells
// print empty.
void write_csv(const Dataset& data, const std::string& path,
               const std::string& label_column = "label",
               const std::string& id_column = "id");

}  // namespace fedfeare
