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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fedfeare {

enum class FeatureKind { Numeric, Categorical };

// Frequency table for one categorical feature. Each value maps to its
// occurrence count in the data it was fitted on; unseen values encode to 0.
struct CategoryEncoding {
  std::string feature;
  std::map<std::string, double> counts;

  double encode(const std::string& value) const {
    auto it = counts.find(value);
    return it == counts.end() ? 0.0 : it->second;
  }
};

// Column-major table of features with optional binary labels.
// For a numeric feature, numeric[f] holds one double per row and NaN marks a
// missing cell; categorical[f] is empty. For a categorical feature the roles
// swap. instance_ids are opaque, unique, and row-aligned.
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<FeatureKind> feature_kinds;
  std::vector<std::vector<double>> numeric;
  std::vector<std::vector<std::string>> categorical;
  std::optional<std::vector<uint8_t>> labels;
  std::vector<std::string> instance_ids;

  // Frequency tables fitted by encode_categoricals, empty otherwise.
  std::vector<CategoryEncoding> encodings;

  size_t n_rows() const { return instance_ids.size(); }
  size_t n_features() const { return feature_names.size(); }
  bool has_labels() const { return labels.has_value(); }

  uint64_t positive_count() const;
  uint64_t positive_count(std::span<const uint32_t> rows) const;

  // Index of a feature by name, or -1 when absent.
  int feature_index(std::string_view name) const;

  // Throws Error{InvalidData} when any structural invariant is broken:
  // ragged columns, duplicate ids or feature names, infinite values,
  // or a label outside {0, 1}. NaN is legal (missing), infinities are not.
  void check() const;
};

// Replaces every categorical column with its frequency encoding. The fitted
// tables are recorded in the returned dataset's `encodings` so a model can
// reapply them at prediction time. Numeric columns and row order are
// untouched. Requires at least one row.
Dataset encode_categoricals(const Dataset& data);

// Applies previously fitted tables (matched by feature name) to a dataset
// that still has categorical columns. Unseen values encode to 0.
Dataset apply_encodings(const Dataset& data,
                        const std::vector<CategoryEncoding>& encodings);

// Row and column views used by tests and the federation simulator.
Dataset subset_rows(const Dataset& data, std::span<const uint32_t> rows);
Dataset subset_columns(const Dataset& data, std::span<const int> features,
                       bool keep_labels);

}  // namespace fedfeare
