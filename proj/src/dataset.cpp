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

#include "fedfeare/dataset.hpp"

#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "fedfeare/error.hpp"

namespace fedfeare {

uint64_t Dataset::positive_count() const {
  if (!labels) return 0;
  uint64_t n = 0;
  for (uint8_t y : *labels) n += y;
  return n;
}

uint64_t Dataset::positive_count(std::span<const uint32_t> rows) const {
  if (!labels) return 0;
  uint64_t n = 0;
  for (uint32_t r : rows) n += (*labels)[r];
  return n;
}

int Dataset::feature_index(std::string_view name) const {
  for (size_t f = 0; f < feature_names.size(); ++f) {
    if (feature_names[f] == name) return static_cast<int>(f);
  }
  return -1;
}

void Dataset::check() const {
  const size_t rows = n_rows();
  const size_t feats = n_features();
  if (feature_kinds.size() != feats || numeric.size() != feats ||
      categorical.size() != feats) {
    throw Error(Errc::InvalidData, "feature arrays disagree on feature count");
  }
  std::set<std::string> names(feature_names.begin(), feature_names.end());
  if (names.size() != feats) {
    throw Error(Errc::InvalidData, "duplicate feature name");
  }
  for (size_t f = 0; f < feats; ++f) {
    if (feature_kinds[f] == FeatureKind::Numeric) {
      if (numeric[f].size() != rows || !categorical[f].empty()) {
        throw Error(Errc::InvalidData,
                    "numeric column '" + feature_names[f] + "' has wrong shape");
      }
      for (double v : numeric[f]) {
        // NaN is a missing cell; infinities have no defensible ordering.
        if (std::isinf(v)) {
          throw Error(Errc::InvalidData,
                      "infinite value in column '" + feature_names[f] + "'");
        }
      }
    } else {
      if (categorical[f].size() != rows || !numeric[f].empty()) {
        throw Error(Errc::InvalidData, "categorical column '" +
                                           feature_names[f] +
                                           "' has wrong shape");
      }
    }
  }
  if (labels && labels->size() != rows) {
    throw Error(Errc::InvalidData, "label column has wrong length");
  }
  if (labels) {
    for (uint8_t y : *labels) {
      if (y > 1) throw Error(Errc::InvalidData, "label outside {0, 1}");
    }
  }
  std::unordered_set<std::string> seen;
  seen.reserve(rows);
  for (const std::string& id : instance_ids) {
    if (!seen.insert(id).second) {
      throw Error(Errc::DuplicateId, "instance id '" + id + "' appears twice");
    }
  }
}

Dataset encode_categoricals(const Dataset& data) {
  if (data.n_rows() == 0) {
    throw Error(Errc::InvalidData, "cannot fit encodings on an empty dataset");
  }
  Dataset out = data;
  for (size_t f = 0; f < data.n_features(); ++f) {
    if (data.feature_kinds[f] != FeatureKind::Categorical) continue;
    CategoryEncoding enc;
    enc.feature = data.feature_names[f];
    for (const std::string& v : data.categorical[f]) enc.counts[v] += 1.0;
    std::vector<double> column;
    column.reserve(data.n_rows());
    for (const std::string& v : data.categorical[f]) {
      column.push_back(enc.encode(v));
    }
    out.feature_kinds[f] = FeatureKind::Numeric;
    out.numeric[f] = std::move(column);
    out.categorical[f].clear();
    out.encodings.push_back(std::move(enc));
  }
  return out;
}

Dataset apply_encodings(const Dataset& data,
                        const std::vector<CategoryEncoding>& encodings) {
  std::unordered_map<std::string, const CategoryEncoding*> by_name;
  for (const CategoryEncoding& enc : encodings) by_name[enc.feature] = &enc;
  Dataset out = data;
  for (size_t f = 0; f < data.n_features(); ++f) {
    if (data.feature_kinds[f] != FeatureKind::Categorical) continue;
    auto it = by_name.find(data.feature_names[f]);
    if (it == by_name.end()) {
      throw Error(Errc::InvalidRule, "no encoding table for feature '" +
                                         data.feature_names[f] + "'");
    }
    std::vector<double> column;
    column.reserve(data.n_rows());
    for (const std::string& v : data.categorical[f]) {
      column.push_back(it->second->encode(v));
    }
    out.feature_kinds[f] = FeatureKind::Numeric;
    out.numeric[f] = std::move(column);
    out.categorical[f].clear();
  }
  return out;
}

Dataset subset_rows(const Dataset& data, std::span<const uint32_t> rows) {
  Dataset out;
  out.feature_names = data.feature_names;
  out.feature_kinds = data.feature_kinds;
  out.numeric.resize(data.n_features());
  out.categorical.resize(data.n_features());
  for (size_t f = 0; f < data.n_features(); ++f) {
    if (data.feature_kinds[f] == FeatureKind::Numeric) {
      out.numeric[f].reserve(rows.size());
      for (uint32_t r : rows) out.numeric[f].push_back(data.numeric[f][r]);
    } else {
      out.categorical[f].reserve(rows.size());
      for (uint32_t r : rows) out.categorical[f].push_back(data.categorical[f][r]);
    }
  }
  if (data.labels) {
    std::vector<uint8_t> y;
    y.reserve(rows.size());
    for (uint32_t r : rows) y.push_back((*data.labels)[r]);
    out.labels = std::move(y);
  }
  out.instance_ids.reserve(rows.size());
  for (uint32_t r : rows) out.instance_ids.push_back(data.instance_ids[r]);
  return out;
}

Dataset subset_columns(const Dataset& data, std::span<const int> features,
                       bool keep_labels) {
  Dataset out;
  for (int f : features) {
    if (f < 0 || static_cast<size_t>(f) >= data.n_features()) {
      throw Error(Errc::InvalidData, "feature index out of range");
    }
    out.feature_names.push_back(data.feature_names[f]);
    out.feature_kinds.push_back(data.feature_kinds[f]);
    out.numeric.push_back(data.numeric[f]);
    out.categorical.push_back(data.categorical[f]);
  }
  if (keep_labels && data.labels) out.labels = data.labels;
  out.instance_ids = data.instance_ids;
  return out;
}

}  // namespace fedfeare
