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

#include "fedfeare/synthetic.hpp"

#include <cmath>
#include <random>

#include "fedfeare/error.hpp"

namespace fedfeare {

namespace {

// 53-bit uniform double in [0, 1) from a raw 64-bit draw; identical on
// every platform, unlike std::uniform_real_distribution.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Rule> auto_plant(const SyntheticSpec& spec) {
  if (spec.auto_rules < 1 || spec.rule_depth < 1) {
    throw Error(Errc::Generation, "auto-planting needs rules and depth >= 1");
  }
  if (spec.auto_rules * spec.rule_depth > spec.n_features) {
    throw Error(Errc::Generation,
                "not enough features for disjoint planted rules");
  }
  const double per_rule =
      spec.positive_rate / static_cast<double>(spec.auto_rules);
  std::vector<Rule> rules;
  for (int r = 0; r < spec.auto_rules; ++r) {
    Rule rule;
    std::vector<double> sides(spec.rule_depth);
    if (spec.value_levels > 0) {
      const double lvl = spec.value_levels;
      // Work in whole level cells so every box edge is a level boundary.
      double cells_d = per_rule * std::pow(lvl, spec.rule_depth);
      long long remaining = std::llround(cells_d);
      if (remaining < 1) {
        throw Error(Errc::Generation,
                    "positive-rate target below one grid cell");
      }
      for (int d = 0; d < spec.rule_depth; ++d) {
        long long j;
        if (d + 1 == spec.rule_depth) {
          j = remaining;
        } else {
          j = std::llround(
              std::pow(static_cast<double>(remaining),
                       1.0 / static_cast<double>(spec.rule_depth - d)));
        }
        j = std::max<long long>(1, std::min<long long>(j, spec.value_levels));
        sides[d] = static_cast<double>(j) / lvl;
        remaining = std::max<long long>(
            1, std::llround(static_cast<double>(remaining) /
                            static_cast<double>(j)));
      }
    } else {
      double side =
          std::pow(per_rule, 1.0 / static_cast<double>(spec.rule_depth));
      if (!(side > 0.0) || side >= 1.0) {
        throw Error(Errc::Generation, "positive-rate target unsatisfiable");
      }
      for (double& s : sides) s = side;
    }
    for (int d = 0; d < spec.rule_depth; ++d) {
      int f = r * spec.rule_depth + d;
      Condition cond;
      if (d == 0) {
        cond.direction = Direction::GT;
        cond.term = Condition::Plain{"f" + std::to_string(f),
                                     1.0 - sides[d]};
      } else {
        cond.direction = Direction::LE;
        cond.term = Condition::Plain{"f" + std::to_string(f), sides[d]};
      }
      rule.conditions.push_back(std::move(cond));
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

}  // namespace

SyntheticData gen_synthetic(const SyntheticSpec& spec) {
  if (spec.n_rows < 1 || spec.n_features < 1) {
    throw Error(Errc::Generation, "need at least one row and one feature");
  }
  if (!(spec.positive_rate > 0.0) || spec.positive_rate > 0.5) {
    throw Error(Errc::Generation, "positive rate must be in (0, 0.5]");
  }
  if (spec.noise_rate < 0.0 || spec.noise_rate >= 1.0) {
    throw Error(Errc::Generation, "noise rate must be in [0, 1)");
  }
  if (spec.value_levels < 0) {
    throw Error(Errc::Generation, "value_levels must be >= 0");
  }

  std::vector<Rule> rules =
      spec.planted_rules.empty() ? auto_plant(spec) : spec.planted_rules;

  Dataset data;
  for (int f = 0; f < spec.n_features; ++f) {
    data.feature_names.push_back("f" + std::to_string(f));
    data.feature_kinds.push_back(FeatureKind::Numeric);
    data.numeric.emplace_back();
    data.numeric.back().reserve(spec.n_rows);
    data.categorical.emplace_back();
  }

  std::mt19937_64 feature_rng(spec.seed);
  // Noise draws come from their own stream, so the feature matrix is
  // byte-identical across noise settings for a fixed seed.
  std::mt19937_64 noise_rng(spec.seed ^ 0x9e3779b97f4a7c15ull);

  for (uint64_t r = 0; r < spec.n_rows; ++r) {
    data.instance_ids.push_back(std::to_string(r));
    for (int f = 0; f < spec.n_features; ++f) {
      double v;
      if (spec.value_levels > 0) {
        uint64_t level = feature_rng() % static_cast<uint64_t>(spec.value_levels);
        v = (static_cast<double>(level) + 0.5) /
            static_cast<double>(spec.value_levels);
      } else {
        v = unit_double(feature_rng);
      }
      data.numeric[f].push_back(v);
    }
  }

  std::vector<uint8_t> clean(spec.n_rows, 0);
  for (uint32_t r = 0; r < spec.n_rows; ++r) {
    for (const Rule& rule : rules) {
      if (rule_covers(data, rule, r)) {
        clean[r] = 1;
        break;
      }
    }
  }

  uint64_t clean_positives = 0;
  for (uint8_t y : clean) clean_positives += y;
  if (clean_positives == 0) {
    throw Error(Errc::Generation, "planted rules cover no rows");
  }

  std::vector<uint8_t> noisy = clean;
  uint64_t flipped = 0;
  if (spec.noise_rate > 0.0) {
    for (uint32_t r = 0; r < spec.n_rows; ++r) {
      if (clean[r] == 1 && unit_double(noise_rng) < spec.noise_rate) {
        noisy[r] = 0;
        ++flipped;
      }
    }
  }
  data.labels = std::move(noisy);

  SyntheticData out;
  out.data = std::move(data);
  out.truth.rules = std::move(rules);
  out.clean_labels = std::move(clean);
  out.flipped = flipped;
  return out;
}

}  // namespace fedfeare
