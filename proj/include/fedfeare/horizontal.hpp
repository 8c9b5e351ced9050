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
#include <string>
#include <vector>

#include "fedfeare/channel.hpp"
#include "fedfeare/vertical.hpp"

namespace fedfeare {

struct HorizontalConfig {
  HyperParams params;
  unsigned key_bits = 256;
  uint64_t seed = 1;
  std::string session = "horizontal";
};

// Row-split training, aggregation side. The coordinator holds the keypair
// and no data. It collects each guest's per-feature distinct values once,
// fixes the global candidate grid from their union, then per depth runs one
// masked-histogram ring pass per feature: a random mask is encrypted,
// every guest folds in its fresh-encrypted local counts, and the coordinator
// unmasks only the aggregate. Chosen conditions are broadcast in plaintext.
// Guests are addressed in ring order: guests[0] receives each masked
// histogram first and guests.back() returns it.
RuleSet run_horizontal_coordinator(const std::vector<Channel*>& guests,
                                   const HorizontalConfig& config,
                                   FedReport* report = nullptr);

// Channels a guest participates through. For the first guest ring_in is the
// coordinator channel itself; for the last, ring_out is.
struct GuestEndpoints {
  Channel* coordinator = nullptr;
  Channel* ring_in = nullptr;
  Channel* ring_out = nullptr;
};

// Row-split training, data-holder side. Maintains residual and working row
// sets by applying broadcast conditions locally and contributes encrypted
// counts to each ring pass. Returns the final broadcast rule set.
RuleSet run_horizontal_guest(const GuestEndpoints& endpoints,
                             const Dataset& data, uint64_t seed);

// The grid the coordinator fixes: per-feature midpoints of the union of all
// guests' distinct values. Exposed so a single-table run can reproduce a
// federated one exactly.
CandidateGrid merge_candidate_grid(
    const std::vector<std::vector<std::vector<double>>>& per_guest_values);

// Per-feature sorted distinct non-missing values, the guest's one-time
// announcement.
std::vector<std::vector<double>> distinct_feature_values(const Dataset& data);

}  // namespace fedfeare
