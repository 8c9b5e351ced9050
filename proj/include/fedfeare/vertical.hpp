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
#include <string>
#include <vector>

#include "fedfeare/channel.hpp"
#include "fedfeare/inducer.hpp"

namespace fedfeare {

// What a federated trainer can say about its run beyond the rule set.
struct FedReport {
  uint64_t total_rows = 0;
  uint64_t total_positives = 0;
  std::vector<SplitStats> per_rule;
  uint64_t frames_sent = 0;
  uint64_t frames_received = 0;
};

struct VerticalConfig {
  HyperParams params;
  unsigned key_bits = 256;
  uint64_t seed = 1;
  std::string session = "vertical";
  std::string passive_party = "A";
};

// Thresholds the passive party memorized for splits the active party chose,
// keyed by (local feature id, split index). The split index counts chosen
// splits per feature across the session; scan-relative candidate indices
// would alias when two scans elect the same position.
struct PassiveSplitTable {
  std::map<std::pair<int, int>, double> thresholds;
};

// Feature-split training, label-holder side. Drives the whole session over
// one channel: ships encrypted labels once, then per depth asks the peer to
// score its candidate splits on the current working subset (identified by
// plaintext instance ids; that subset membership is the protocol's one
// deliberate leak) and merges the replies with its own scan. Peer-side
// features enter the rule as opaque handles.
RuleSet run_vertical_active(Channel& peer, const Dataset& data,
                            const VerticalConfig& config,
                            FedReport* report = nullptr);

// Feature-split training, feature-holder side. Serves scan requests with
// homomorphic label sums per candidate, records the thresholds behind chosen
// splits, and returns them when the session ends. Never sees a label or an
// F-score.
PassiveSplitTable run_vertical_passive(Channel& peer, const Dataset& data);

// Joint prediction for a rule set with opaque conditions: evaluates local
// conditions in place and asks the peer which instances its splits cover.
// One round trip regardless of rule count.
std::vector<uint8_t> joint_predict_vertical(Channel& peer, const RuleSet& set,
                                            const Dataset& local,
                                            const std::string& session =
                                                "vertical.predict");

// Passive-side responder for joint prediction; serves until the peer sends
// SessionEnd or closes the channel.
void serve_vertical_predict(Channel& peer, const Dataset& data,
                            const PassiveSplitTable& table);

// Replaces every opaque condition with the plaintext threshold from the
// passive party's table. Only the tests and the single-host simulator can
// do this, because only they hold both sides.
RuleSet substitute_opaque(const RuleSet& set, const PassiveSplitTable& table,
                          const std::vector<std::string>& passive_features);

}  // namespace fedfeare
