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

#include <nlohmann/json.hpp>

namespace fedfeare {

// Closed vocabulary of protocol messages. Both federation modes draw from
// this one list; an unknown kind on the wire is a malformed frame.
enum class MsgKind {
  SessionStart,
  PublicKey,
  EncryptedLabels,
  ScanRequest,
  ScanReply,
  SplitChosen,
  CoveredSet,
  CandidateValues,
  MaskedHistogram,
  HistogramReturn,
  ConditionBroadcast,
  RuleSetBroadcast,
  SessionEnd,
};

const char* msg_kind_name(MsgKind kind);
MsgKind msg_kind_from_name(const std::string& name);  // throws MalformedFrame

// One protocol frame before encoding. seq is per (session, sender) and
// strictly increasing; receivers enforce that.
struct ProtocolMessage {
  std::string session;
  uint64_t seq = 0;
  MsgKind kind = MsgKind::SessionStart;
  nlohmann::json body = nlohmann::json::object();
};

// Peers report failures with SessionEnd{status: "error"} before throwing
// locally, so the other side can surface the same code instead of hanging.
ProtocolMessage make_error_end(const std::string& session, uint64_t seq,
                               const std::string& code,
                               const std::string& message);

// Throws when a received SessionEnd carries an error status.
void raise_if_error_end(const ProtocolMessage& msg);

}  // namespace fedfeare
