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

#include "fedfeare/message.hpp"

#include <array>

#include "fedfeare/error.hpp"

namespace fedfeare {

namespace {

constexpr std::array<const char*, 13> kKindNames = {
    "SessionStart",   "PublicKey",       "EncryptedLabels", "ScanRequest",
    "ScanReply",      "SplitChosen",     "CoveredSet",      "CandidateValues",
    "MaskedHistogram", "HistogramReturn", "ConditionBroadcast",
    "RuleSetBroadcast", "SessionEnd",
};

}  // namespace

const char* msg_kind_name(MsgKind kind) {
  return kKindNames[static_cast<size_t>(kind)];
}

MsgKind msg_kind_from_name(const std::string& name) {
  for (size_t i = 0; i < kKindNames.size(); ++i) {
    if (name == kKindNames[i]) return static_cast<MsgKind>(i);
  }
  throw Error(Errc::MalformedFrame, "unknown message kind '" + name + "'");
}

ProtocolMessage make_error_end(const std::string& session, uint64_t seq,
                               const std::string& code,
                               const std::string& message) {
  ProtocolMessage msg;
  msg.session = session;
  msg.seq = seq;
  msg.kind = MsgKind::SessionEnd;
  msg.body = {{"status", "error"}, {"code", code}, {"message", message}};
  return msg;
}

void raise_if_error_end(const ProtocolMessage& msg) {
  if (msg.kind != MsgKind::SessionEnd) return;
  if (!msg.body.contains("status") || msg.body["status"] != "error") return;
  std::string code = msg.body.value("code", "protocol");
  std::string text = msg.body.value("message", "peer reported an error");
  Errc errc = Errc::Protocol;
  if (code == "alignment") errc = Errc::Alignment;
  if (code == "stale-model") errc = Errc::StaleModel;
  if (code == "integrity") errc = Errc::ProtocolIntegrity;
  throw Error(errc, "peer: " + text);
}

}  // namespace fedfeare
