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

// Internal helpers shared by the two protocol implementations.

#pragma once

#include <map>
#include <string>

#include "fedfeare/channel.hpp"
#include "fedfeare/dataset.hpp"
#include "fedfeare/error.hpp"
#include "fedfeare/vertical.hpp"

namespace fedfeare::detail {

// Wraps a channel with session bookkeeping: outbound frames get consecutive
// sequence numbers, inbound ones must strictly increase per session.
class Peer {
 public:
  Peer(Channel& ch, std::string session, FedReport* report)
      : ch_(ch), session_(std::move(session)), report_(report) {}

  const std::string& session() const { return session_; }

  // Responders adopt the initiator's session name once it is known.
  void set_session(const std::string& session) { session_ = session; }

  void send(MsgKind kind, nlohmann::json body) {
    ProtocolMessage msg;
    msg.session = session_;
    msg.seq = next_seq_++;
    msg.kind = kind;
    msg.body = std::move(body);
    ch_.send(msg);
    if (report_) ++report_->frames_sent;
  }

  void send_error(const std::string& code, const std::string& text) {
    try {
      ch_.send(make_error_end(session_, next_seq_++, code, text));
    } catch (...) {
      // The peer may already be gone; the local throw still happens.
    }
  }

  ProtocolMessage recv() {
    ProtocolMessage msg = ch_.recv();
    auto it = last_seen_.find(msg.session);
    if (it != last_seen_.end() && msg.seq <= it->second) {
      throw Error(Errc::Protocol, "sequence number did not increase");
    }
    last_seen_[msg.session] = msg.seq;
    if (report_) ++report_->frames_received;
    return msg;
  }

  ProtocolMessage expect(MsgKind kind) {
    ProtocolMessage msg = recv();
    raise_if_error_end(msg);
    if (msg.kind != kind) {
      throw Error(Errc::Protocol,
                  std::string("expected ") + msg_kind_name(kind) + ", got " +
                      msg_kind_name(msg.kind));
    }
    return msg;
  }

 private:
  Channel& ch_;
  std::string session_;
  uint64_t next_seq_ = 0;
  std::map<std::string, uint64_t> last_seen_;
  FedReport* report_;
};

// Wire name for the error codes a peer is told about; everything without a
// dedicated name degrades to the generic "protocol".
inline const char* wire_code(Errc code) {
  switch (code) {
    case Errc::Alignment: return "alignment";
    case Errc::StaleModel: return "stale-model";
    case Errc::ProtocolIntegrity: return "integrity";
    default: return "protocol";
  }
}

inline void require_all_numeric(const Dataset& data) {
  for (FeatureKind kind : data.feature_kinds) {
    if (kind != FeatureKind::Numeric) {
      throw Error(Errc::Precondition,
                  "federated training needs numeric features; encode first");
    }
  }
}

inline uint64_t parse_count(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(Errc::MalformedFrame,
                std::string("count field '") + key + "' missing");
  }
  const std::string& s = j[key].get_ref<const std::string&>();
  if (s.empty()) throw Error(Errc::MalformedFrame, "empty count");
  uint64_t value = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') {
      throw Error(Errc::MalformedFrame, "count is not a decimal string");
    }
    value = value * 10 + static_cast<uint64_t>(ch - '0');
  }
  return value;
}

}  // namespace fedfeare::detail
