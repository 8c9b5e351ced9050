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

#include "fedfeare/framing.hpp"

#include "fedfeare/error.hpp"

namespace fedfeare {

std::string encode_frame(const ProtocolMessage& msg) {
  nlohmann::json j;
  j["proto"] = kProtocolVersion;
  j["session"] = msg.session;
  j["seq"] = msg.seq;
  j["kind"] = msg_kind_name(msg.kind);
  j["body"] = msg.body;
  // nlohmann objects iterate in key order, so dump() is canonical bytes.
  return j.dump();
}

ProtocolMessage decode_frame(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::MalformedFrame, "frame is not a JSON object");
  }
  if (!j.contains("proto") || !j["proto"].is_string()) {
    throw Error(Errc::MalformedFrame, "frame lacks a proto field");
  }
  if (j["proto"].get<std::string>() != kProtocolVersion) {
    throw Error(Errc::VersionMismatch,
                "unsupported protocol '" + j["proto"].get<std::string>() + "'");
  }
  if (!j.contains("session") || !j["session"].is_string() ||
      !j.contains("seq") || !j["seq"].is_number_unsigned() ||
      !j.contains("kind") || !j["kind"].is_string() || !j.contains("body") ||
      !j["body"].is_object()) {
    throw Error(Errc::MalformedFrame, "frame field missing or mistyped");
  }
  ProtocolMessage msg;
  msg.session = j["session"].get<std::string>();
  msg.seq = j["seq"].get<uint64_t>();
  msg.kind = msg_kind_from_name(j["kind"].get<std::string>());
  msg.body = j["body"];
  return msg;
}

}  // namespace fedfeare
