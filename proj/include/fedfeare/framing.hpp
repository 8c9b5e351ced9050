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

#include <string>
#include <string_view>

#include "fedfeare/message.hpp"

namespace fedfeare {

inline constexpr std::string_view kProtocolVersion = "fedfeare/1";

// One frame per line: a JSON object with keys proto, session, seq, kind,
// body, serialized with sorted keys so identical messages are identical
// bytes. The returned string carries no trailing newline; transports add
// the line terminator.
std::string encode_frame(const ProtocolMessage& msg);

// Parses one line. Throws Error{MalformedFrame} on bad JSON, missing or
// mistyped fields, or an unknown kind, and Error{VersionMismatch} when
// proto is not "fedfeare/1".
ProtocolMessage decode_frame(std::string_view line);

}  // namespace fedfeare
