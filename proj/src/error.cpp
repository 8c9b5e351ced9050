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

#include "fedfeare/error.hpp"

namespace fedfeare {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidData: return "invalid-data";
    case Errc::InvalidRule: return "invalid-rule";
    case Errc::OpaqueCondition: return "opaque-condition";
    case Errc::MissingLabels: return "missing-labels";
    case Errc::Precondition: return "precondition";
    case Errc::PlaintextRange: return "plaintext-range";
    case Errc::KeygenFailure: return "keygen-failure";
    case Errc::KeyMismatch: return "key-mismatch";
    case Errc::MalformedFrame: return "malformed-frame";
    case Errc::VersionMismatch: return "version-mismatch";
    case Errc::Transport: return "transport";
    case Errc::ChannelClosed: return "channel-closed";
    case Errc::Protocol: return "protocol";
    case Errc::ProtocolIntegrity: return "integrity";
    case Errc::Alignment: return "alignment";
    case Errc::StaleModel: return "stale-model";
    case Errc::LabelDomain: return "label-domain";
    case Errc::DuplicateId: return "duplicate-id";
    case Errc::MissingColumn: return "missing-column";
    case Errc::Generation: return "generation";
    case Errc::SchemaViolation: return "schema-violation";
    case Errc::Usage: return "usage";
  }
  return "unknown";
}

}  // namespace fedfeare
