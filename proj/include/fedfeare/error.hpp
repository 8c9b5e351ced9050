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

#include <stdexcept>
#include <string>

namespace fedfeare {

// Every failure the library raises carries one of these codes so callers
// (and the CLI) can react without parsing message text.
enum class Errc {
  InvalidData,        // dataset invariant broken: shape, ids, non-finite values
  InvalidRule,        // rule references an unknown feature or is malformed
  OpaqueCondition,    // plaintext evaluation asked of a party-private split
  MissingLabels,      // operation needs labels and the dataset has none
  Precondition,       // hyper-parameter or argument out of its documented range
  PlaintextRange,     // Paillier plaintext or scalar outside [0, n)
  KeygenFailure,      // could not find a usable prime pair at this bit length
  KeyMismatch,        // ciphertext bound to a different key than supplied
  MalformedFrame,     // wire line is not a well-formed protocol frame
  VersionMismatch,    // frame carries an unsupported protocol version
  Transport,          // channel could not move bytes (socket error, bad address)
  ChannelClosed,      // peer closed and the queue is drained
  Protocol,           // peer sent a message the state machine cannot accept
  ProtocolIntegrity,  // peer's counts are inconsistent with known totals
  Alignment,          // parties disagree on instance ids
  StaleModel,         // opaque split is absent from the passive party's table
  LabelDomain,        // label cell is not "0" or "1"
  DuplicateId,        // instance id appears twice
  MissingColumn,      // configured label or id column is absent from the header
  Generation,         // synthetic-data request is unsatisfiable
  SchemaViolation,    // rule-set JSON does not match the documented schema
  Usage,              // bad command line
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace fedfeare
