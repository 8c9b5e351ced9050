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

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "fedfeare/framing.hpp"

namespace fedfeare {

struct TranscriptEntry {
  std::string channel;  // send direction, e.g. "active->passive"
  std::string frame;    // the exact bytes that went on the wire
  int64_t micros = 0;   // wall clock at send, for replay files only
};

// Ordered record of every frame sent on named channels. Protocols run in
// strict lockstep, so the per-channel sequence is the complete and
// deterministic transcript of a session; tests grep it for leaks and diff
// it across transports (timestamps excluded).
class TranscriptLog {
 public:
  void append(const std::string& channel, const std::string& frame);
  std::vector<TranscriptEntry> entries() const;
  std::map<std::string, std::vector<std::string>> by_channel() const;

 private:
  mutable std::mutex mu_;
  std::vector<TranscriptEntry> entries_;
};

// One directed endpoint of a reliable, ordered frame stream. send() encodes
// and ships a frame; recv() blocks for the next one. A channel is named for
// its send direction ("B->A"); frames are recorded at the sender, so a
// transcript never depends on receive timing.
class Channel {
 public:
  virtual ~Channel() = default;

  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;

  void send(const ProtocolMessage& msg);

  // Blocks until a frame arrives. Throws Error{ChannelClosed} once the peer
  // has closed and everything queued was consumed, Error{Transport} when the
  // medium fails, and decode errors for corrupt frames.
  ProtocolMessage recv();

  // Closes the send side; the peer's recv() drains then reports closure.
  virtual void close() = 0;

  const std::string& name() const { return name_; }

  // Wiring may only learn who the peer is from a handshake that happens
  // after accept(); renaming is legal until the first recorded send.
  void rename(std::string name) { name_ = std::move(name); }

  void attach_transcript(TranscriptLog* log) { log_ = log; }

 protected:
  explicit Channel(std::string name) : name_(std::move(name)) {}

  virtual void send_line(const std::string& line) = 0;
  virtual std::string recv_line() = 0;

 private:
  std::string name_;
  TranscriptLog* log_ = nullptr;
};

// Two connected in-process endpoints backed by mutex-guarded queues.
// first sends a_to_b and receives b_to_a; second is the mirror image.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_inproc_pair(
    const std::string& a_to_b, const std::string& b_to_a);

}  // namespace fedfeare
