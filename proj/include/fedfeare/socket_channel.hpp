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
#include <memory>
#include <string>

#include "fedfeare/channel.hpp"

namespace fedfeare {

// TCP-backed Channel. Framing is one frame per '\n'-terminated line, so a
// socket transcript is byte-identical to an in-process one. The raw line
// helpers bypass frame recording; process wiring uses them for the one-line
// role handshake that precedes the protocol proper.
class SocketChannel final : public Channel {
 public:
  SocketChannel(std::string name, int fd);
  ~SocketChannel() override;

  void close() override;

  void send_raw_line(const std::string& line);
  std::string recv_raw_line();

 protected:
  void send_line(const std::string& line) override;
  std::string recv_line() override;

 private:
  int fd_;
  std::string buffer_;
};

class SocketListener {
 public:
  ~SocketListener();

  uint16_t port() const { return port_; }

  // Blocks for one inbound connection; `name` labels the accepted channel's
  // send direction for transcripts.
  std::unique_ptr<SocketChannel> accept(const std::string& name);

 private:
  friend std::unique_ptr<SocketListener> socket_listen(
      const std::string& host_port);
  SocketListener(int fd, uint16_t port) : fd_(fd), port_(port) {}

  int fd_;
  uint16_t port_;
};

// "host:port" with port 0 for an ephemeral choice; the bound port is
// reported by the listener. Throws Error{Transport} on failure.
std::unique_ptr<SocketListener> socket_listen(const std::string& host_port);
std::unique_ptr<SocketChannel> socket_connect(const std::string& host_port,
                                              const std::string& name);

}  // namespace fedfeare
