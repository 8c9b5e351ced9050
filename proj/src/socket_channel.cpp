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

#include "fedfeare/socket_channel.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "fedfeare/error.hpp"

namespace fedfeare {

namespace {

std::pair<std::string, uint16_t> split_host_port(const std::string& spec) {
  size_t colon = spec.rfind(':');
  if (colon == std::string::npos || colon + 1 == spec.size()) {
    throw Error(Errc::Transport, "address must look like host:port");
  }
  std::string host = spec.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(Errc::Transport, "bad port in '" + spec + "'");
  }
  if (port < 0 || port > 65535) {
    throw Error(Errc::Transport, "port out of range in '" + spec + "'");
  }
  return {host.empty() ? "127.0.0.1" : host, static_cast<uint16_t>(port)};
}

sockaddr_in resolve(const std::string& host, uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    hostent* ent = gethostbyname(host.c_str());
    if (!ent || ent->h_addrtype != AF_INET) {
      throw Error(Errc::Transport, "cannot resolve host '" + host + "'");
    }
    std::memcpy(&addr.sin_addr, ent->h_addr_list[0], sizeof(in_addr));
  }
  return addr;
}

void write_all(int fd, const std::string& data) {
  size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent,
                       MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::Transport,
                  std::string("send failed: ") + std::strerror(errno));
    }
    sent += static_cast<size_t>(n);
  }
}

}  // namespace

SocketChannel::SocketChannel(std::string name, int fd)
    : Channel(std::move(name)), fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

SocketChannel::~SocketChannel() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void SocketChannel::close() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
}

void SocketChannel::send_raw_line(const std::string& line) {
  send_line(line);
}

std::string SocketChannel::recv_raw_line() { return recv_line(); }

void SocketChannel::send_line(const std::string& line) {
  write_all(fd_, line + "\n");
}

std::string SocketChannel::recv_line() {
  for (;;) {
    size_t newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    char chunk[4096];
    ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::Transport,
                  std::string("recv failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      if (!buffer_.empty()) {
        throw Error(Errc::MalformedFrame, "stream ended mid-frame");
      }
      throw Error(Errc::ChannelClosed, "peer closed the connection");
    }
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

SocketListener::~SocketListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<SocketChannel> SocketListener::accept(
    const std::string& name) {
  for (;;) {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return std::make_unique<SocketChannel>(name, fd);
    if (errno == EINTR) continue;
    throw Error(Errc::Transport,
                std::string("accept failed: ") + std::strerror(errno));
  }
}

std::unique_ptr<SocketListener> socket_listen(const std::string& host_port) {
  auto [host, port] = split_host_port(host_port);
  sockaddr_in addr = resolve(host, port);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) {
    throw Error(Errc::Transport,
                std::string("socket failed: ") + std::strerror(errno));
  }
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    int saved = errno;
    ::close(fd);
    throw Error(Errc::Transport,
                std::string("bind failed: ") + std::strerror(saved));
  }
  if (::listen(fd, 16) != 0) {
    int saved = errno;
    ::close(fd);
    throw Error(Errc::Transport,
                std::string("listen failed: ") + std::strerror(saved));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len) != 0) {
    int saved = errno;
    ::close(fd);
    throw Error(Errc::Transport,
                std::string("getsockname failed: ") + std::strerror(saved));
  }
  return std::unique_ptr<SocketListener>(
      new SocketListener(fd, ntohs(bound.sin_port)));
}

std::unique_ptr<SocketChannel> socket_connect(const std::string& host_port,
                                              const std::string& name) {
  auto [host, port] = split_host_port(host_port);
  sockaddr_in addr = resolve(host, port);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) {
    throw Error(Errc::Transport,
                std::string("socket failed: ") + std::strerror(errno));
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    int saved = errno;
    ::close(fd);
    throw Error(Errc::Transport,
                std::string("connect failed: ") + std::strerror(saved));
  }
  return std::make_unique<SocketChannel>(name, fd);
}

}  // namespace fedfeare
