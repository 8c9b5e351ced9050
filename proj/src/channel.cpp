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

#include "fedfeare/channel.hpp"

#include <chrono>
#include <condition_variable>
#include <deque>

#include "fedfeare/error.hpp"

namespace fedfeare {

void TranscriptLog::append(const std::string& channel,
                           const std::string& frame) {
  int64_t micros = std::chrono::duration_cast<std::chrono::microseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  std::lock_guard<std::mutex> lock(mu_);
  entries_.push_back(TranscriptEntry{channel, frame, micros});
}

std::vector<TranscriptEntry> TranscriptLog::entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

std::map<std::string, std::vector<std::string>> TranscriptLog::by_channel()
    const {
  std::lock_guard<std::mutex> lock(mu_);
  std::map<std::string, std::vector<std::string>> out;
  for (const TranscriptEntry& e : entries_) {
    out[e.channel].push_back(e.frame);
  }
  return out;
}

void Channel::send(const ProtocolMessage& msg) {
  std::string frame = encode_frame(msg);
  send_line(frame);
  if (log_) log_->append(name_, frame);
}

ProtocolMessage Channel::recv() { return decode_frame(recv_line()); }

namespace {

// Single-direction frame queue shared by two inproc endpoints.
struct InprocQueue {
  std::mutex mu;
  std::condition_variable ready;
  std::deque<std::string> lines;
  bool closed = false;

  void push(const std::string& line) {
    {
      std::lock_guard<std::mutex> lock(mu);
      if (closed) throw Error(Errc::Transport, "send on a closed channel");
      lines.push_back(line);
    }
    ready.notify_one();
  }

  std::string pop() {
    std::unique_lock<std::mutex> lock(mu);
    ready.wait(lock, [this] { return !lines.empty() || closed; });
    if (lines.empty()) {
      throw Error(Errc::ChannelClosed, "peer closed the channel");
    }
    std::string line = std::move(lines.front());
    lines.pop_front();
    return line;
  }

  void close() {
    {
      std::lock_guard<std::mutex> lock(mu);
      closed = true;
    }
    ready.notify_all();
  }
};

class InprocChannel final : public Channel {
 public:
  InprocChannel(std::string name, std::shared_ptr<InprocQueue> out,
                std::shared_ptr<InprocQueue> in)
      : Channel(std::move(name)), out_(std::move(out)), in_(std::move(in)) {}

  ~InprocChannel() override { out_->close(); }

  void close() override { out_->close(); }

 protected:
  void send_line(const std::string& line) override { out_->push(line); }
  std::string recv_line() override { return in_->pop(); }

 private:
  std::shared_ptr<InprocQueue> out_;
  std::shared_ptr<InprocQueue> in_;
};

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_inproc_pair(
    const std::string& a_to_b, const std::string& b_to_a) {
  auto forward = std::make_shared<InprocQueue>();
  auto backward = std::make_shared<InprocQueue>();
  auto first = std::make_unique<InprocChannel>(a_to_b, forward, backward);
  auto second = std::make_unique<InprocChannel>(b_to_a, backward, forward);
  return {std::move(first), std::move(second)};
}

}  // namespace fedfeare
