#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qps/port_set.hpp"

namespace qps {

using Slot = std::uint64_t;

struct Packet {
  Slot arrival_slot = 0;
  int dest = 0;
};

// Virtual output queues of an N x N input-queued switch. Queue (i, j) holds
// the arrival slots of packets at input i destined to output j, oldest
// first. Arrival slots are stored in 32 bits, which bounds a run to 2^32
// slots.
class VoqMatrix {
 public:
  static constexpr Slot kMaxSlot = std::numeric_limits<std::uint32_t>::max();

  VoqMatrix() = default;
  explicit VoqMatrix(std::size_t ports)
      : ports_(ports),
        queues_(ports * ports),
        input_backlog_(ports, 0),
        nonempty_outputs_(ports, PortSet(ports)),
        nonempty_inputs_(ports, PortSet(ports)) {}

  std::size_t ports() const { return ports_; }

  void enqueue(int input, int output, Slot arrival_slot) {
    if (arrival_slot > kMaxSlot) throw std::out_of_range("VoqMatrix: arrival slot exceeds 32 bits");
    auto& q = queue(input, output);
    if (!q.empty() && q.back() > arrival_slot)
      throw std::invalid_argument("VoqMatrix::enqueue: arrival slots must be non-decreasing");
    q.push(static_cast<std::uint32_t>(arrival_slot));
    ++input_backlog_[static_cast<std::size_t>(input)];
    ++total_;
    if (q.size() == 1) {
      nonempty_outputs_[static_cast<std::size_t>(input)].set(static_cast<std::size_t>(output));
      nonempty_inputs_[static_cast<std::size_t>(output)].set(static_cast<std::size_t>(input));
    }
  }

  Packet front(int input, int output) const {
    const auto& q = queue(input, output);
    if (q.empty()) throw std::logic_error("VoqMatrix::front: empty queue");
    return {q.front(), output};
  }

  Packet dequeue(int input, int output) {
    auto& q = queue(input, output);
    if (q.empty()) throw std::logic_error("VoqMatrix::dequeue: empty queue");
    Packet p{q.front(), output};
    q.pop();
    --input_backlog_[static_cast<std::size_t>(input)];
    --total_;
    if (q.empty()) {
      nonempty_outputs_[static_cast<std::size_t>(input)].reset(static_cast<std::size_t>(output));
      nonempty_inputs_[static_cast<std::size_t>(output)].reset(static_cast<std::size_t>(input));
    }
    return p;
  }

  // m_j at input i.
  std::uint64_t length(int input, int output) const { return queue(input, output).size(); }
  // m = sum_j m_j at input i.
  std::uint64_t input_backlog(int input) const {
    return input_backlog_.at(static_cast<std::size_t>(input));
  }
  std::uint64_t total_backlog() const { return total_; }

  // W: the longest VOQ currently in the switch.
  std::uint64_t longest() const {
    std::uint64_t w = 0;
    for (const auto& q : queues_) w = std::max<std::uint64_t>(w, q.size());
    return w;
  }

  const PortSet& nonempty_outputs(int input) const {
    return nonempty_outputs_.at(static_cast<std::size_t>(input));
  }
  const PortSet& nonempty_inputs(int output) const {
    return nonempty_inputs_.at(static_cast<std::size_t>(output));
  }

  // Arrival slots of queue (i, j) are non-decreasing front to back.
  bool fifo_ordered(int input, int output) const { return queue(input, output).ordered(); }

 private:
  // Vector-backed FIFO that allocates nothing while empty and compacts its
  // consumed prefix lazily.
  class Fifo {
   public:
    bool empty() const { return head_ == buf_.size(); }
    std::size_t size() const { return buf_.size() - head_; }
    std::uint32_t front() const { return buf_[head_]; }
    std::uint32_t back() const { return buf_.back(); }
    void push(std::uint32_t v) { buf_.push_back(v); }
    void pop() {
      ++head_;
      if (head_ == buf_.size()) {
        buf_.clear();
        head_ = 0;
      } else if (head_ >= 1024 && 2 * head_ >= buf_.size()) {
        buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(head_));
        head_ = 0;
      }
    }
    bool ordered() const {
      for (std::size_t k = head_ + 1; k < buf_.size(); ++k)
        if (buf_[k - 1] > buf_[k]) return false;
      return true;
    }

   private:
    std::vector<std::uint32_t> buf_;
    std::size_t head_ = 0;
  };

  Fifo& queue(int input, int output) { return queues_.at(index(input, output)); }
  const Fifo& queue(int input, int output) const { return queues_.at(index(input, output)); }
  std::size_t index(int input, int output) const {
    if (input < 0 || output < 0 || static_cast<std::size_t>(input) >= ports_ ||
        static_cast<std::size_t>(output) >= ports_)
      throw std::out_of_range("VoqMatrix: port index out of range");
    return static_cast<std::size_t>(input) * ports_ + static_cast<std::size_t>(output);
  }

  std::size_t ports_ = 0;
  std::vector<Fifo> queues_;
  std::vector<std::uint64_t> input_backlog_;
  std::vector<PortSet> nonempty_outputs_;
  std::vector<PortSet> nonempty_inputs_;
  std::uint64_t total_ = 0;
};

}  // namespace qps
