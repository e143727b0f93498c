#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qps/bitmap.hpp"
#include "qps/matching.hpp"

namespace qps {

// The T x N table of matchings under computation. Cell (t, j) holds the
// input that output j is paired with at relative slot t of the current
// batch or window, or kUnmatched. Per-port availability bitmaps mirror the
// rows: bit t of a port is 0 iff the port appears in row t.
//
// Rows are kept in a ring so that sliding the window costs O(N).
class JointCalendar {
 public:
  JointCalendar() = default;
  JointCalendar(std::size_t slots, std::size_t ports)
      : slots_(slots),
        ports_(ports),
        cells_(slots * ports, kUnmatched),
        input_avail_(ports, AvailabilityBitmap(slots)),
        output_avail_(ports, AvailabilityBitmap(slots)) {
    if (slots == 0) throw std::invalid_argument("JointCalendar: window size must be >= 1");
  }

  std::size_t slots() const { return slots_; }
  std::size_t ports() const { return ports_; }

  const AvailabilityBitmap& input_availability(int input) const {
    return input_avail_.at(static_cast<std::size_t>(input));
  }
  const AvailabilityBitmap& output_availability(int output) const {
    return output_avail_.at(static_cast<std::size_t>(output));
  }

  int cell(std::size_t slot, int output) const {
    check_slot(slot);
    return cells_[physical(slot) * ports_ + static_cast<std::size_t>(output)];
  }

  Matching row(std::size_t slot) const {
    check_slot(slot);
    Matching m(ports_);
    const std::size_t base = physical(slot) * ports_;
    for (std::size_t j = 0; j < ports_; ++j)
      if (cells_[base + j] != kUnmatched) m.add(cells_[base + j], static_cast<int>(j));
    return m;
  }

  // Pairs input with output at relative slot `slot`. Both ports must be
  // available there.
  void commit(std::size_t slot, int input, int output) {
    check_slot(slot);
    auto& bi = input_avail_.at(static_cast<std::size_t>(input));
    auto& bo = output_avail_.at(static_cast<std::size_t>(output));
    if (!bi.test(slot) || !bo.test(slot))
      throw std::invalid_argument("JointCalendar::commit: port not available at slot");
    cells_[physical(slot) * ports_ + static_cast<std::size_t>(output)] = input;
    bi.reset(slot);
    bo.reset(slot);
  }

  // Hands out all T rows in slot order and leaves the calendar empty.
  std::vector<Matching> graduate_batch() {
    std::vector<Matching> batch;
    batch.reserve(slots_);
    for (std::size_t t = 0; t < slots_; ++t) batch.push_back(row(t));
    reset();
    return batch;
  }

  // Hands out row 0, shifts the remaining rows down by one and enrolls an
  // empty row at T-1.
  Matching graduate_and_slide() {
    Matching senior = row(0);
    const std::size_t base = physical(0) * ports_;
    for (std::size_t j = 0; j < ports_; ++j) cells_[base + j] = kUnmatched;
    head_ = (head_ + 1) % slots_;
    for (auto& b : input_avail_) b.slide();
    for (auto& b : output_avail_) b.slide();
    return senior;
  }

  void reset() {
    std::fill(cells_.begin(), cells_.end(), kUnmatched);
    head_ = 0;
    for (auto& b : input_avail_) b.fill();
    for (auto& b : output_avail_) b.fill();
  }

  bool empty() const {
    for (int c : cells_)
      if (c != kUnmatched) return false;
    return true;
  }

  // Rows are valid matchings and the stored bitmaps equal the ones
  // recomputed from the rows.
  bool consistent() const {
    std::vector<AvailabilityBitmap> in(ports_, AvailabilityBitmap(slots_));
    std::vector<AvailabilityBitmap> out(ports_, AvailabilityBitmap(slots_));
    for (std::size_t t = 0; t < slots_; ++t) {
      std::vector<bool> seen(ports_, false);
      const std::size_t base = physical(t) * ports_;
      for (std::size_t j = 0; j < ports_; ++j) {
        const int i = cells_[base + j];
        if (i == kUnmatched) continue;
        if (i < 0 || static_cast<std::size_t>(i) >= ports_) return false;
        if (seen[static_cast<std::size_t>(i)]) return false;
        seen[static_cast<std::size_t>(i)] = true;
        in[static_cast<std::size_t>(i)].reset(t);
        out[j].reset(t);
      }
    }
    return in == input_avail_ && out == output_avail_;
  }

 private:
  std::size_t physical(std::size_t slot) const { return (head_ + slot) % slots_; }

  void check_slot(std::size_t slot) const {
    if (slot >= slots_) throw std::out_of_range("JointCalendar: slot out of range");
  }

  std::size_t slots_ = 0;
  std::size_t ports_ = 0;
  std::size_t head_ = 0;
  std::vector<int> cells_;
  std::vector<AvailabilityBitmap> input_avail_;
  std::vector<AvailabilityBitmap> output_avail_;
};

}  // namespace qps
