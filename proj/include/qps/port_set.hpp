#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qps {

// Fixed-size set of port indices backed by 64-bit words.
class PortSet {
 public:
  PortSet() = default;
  explicit PortSet(std::size_t ports, bool full = false)
      : ports_(ports), words_((ports + 63) / 64, 0) {
    if (full) fill();
  }

  std::size_t ports() const { return ports_; }

  bool test(std::size_t p) const { return (words_[p / 64] >> (p % 64)) & 1u; }
  void set(std::size_t p) { words_[p / 64] |= std::uint64_t{1} << (p % 64); }
  void reset(std::size_t p) { words_[p / 64] &= ~(std::uint64_t{1} << (p % 64)); }

  void fill() {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      const std::size_t bits = ports_ - 64 * k;
      words_[k] = bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    }
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  PortSet& operator&=(const PortSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  friend PortSet operator&(PortSet a, const PortSet& b) { return a &= b; }

  // *this = a & b without reallocating.
  void assign_and(const PortSet& a, const PortSet& b) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] = a.words_[k] & b.words_[k];
  }
  friend bool operator==(const PortSet&, const PortSet&) = default;

  // Smallest member >= start, wrapping around past the last port (the
  // round-robin "nearest from pointer" search). -1 if the set is empty.
  int next_cyclic(std::size_t start) const {
    if (ports_ == 0) return -1;
    if (start >= ports_) start = 0;
    const int hi = find_from(start);
    if (hi >= 0) return hi;
    return find_from(0);
  }

  // Smallest member >= start, or -1.
  int find_from(std::size_t start) const {
    std::size_t k = start / 64;
    if (k >= words_.size()) return -1;
    std::uint64_t w = words_[k] & (~std::uint64_t{0} << (start % 64));
    while (true) {
      if (w) return static_cast<int>(64 * k + static_cast<std::size_t>(std::countr_zero(w)));
      if (++k == words_.size()) return -1;
      w = words_[k];
    }
  }

 private:
  std::size_t ports_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace qps
