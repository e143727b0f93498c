#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qps {

// Availability of one port over the T relative slots of a batch or window.
// Bit t (0-based) is 1 iff the port is still unmatched at relative slot t.
// Windows of up to 64 slots live in a single word; wider ones spill into a
// word vector.
class AvailabilityBitmap {
 public:
  AvailabilityBitmap() = default;

  explicit AvailabilityBitmap(std::size_t slots, bool available = true) : slots_(slots) {
    if (slots_ > 64) wide_.assign((slots_ + 63) / 64, 0);
    if (available) fill();
  }

  // Parses a string such as "110010" where character t is slot t.
  static AvailabilityBitmap from_string(std::string_view bits) {
    AvailabilityBitmap b(bits.size(), false);
    for (std::size_t t = 0; t < bits.size(); ++t) {
      if (bits[t] == '1') {
        b.set(t);
      } else if (bits[t] != '0') {
        throw std::invalid_argument("bitmap string may only contain '0' and '1'");
      }
    }
    return b;
  }

  std::size_t size() const { return slots_; }

  bool test(std::size_t t) const {
    check_index(t);
    return (words()[t / 64] >> (t % 64)) & 1u;
  }
  void set(std::size_t t) {
    check_index(t);
    words()[t / 64] |= std::uint64_t{1} << (t % 64);
  }
  void reset(std::size_t t) {
    check_index(t);
    words()[t / 64] &= ~(std::uint64_t{1} << (t % 64));
  }

  void fill() {
    auto w = words();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = word_mask(k);
  }
  void clear() {
    for (auto& x : words()) x = 0;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : words()) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
  bool none() const { return count() == 0; }
  bool all() const { return count() == slots_; }

  // Drops slot 0, moves every slot t+1 to t, and appends an available slot
  // at T-1.
  void slide() {
    if (slots_ == 0) return;
    auto w = words();
    for (std::size_t k = 0; k < w.size(); ++k) {
      w[k] >>= 1;
      if (k + 1 < w.size()) w[k] |= (w[k + 1] & 1u) << 63;
    }
    set(slots_ - 1);
  }

  std::span<const std::uint64_t> words() const {
    return slots_ <= 64 ? std::span<const std::uint64_t>(&word_, 1)
                        : std::span<const std::uint64_t>(wide_);
  }

  std::string to_string() const {
    std::string s(slots_, '0');
    for (std::size_t t = 0; t < slots_; ++t)
      if (test(t)) s[t] = '1';
    return s;
  }

  friend bool operator==(const AvailabilityBitmap& a, const AvailabilityBitmap& b) {
    if (a.slots_ != b.slots_) return false;
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t k = 0; k < wa.size(); ++k)
      if (wa[k] != wb[k]) return false;
    return true;
  }

 private:
  std::span<std::uint64_t> words() {
    return slots_ <= 64 ? std::span<std::uint64_t>(&word_, 1) : std::span<std::uint64_t>(wide_);
  }

  std::uint64_t word_mask(std::size_t k) const {
    const std::size_t bits = slots_ - 64 * k;
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  }

  void check_index(std::size_t t) const {
    if (t >= slots_) throw std::out_of_range("bitmap slot index out of range");
  }

  std::size_t slots_ = 0;
  std::uint64_t word_ = 0;
  std::vector<std::uint64_t> wide_;
};

// First Fit: the earliest relative slot at which both ports are available.
inline std::optional<std::size_t> first_fit(const AvailabilityBitmap& in,
                                            const AvailabilityBitmap& out) {
  if (in.size() != out.size())
    throw std::invalid_argument("first_fit: bitmaps cover different window sizes");
  auto wi = in.words();
  auto wo = out.words();
  for (std::size_t k = 0; k < wi.size(); ++k) {
    const std::uint64_t both = wi[k] & wo[k];
    if (both != 0) return 64 * k + static_cast<std::size_t>(std::countr_zero(both));
  }
  return std::nullopt;
}

}  // namespace qps
