#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qps {

inline constexpr int kUnmatched = -1;

// A crossbar configuration for one time slot: a partial one-to-one pairing
// of inputs with outputs.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::size_t ports)
      : output_of_(ports, kUnmatched), input_of_(ports, kUnmatched) {}

  std::size_t ports() const { return output_of_.size(); }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  int output_of(int input) const { return output_of_.at(static_cast<std::size_t>(input)); }
  int input_of(int output) const { return input_of_.at(static_cast<std::size_t>(output)); }

  // Adds the pair (input, output). Either port already being matched is a
  // usage error.
  void add(int input, int output) {
    if (output_of(input) != kUnmatched || input_of(output) != kUnmatched)
      throw std::invalid_argument("Matching::add: port already matched");
    output_of_[static_cast<std::size_t>(input)] = output;
    input_of_[static_cast<std::size_t>(output)] = input;
    ++size_;
  }

  void remove_output(int output) {
    const int input = input_of(output);
    if (input == kUnmatched) return;
    output_of_[static_cast<std::size_t>(input)] = kUnmatched;
    input_of_[static_cast<std::size_t>(output)] = kUnmatched;
    --size_;
  }

  void clear() {
    std::fill(output_of_.begin(), output_of_.end(), kUnmatched);
    std::fill(input_of_.begin(), input_of_.end(), kUnmatched);
    size_ = 0;
  }

  // Calls f(input, output) for each pair in increasing input order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < output_of_.size(); ++i)
      if (output_of_[i] != kUnmatched) f(static_cast<int>(i), output_of_[i]);
  }

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(size_);
    for_each([&](int i, int j) { out.emplace_back(i, j); });
    return out;
  }

  // Both direction maps agree and no port is used twice.
  bool valid() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < output_of_.size(); ++i) {
      const int j = output_of_[i];
      if (j == kUnmatched) continue;
      if (j < 0 || static_cast<std::size_t>(j) >= ports()) return false;
      if (input_of_[static_cast<std::size_t>(j)] != static_cast<int>(i)) return false;
      ++n;
    }
    for (std::size_t j = 0; j < input_of_.size(); ++j) {
      const int i = input_of_[j];
      if (i != kUnmatched && output_of_[static_cast<std::size_t>(i)] != static_cast<int>(j))
        return false;
    }
    return n == size_;
  }

  friend bool operator==(const Matching& a, const Matching& b) {
    return a.output_of_ == b.output_of_;
  }

 private:
  std::vector<int> output_of_;
  std::vector<int> input_of_;
  std::size_t size_ = 0;
};

}  // namespace qps
