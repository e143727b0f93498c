#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qps/rng.hpp"

namespace qps {

// Queue-proportional sampler for one input port: draws output j with
// probability weights[j] / total. Weights are packet counts kept in a
// Fenwick tree, so both update and draw are O(log N).
class QpsSampler {
 public:
  QpsSampler() = default;
  explicit QpsSampler(std::size_t ports) : weights_(ports, 0), tree_(ports + 1, 0) {
    top_ = 1;
    while (top_ * 2 <= ports) top_ *= 2;
  }

  std::size_t ports() const { return weights_.size(); }
  std::int64_t weight(int j) const { return weights_.at(static_cast<std::size_t>(j)); }
  std::int64_t total() const { return total_; }

  void update(int j, std::int64_t delta) {
    auto& w = weights_.at(static_cast<std::size_t>(j));
    if (w + delta < 0) throw std::invalid_argument("QpsSampler::update: weight would go negative");
    w += delta;
    total_ += delta;
    for (std::size_t k = static_cast<std::size_t>(j) + 1; k < tree_.size(); k += k & (~k + 1))
      tree_[k] += delta;
  }

  // None iff every weight is zero.
  std::optional<int> draw(Rng& rng) const {
    if (total_ <= 0) return std::nullopt;
    auto target = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(total_)));
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] <= target) {
        pos = next;
        target -= tree_[next];
      }
    }
    return static_cast<int>(pos);
  }

 private:
  std::vector<std::int64_t> weights_;
  std::vector<std::int64_t> tree_;
  std::int64_t total_ = 0;
  std::size_t top_ = 1;
};

}  // namespace qps
