#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "qps/matching.hpp"
#include "qps/scheduler.hpp"
#include "qps/voq.hpp"

namespace qps {

// Hungarian method (shortest augmenting paths with potentials), O(n^3).
// weights is row-major n x n; returns the column assigned to each row in a
// perfect assignment of maximum total weight.
inline std::vector<int> max_weight_assignment(std::span<const std::int64_t> weights, std::size_t n) {
  if (weights.size() != n * n) throw std::invalid_argument("max_weight_assignment: expected n*n weights");
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // Minimize -w. Index 0 is a sentinel column/row as in the classic
  // formulation; rows and columns are 1-based below.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t r = 1; r <= n; ++r) {
    row_of[0] = r;
    std::size_t c0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[c0] = 1;
      const std::size_t r0 = row_of[c0];
      std::int64_t delta = kInf;
      std::size_t c1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const std::int64_t cur = -weights[(r0 - 1) * n + (c - 1)] - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = c0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          c1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[row_of[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      c0 = c1;
    } while (row_of[c0] != 0);
    do {
      const std::size_t c1 = way[c0];
      row_of[c0] = row_of[c1];
      c0 = c1;
    } while (c0 != 0);
  }
  std::vector<int> col_of_row(n, kUnmatched);
  for (std::size_t c = 1; c <= n; ++c) col_of_row[row_of[c] - 1] = static_cast<int>(c - 1);
  return col_of_row;
}

// Maximum weight matching with VOQ lengths as edge weights. Pairs with an
// empty VOQ are not edges and are dropped from the optimal assignment.
inline Matching max_weight_matching(const VoqMatrix& voqs) {
  const std::size_t n = voqs.ports();
  std::vector<std::int64_t> w(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      w[i * n + j] = static_cast<std::int64_t>(voqs.length(static_cast<int>(i), static_cast<int>(j)));
  const auto assign = max_weight_assignment(w, n);
  Matching m(n);
  for (std::size_t i = 0; i < n; ++i)
    if (w[i * n + static_cast<std::size_t>(assign[i])] > 0) m.add(static_cast<int>(i), assign[i]);
  return m;
}

inline std::int64_t matching_weight(const VoqMatrix& voqs, const Matching& m) {
  std::int64_t total = 0;
  m.for_each([&](int i, int j) { total += static_cast<std::int64_t>(voqs.length(i, j)); });
  return total;
}

class MwmScheduler : public Scheduler {
 public:
  Algorithm algorithm() const override { return Algorithm::Mwm; }
  Matching schedule(const VoqMatrix& voqs, Rng& /*rng*/) override { return max_weight_matching(voqs); }
};

}  // namespace qps
