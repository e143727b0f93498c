#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qps/bitmap.hpp"
#include "qps/calendar.hpp"
#include "qps/rng.hpp"
#include "qps/sampler.hpp"

namespace qps {

// A request from an input to the output it sampled. `avail` is the input's
// availability over the calendar window and is left empty by schedulers
// that compute a single matching.
struct Proposal {
  int input = 0;
  std::int64_t voq_len = 0;
  AvailabilityBitmap avail;
};

struct Acceptance {
  int input = 0;
  std::size_t slot = 0;
};

// Proposals grouped by the output they are addressed to. Storage is reused
// across iterations.
class ProposalBoard {
 public:
  ProposalBoard() = default;
  explicit ProposalBoard(std::size_t ports) : by_output_(ports) {}

  std::size_t ports() const { return by_output_.size(); }
  void clear() {
    for (auto& v : by_output_) v.clear();
  }
  void add(int output, Proposal p) { by_output_[static_cast<std::size_t>(output)].push_back(std::move(p)); }
  std::vector<Proposal>& at(int output) { return by_output_.at(static_cast<std::size_t>(output)); }
  const std::vector<Proposal>& at(int output) const { return by_output_.at(static_cast<std::size_t>(output)); }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& v : by_output_) n += v.size();
    return n;
  }

 private:
  std::vector<std::vector<Proposal>> by_output_;
};

// Proposing phase: every input with a positive sampler total proposes to
// exactly one output drawn queue-proportionally. With a calendar, each
// proposal carries the input's availability bitmap.
inline void propose_all(std::span<const QpsSampler> samplers, const JointCalendar* calendar,
                        Rng& rng, ProposalBoard& board) {
  board.clear();
  for (std::size_t i = 0; i < samplers.size(); ++i) {
    const auto j = samplers[i].draw(rng);
    if (!j) continue;
    Proposal p;
    p.input = static_cast<int>(i);
    p.voq_len = samplers[i].weight(*j);
    if (calendar) p.avail = calendar->input_availability(static_cast<int>(i));
    board.add(*j, std::move(p));
  }
}

// Realizes the order in which proposals reach an output as a uniformly
// random permutation. Only the first `keep` positions are drawn, which is
// all the knockout stage looks at.
inline void shuffle_arrival_order(std::vector<Proposal>& proposals, std::size_t keep, Rng& rng) {
  const std::size_t n = proposals.size();
  const std::size_t m = std::min(keep, n);
  for (std::size_t k = 0; k < m && k + 1 < n; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(uniform_below(rng, n - k));
    if (pick != k) std::swap(proposals[k], proposals[pick]);
  }
}

// Keeps the first `threshold` proposals in arrival order.
inline void knockout(std::vector<Proposal>& proposals, std::size_t threshold) {
  if (proposals.size() > threshold) proposals.resize(threshold);
}

// First Fit Accepting at one output: proposals are tried longest VOQ first
// (stable, so equal lengths keep arrival order), each at the earliest slot
// free for both ports given the acceptances made so far. on_accept(input,
// slot) is called after each commit.
template <typename OnAccept>
void ffa_accept(int output, std::vector<Proposal>& proposals, JointCalendar& calendar,
                OnAccept&& on_accept) {
  // Insertion sort: stable, and the lists are knockout-sized.
  for (std::size_t k = 1; k < proposals.size(); ++k) {
    for (std::size_t m = k; m > 0 && proposals[m - 1].voq_len < proposals[m].voq_len; --m)
      std::swap(proposals[m - 1], proposals[m]);
  }
  for (const auto& p : proposals) {
    const auto slot = first_fit(p.avail, calendar.output_availability(output));
    if (!slot) continue;
    calendar.commit(*slot, p.input, output);
    on_accept(p.input, *slot);
  }
}

inline std::vector<Acceptance> ffa_accept(int output, std::vector<Proposal>& proposals,
                                          JointCalendar& calendar) {
  std::vector<Acceptance> accepted;
  ffa_accept(output, proposals, calendar,
             [&](int input, std::size_t slot) { accepted.push_back({input, slot}); });
  return accepted;
}

}  // namespace qps
