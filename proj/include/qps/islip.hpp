#pragma once

#include <bit>
#include <cstddef>
#include <vector>

#include "qps/port_set.hpp"
#include "qps/scheduler.hpp"

namespace qps {

// iSLIP with ceil(log2 N) request-grant-accept iterations. Grant and accept
// pointers move one past the matched partner only for pairs formed in the
// first iteration.
class IslipScheduler : public Scheduler {
 public:
  explicit IslipScheduler(std::size_t ports)
      : ports_(ports),
        iterations_(ports <= 1 ? 1 : static_cast<std::size_t>(std::bit_width(ports - 1))),
        grant_ptr_(ports, 0),
        accept_ptr_(ports, 0),
        unmatched_in_(ports),
        unmatched_out_(ports),
        scratch_(ports),
        grants_to_(ports, PortSet(ports)) {}

  Algorithm algorithm() const override { return Algorithm::Islip; }
  std::size_t iterations() const { return iterations_; }
  std::size_t grant_pointer(int output) const { return grant_ptr_.at(static_cast<std::size_t>(output)); }
  std::size_t accept_pointer(int input) const { return accept_ptr_.at(static_cast<std::size_t>(input)); }

  Matching schedule(const VoqMatrix& voqs, Rng& /*rng*/) override {
    Matching m(ports_);
    unmatched_in_.fill();
    unmatched_out_.fill();
    for (std::size_t it = 0; it < iterations_; ++it) {
      // Grant: each unmatched output picks among the unmatched inputs that
      // request it (nonempty VOQ) the one nearest its pointer.
      bool any_grant = false;
      for (int j = unmatched_out_.find_from(0); j >= 0;
           j = unmatched_out_.find_from(static_cast<std::size_t>(j) + 1)) {
        scratch_.assign_and(voqs.nonempty_inputs(j), unmatched_in_);
        const int i = scratch_.next_cyclic(grant_ptr_[static_cast<std::size_t>(j)]);
        if (i < 0) continue;
        grants_to_[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
        any_grant = true;
      }
      if (!any_grant) break;
      // Accept: each input with grants takes the one nearest its pointer.
      for (int i = unmatched_in_.find_from(0); i >= 0;
           i = unmatched_in_.find_from(static_cast<std::size_t>(i) + 1)) {
        auto& grants = grants_to_[static_cast<std::size_t>(i)];
        if (!grants.any()) continue;
        const int j = grants.next_cyclic(accept_ptr_[static_cast<std::size_t>(i)]);
        grants.clear();
        m.add(i, j);
        if (it == 0) {
          accept_ptr_[static_cast<std::size_t>(i)] = (static_cast<std::size_t>(j) + 1) % ports_;
          grant_ptr_[static_cast<std::size_t>(j)] = (static_cast<std::size_t>(i) + 1) % ports_;
        }
      }
      m.for_each([&](int i, int j) {
        unmatched_in_.reset(static_cast<std::size_t>(i));
        unmatched_out_.reset(static_cast<std::size_t>(j));
      });
    }
    return m;
  }

 private:
  std::size_t ports_;
  std::size_t iterations_;
  std::vector<std::size_t> grant_ptr_;
  std::vector<std::size_t> accept_ptr_;
  PortSet unmatched_in_;
  PortSet unmatched_out_;
  PortSet scratch_;
  std::vector<PortSet> grants_to_;
};

}  // namespace qps
