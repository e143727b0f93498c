#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "qps/calendar.hpp"
#include "qps/proposal.hpp"
#include "qps/sampler.hpp"
#include "qps/scheduler.hpp"

namespace qps {

namespace detail {

// Shared by SB-QPS and SW-QPS: one propose / knockout / first-fit-accept
// iteration against a joint calendar.
class CalendarQps : public Scheduler {
 public:
  CalendarQps(std::size_t ports, const SchedulerOptions& opt)
      : opt_(opt), samplers_(ports, QpsSampler(ports)), board_(ports), calendar_(opt.window, ports) {
    if (opt.knockout == 0) throw std::invalid_argument("knockout threshold must be >= 1");
  }

  void on_arrival(int input, int output) override {
    samplers_[static_cast<std::size_t>(input)].update(output, +1);
  }
  void on_departure(int input, int output) override {
    if (opt_.weights == ProposalWeights::Queued)
      samplers_[static_cast<std::size_t>(input)].update(output, -1);
  }

  const JointCalendar& calendar() const { return calendar_; }
  std::span<const QpsSampler> samplers() const { return samplers_; }
  std::size_t iterations() const { return iterations_; }

 protected:
  void iterate(Rng& rng) {
    propose_all(samplers_, &calendar_, rng, board_);
    for (std::size_t j = 0; j < board_.ports(); ++j) {
      auto& props = board_.at(static_cast<int>(j));
      if (props.empty()) continue;
      shuffle_arrival_order(props, opt_.knockout, rng);
      knockout(props, opt_.knockout);
      const int output = static_cast<int>(j);
      ffa_accept(output, props, calendar_, [&](int input, std::size_t) {
        if (opt_.weights == ProposalWeights::Unscheduled)
          samplers_[static_cast<std::size_t>(input)].update(output, -1);
      });
    }
    ++iterations_;
  }

  SchedulerOptions opt_;
  std::vector<QpsSampler> samplers_;
  ProposalBoard board_;
  JointCalendar calendar_;
  std::size_t iterations_ = 0;
};

}  // namespace detail

// Small-batch QPS. The calendar under construction receives one iteration
// per slot; every T slots it graduates as a whole and its rows serve the
// next T slots while a fresh calendar is packed. The first batch of slots
// is served by empty matchings.
class SbQpsScheduler : public detail::CalendarQps {
 public:
  SbQpsScheduler(std::size_t ports, const SchedulerOptions& opt) : CalendarQps(ports, opt) {}

  Algorithm algorithm() const override { return Algorithm::SbQps; }

  Matching schedule(const VoqMatrix& voqs, Rng& rng) override {
    const std::size_t phase = slot_ % opt_.window;
    if (phase == 0 && slot_ > 0) active_ = calendar_.graduate_batch();
    Matching current = active_.empty() ? Matching(voqs.ports()) : active_[phase];
    iterate(rng);
    ++slot_;
    return current;
  }

 private:
  std::vector<Matching> active_;
  std::uint64_t slot_ = 0;
};

// Sliding-window QPS. Each slot the senior row graduates and is returned,
// an empty row is enrolled at the back, and one iteration runs on the new
// window. A row graduating at slot t was therefore improved during slots
// t-T .. t-1, and a packet arriving at slot t can be served at t+1 at the
// earliest.
class SwQpsScheduler : public detail::CalendarQps {
 public:
  SwQpsScheduler(std::size_t ports, const SchedulerOptions& opt) : CalendarQps(ports, opt) {}

  Algorithm algorithm() const override { return Algorithm::SwQps; }

  Matching schedule(const VoqMatrix& /*voqs*/, Rng& rng) override {
    Matching senior = calendar_.graduate_and_slide();
    iterate(rng);
    return senior;
  }
};

// QPS-1: a single QPS proposing round; each output accepts one proposal
// and the result is used in the current slot.
class Qps1Scheduler : public Scheduler {
 public:
  Qps1Scheduler(std::size_t ports, const SchedulerOptions& opt)
      : opt_(opt), samplers_(ports, QpsSampler(ports)), board_(ports) {}

  Algorithm algorithm() const override { return Algorithm::Qps1; }

  void on_arrival(int input, int output) override {
    samplers_[static_cast<std::size_t>(input)].update(output, +1);
  }
  void on_departure(int input, int output) override {
    samplers_[static_cast<std::size_t>(input)].update(output, -1);
  }

  Matching schedule(const VoqMatrix& voqs, Rng& rng) override {
    propose_all(samplers_, nullptr, rng, board_);
    Matching m(voqs.ports());
    for (std::size_t j = 0; j < board_.ports(); ++j) {
      const auto& props = board_.at(static_cast<int>(j));
      if (props.empty()) continue;
      m.add(pick(props, rng), static_cast<int>(j));
    }
    return m;
  }

 private:
  int pick(const std::vector<Proposal>& props, Rng& rng) const {
    if (props.size() == 1) return props.front().input;
    if (opt_.qps1_accept == SingleAccept::Random)
      return props[static_cast<std::size_t>(uniform_below(rng, props.size()))].input;
    // Longest VOQ wins; ties resolved uniformly (random arrival order).
    std::size_t best = 0;
    std::uint64_t ties = 1;
    for (std::size_t k = 1; k < props.size(); ++k) {
      if (props[k].voq_len > props[best].voq_len) {
        best = k;
        ties = 1;
      } else if (props[k].voq_len == props[best].voq_len) {
        ++ties;
        if (uniform_below(rng, ties) == 0) best = k;
      }
    }
    return props[best].input;
  }

  SchedulerOptions opt_;
  std::vector<QpsSampler> samplers_;
  ProposalBoard board_;
};

}  // namespace qps
