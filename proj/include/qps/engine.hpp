#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qps/matching.hpp"
#include "qps/rng.hpp"
#include "qps/schedulers.hpp"
#include "qps/stats.hpp"
#include "qps/traffic.hpp"
#include "qps/voq.hpp"

namespace qps {

enum class ArrivalModel { Bernoulli, OnOff };

inline std::string_view to_string(ArrivalModel m) {
  return m == ArrivalModel::Bernoulli ? "bernoulli" : "onoff";
}

inline std::optional<ArrivalModel> parse_arrival_model(std::string_view s) {
  if (s == "bernoulli") return ArrivalModel::Bernoulli;
  if (s == "onoff") return ArrivalModel::OnOff;
  return std::nullopt;
}

struct StoppingRule {
  std::uint64_t min_slots_per_port_squared = 500;  // floor: 500 N^2 slots
  double half_width = 0.01;                        // slots
  double confidence = 0.98;
  std::uint64_t batch_slots_per_port = 10;         // batch length 10 N
};

struct RunConfig {
  std::size_t ports = 64;
  std::size_t window = 16;
  Algorithm algorithm = Algorithm::SwQps;
  Pattern pattern = Pattern::Uniform;
  double load = 0.5;
  ArrivalModel arrivals = ArrivalModel::Bernoulli;
  double burst_size = 16;
  std::size_t knockout = 3;
  ProposalWeights weights = ProposalWeights::Unscheduled;
  SingleAccept qps1_accept = SingleAccept::LongestVoq;
  std::uint64_t seed = 1;
  Slot max_slots = 0;  // 0: ten times the minimum
  StoppingRule stopping;
  StabilityRule stability;

  Slot min_slots() const {
    return stopping.min_slots_per_port_squared * static_cast<Slot>(ports) * static_cast<Slot>(ports);
  }
  Slot batch_slots() const {
    return std::max<Slot>(1, stopping.batch_slots_per_port * static_cast<Slot>(ports));
  }
  Slot effective_max_slots() const { return max_slots ? max_slots : 10 * std::max<Slot>(min_slots(), 1); }

  SchedulerOptions scheduler_options() const {
    SchedulerOptions o;
    o.window = window;
    o.knockout = knockout;
    o.weights = weights;
    o.qps1_accept = qps1_accept;
    return o;
  }

  // Throws std::invalid_argument naming the offending field.
  void validate() const {
    if (ports < 2) throw std::invalid_argument("n must be >= 2");
    if (window < 1) throw std::invalid_argument("t must be >= 1");
    if (!(load >= 0.0 && load <= 1.0)) throw std::invalid_argument("load must be in [0,1]");
    if (knockout < 1) throw std::invalid_argument("knockout must be >= 1");
    if (arrivals == ArrivalModel::OnOff) {
      if (!(burst_size >= 1.0)) throw std::invalid_argument("burst-size must be >= 1");
      if (!(load > 0.0 && load < 1.0))
        throw std::invalid_argument("load must be in (0,1) for on-off arrivals");
    }
    if (effective_max_slots() > VoqMatrix::kMaxSlot)
      throw std::invalid_argument("max-slots must be below 2^32");
    if (!(stopping.confidence > 0.0 && stopping.confidence < 1.0))
      throw std::invalid_argument("confidence must be in (0,1)");
  }
};

inline std::unique_ptr<ArrivalProcess> make_arrival_process(const RunConfig& cfg, Rng& rng) {
  const TrafficMatrix pattern = pattern_matrix(cfg.pattern, cfg.ports);
  if (cfg.arrivals == ArrivalModel::OnOff)
    return std::make_unique<OnOffSource>(pattern, burst_params(cfg.burst_size, cfg.load), rng);
  return std::make_unique<BernoulliSource>(pattern.scaled(cfg.load), rng);
}

// One switch under simulation. Each step is one time slot:
//   1. this slot's arrivals are enqueued (and reported to the scheduler),
//   2. the scheduler produces the slot's matching,
//   3. every matched pair with a nonempty VOQ sends its head packet, whose
//      delay is now - arrival (0 if it arrived this slot),
//   4. the clock advances.
class Simulator {
 public:
  explicit Simulator(const RunConfig& cfg)
      : cfg_(cfg),
        traffic_rng_(derive_seed(cfg.seed, std::uint64_t{1})),
        sched_rng_(derive_seed(cfg.seed, std::uint64_t{2})),
        voqs_(cfg.ports),
        batch_slots_(cfg.batch_slots()) {
    cfg_.validate();
    traffic_ = make_arrival_process(cfg_, traffic_rng_);
    scheduler_ = make_scheduler(cfg_.algorithm, cfg_.ports, cfg_.scheduler_options());
  }

  // Replaces the configured traffic model with `traffic`.
  Simulator(const RunConfig& cfg, std::unique_ptr<ArrivalProcess> traffic) : Simulator(cfg) {
    if (!traffic) throw std::invalid_argument("Simulator: null arrival process");
    traffic_ = std::move(traffic);
  }

  // Validate matchings, VOQ contents, calendars and packet conservation
  // every slot; violations throw std::logic_error.
  void set_invariant_checks(bool on) { checks_ = on; }

  Slot now() const { return now_; }
  const RunConfig& config() const { return cfg_; }
  const VoqMatrix& voqs() const { return voqs_; }
  const Scheduler& scheduler() const { return *scheduler_; }
  const RunStats& stats() const { return stats_; }
  const Matching& last_matching() const { return matching_; }
  const std::vector<Arrival>& last_arrivals() const { return arrivals_; }

  void step() {
    traffic_->generate(now_, traffic_rng_, arrivals_);
    for (const auto& a : arrivals_) {
      voqs_.enqueue(a.input, a.output, now_);
      scheduler_->on_arrival(a.input, a.output);
    }
    stats_.arrivals += arrivals_.size();

    matching_ = scheduler_->schedule(voqs_, sched_rng_);
    if (checks_) check_matching();

    matching_.for_each([&](int i, int j) {
      if (voqs_.length(i, j) == 0) return;
      const Packet p = voqs_.dequeue(i, j);
      scheduler_->on_departure(i, j);
      record_departure(now_ - p.arrival_slot);
    });

    ++now_;
    stats_.slots = now_;
    if (now_ % batch_slots_ == 0) close_batch();
    if (checks_) check_conservation();
  }

  // Fills in the summary fields of the statistics.
  const RunStats& finish() {
    stats_.slots = now_;
    stats_.mean_delay = stats_.departures
                            ? static_cast<double>(stats_.delay_sum) / static_cast<double>(stats_.departures)
                            : std::numeric_limits<double>::quiet_NaN();
    stats_.delay_half_width = stats_.delay_batches.half_width(cfg_.stopping.confidence);
    stats_.throughput = now_ ? static_cast<double>(stats_.departures) /
                                   (static_cast<double>(cfg_.ports) * static_cast<double>(now_))
                             : 0.0;
    stats_.stable = stability_check(stats_, cfg_.stability) == Stability::Stable;
    return stats_;
  }

  bool at_batch_boundary() const { return now_ % batch_slots_ == 0; }

 private:
  void record_departure(std::uint64_t delay) {
    ++stats_.departures;
    stats_.delay_sum += delay;
    stats_.max_delay = std::max(stats_.max_delay, delay);
    ++batch_departures_;
    batch_delay_sum_ += delay;
  }

  void close_batch() {
    if (batch_departures_ > 0)
      stats_.delay_batches.add(static_cast<double>(batch_delay_sum_) / static_cast<double>(batch_departures_));
    batch_departures_ = 0;
    batch_delay_sum_ = 0;
    stats_.backlog_samples.push_back({now_, voqs_.total_backlog(), stats_.arrivals});
  }

  void check_matching() const {
    if (!matching_.valid() || matching_.ports() != cfg_.ports)
      throw std::logic_error("invalid matching at slot " + std::to_string(now_));
    // Calendar schedulers in Queued mode may hold cells whose packet has
    // already left through an earlier cell of the same VOQ.
    const bool may_be_empty = cfg_.weights == ProposalWeights::Queued &&
                              (cfg_.algorithm == Algorithm::SbQps || cfg_.algorithm == Algorithm::SwQps);
    matching_.for_each([&](int i, int j) {
      if (!may_be_empty && voqs_.length(i, j) == 0)
        throw std::logic_error("matched an empty VOQ at slot " + std::to_string(now_));
    });
    if (const auto* cq = dynamic_cast<const detail::CalendarQps*>(scheduler_.get())) {
      if (!cq->calendar().consistent())
        throw std::logic_error("calendar bitmaps disagree with rows at slot " + std::to_string(now_));
      for (std::size_t i = 0; i < cfg_.ports; ++i)
        for (std::size_t j = 0; j < cfg_.ports; ++j) {
          const auto w = cq->samplers()[i].weight(static_cast<int>(j));
          if (w < 0 || static_cast<std::uint64_t>(w) > voqs_.length(static_cast<int>(i), static_cast<int>(j)))
            throw std::logic_error("sampler weight exceeds VOQ length at slot " + std::to_string(now_));
        }
    }
  }

  void check_conservation() const {
    if (stats_.arrivals != stats_.departures + voqs_.total_backlog())
      throw std::logic_error("packet conservation violated at slot " + std::to_string(now_));
    for (const auto& a : arrivals_)
      if (!voqs_.fifo_ordered(a.input, a.output))
        throw std::logic_error("VOQ lost FIFO order at slot " + std::to_string(now_));
  }

  RunConfig cfg_;
  Rng traffic_rng_;
  Rng sched_rng_;
  VoqMatrix voqs_;
  std::unique_ptr<ArrivalProcess> traffic_;
  std::unique_ptr<Scheduler> scheduler_;
  std::vector<Arrival> arrivals_;
  Matching matching_;
  RunStats stats_;
  Slot now_ = 0;
  Slot batch_slots_;
  std::uint64_t batch_departures_ = 0;
  std::uint64_t batch_delay_sum_ = 0;
  bool checks_ = false;
};

// Simulates until at least min_slots() have run and the confidence
// interval on the mean delay is narrow enough, or the backlog is found to
// grow without bound, or max slots are reached.
inline RunStats run(const RunConfig& cfg) {
  Simulator sim(cfg);
  const Slot min_slots = cfg.min_slots();
  const Slot max_slots = cfg.effective_max_slots();
  while (sim.now() < max_slots) {
    sim.step();
    if (!sim.at_batch_boundary() || sim.now() < min_slots) continue;
    const auto& st = sim.stats();
    if (stability_check(st, cfg.stability) == Stability::Unstable) break;
    if (st.departures == 0) break;  // nothing to estimate
    if (st.delay_batches.half_width(cfg.stopping.confidence) <= cfg.stopping.half_width) break;
  }
  return sim.finish();
}

// Fixed-horizon run at near-saturating load (default horizon 500 N^2
// slots). The returned throughput counts only departures after a warm-up
// of 10 T slots.
inline RunStats saturation_run(RunConfig cfg, Slot horizon = 0) {
  cfg.load = 0.9999;
  if (horizon == 0) horizon = cfg.min_slots();
  cfg.max_slots = horizon;
  Simulator sim(cfg);
  const Slot warmup = std::min<Slot>(10 * cfg.window, horizon / 2);
  while (sim.now() < warmup) sim.step();
  const std::uint64_t base = sim.stats().departures;
  while (sim.now() < horizon) sim.step();
  const double served = static_cast<double>(sim.stats().departures - base);
  RunStats st = sim.finish();
  st.throughput = served / (static_cast<double>(cfg.ports) * static_cast<double>(horizon - warmup));
  return st;
}

// Maximum achievable throughput: sustained departures per port per slot
// at load 0.9999.
inline double measure_max_throughput(const RunConfig& cfg, Slot horizon = 0) {
  return saturation_run(cfg, horizon).throughput;
}

}  // namespace qps
