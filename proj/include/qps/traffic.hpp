#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "qps/rng.hpp"
#include "qps/voq.hpp"

namespace qps {

enum class Pattern { Uniform, QuasiDiagonal, LogDiagonal, Diagonal };

inline constexpr std::array<Pattern, 4> kAllPatterns = {Pattern::Uniform, Pattern::QuasiDiagonal,
                                                        Pattern::LogDiagonal, Pattern::Diagonal};

inline std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::Uniform: return "uniform";
    case Pattern::QuasiDiagonal: return "quasidiag";
    case Pattern::LogDiagonal: return "logdiag";
    case Pattern::Diagonal: return "diag";
  }
  return "?";
}

inline std::optional<Pattern> parse_pattern(std::string_view s) {
  for (auto p : kAllPatterns)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

// Per-slot arrival probabilities for every (input, output) pair.
class TrafficMatrix {
 public:
  TrafficMatrix() = default;
  explicit TrafficMatrix(std::size_t ports) : ports_(ports), rates_(ports * ports, 0.0) {}

  std::size_t ports() const { return ports_; }
  double rate(std::size_t i, std::size_t j) const { return rates_.at(i * ports_ + j); }
  void set_rate(std::size_t i, std::size_t j, double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("TrafficMatrix: rate must be in [0,1]");
    rates_.at(i * ports_ + j) = r;
  }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(rates_).subspan(i * ports_, ports_);
  }

  double row_sum(std::size_t i) const {
    double s = 0;
    for (double r : row(i)) s += r;
    return s;
  }
  double column_sum(std::size_t j) const {
    double s = 0;
    for (std::size_t i = 0; i < ports_; ++i) s += rate(i, j);
    return s;
  }

  TrafficMatrix scaled(double load) const {
    if (!(load >= 0.0 && load <= 1.0)) throw std::invalid_argument("load must be in [0,1]");
    TrafficMatrix out = *this;
    for (double& r : out.rates_) r *= load;
    return out;
  }

 private:
  std::size_t ports_ = 0;
  std::vector<double> rates_;
};

// The normalized (doubly stochastic) destination pattern, at unit load.
inline TrafficMatrix pattern_matrix(Pattern kind, std::size_t n) {
  if (n < 2) throw std::invalid_argument("pattern_matrix: need at least 2 ports");
  TrafficMatrix m(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t offset = (j + n - i) % n;  // cyclic distance from the diagonal
      double r = 0.0;
      switch (kind) {
        case Pattern::Uniform:
          r = 1.0 / dn;
          break;
        case Pattern::QuasiDiagonal:
          r = offset == 0 ? 0.5 : 1.0 / (2.0 * (dn - 1.0));
          break;
        case Pattern::LogDiagonal:
          // 2^(N-1-offset) / (2^N - 1): halves with each step away from i.
          r = std::ldexp(1.0, static_cast<int>(n - 1 - offset)) / (std::ldexp(1.0, static_cast<int>(n)) - 1.0);
          break;
        case Pattern::Diagonal:
          r = offset == 0 ? 2.0 / 3.0 : (offset == 1 ? 1.0 / 3.0 : 0.0);
          break;
      }
      m.set_rate(i, j, r);
    }
  }
  return m;
}

struct Arrival {
  int input = 0;
  int output = 0;
};

// One slot of independent Bernoulli trials, one per (i, j) pair. O(N^2);
// BernoulliSource produces the same process in time proportional to the
// number of arrivals.
inline void bernoulli_arrivals(const TrafficMatrix& tm, Rng& rng, std::vector<Arrival>& out) {
  out.clear();
  const std::size_t n = tm.ports();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double r = tm.rate(i, j);
      if (r > 0.0 && bernoulli(rng, r)) out.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
}

class ArrivalProcess {
 public:
  virtual ~ArrivalProcess() = default;
  // Arrivals for `slot`. Slots must be requested in increasing order.
  virtual void generate(Slot slot, Rng& rng, std::vector<Arrival>& out) = 0;
};

// I.i.d. Bernoulli arrivals with rate matrix `rates`. Each pair keeps the
// slot of its next arrival; gaps between arrivals are geometric, which is
// exactly the per-slot independent trial process. Pending arrivals sit in
// a timing wheel indexed by slot, so the cost per slot is proportional to
// the number of arrivals.
class BernoulliSource : public ArrivalProcess {
 public:
  BernoulliSource(const TrafficMatrix& rates, Rng& rng) : ports_(rates.ports()), wheel_(kWheelSlots) {
    for (std::size_t i = 0; i < ports_; ++i)
      for (std::size_t j = 0; j < ports_; ++j) {
        const double r = rates.rate(i, j);
        if (r <= 0.0) continue;
        Pair pr;
        pr.id = static_cast<std::uint32_t>(i * ports_ + j);
        pr.always = r >= 1.0;
        pr.log_miss = pr.always ? 0.0 : std::log1p(-r);
        pairs_.push_back(pr);
        schedule(static_cast<std::uint32_t>(pairs_.size() - 1), gap(pr, rng));
      }
  }

  void generate(Slot slot, Rng& rng, std::vector<Arrival>& out) override {
    out.clear();
    if (slot < now_) throw std::invalid_argument("BernoulliSource: slots must be increasing");
    // Skipped slots are replayed so that pending arrivals are not lost;
    // their arrivals are discarded.
    while (now_ < slot) {
      std::vector<Arrival> dropped;
      advance(rng, dropped);
    }
    advance(rng, out);
  }

 private:
  static constexpr std::size_t kWheelSlots = 4096;

  struct Pair {
    std::uint32_t id = 0;
    bool always = false;
    double log_miss = 0.0;  // log(1 - rate)
  };
  struct Pending {
    Slot when;
    std::uint32_t pair;
  };

  static Slot gap(const Pair& pr, Rng& rng) {
    if (pr.always) return 0;
    const double k = std::floor(std::log1p(-uniform01(rng)) / pr.log_miss);
    return k < 1.0e18 ? static_cast<Slot>(k) : static_cast<Slot>(1.0e18);
  }

  void schedule(std::uint32_t pair, Slot when) { wheel_[when % kWheelSlots].push_back({when, pair}); }

  void advance(Rng& rng, std::vector<Arrival>& out) {
    auto& bucket = wheel_[now_ % kWheelSlots];
    due_.clear();
    std::size_t keep = 0;
    for (const auto& e : bucket) {
      if (e.when == now_)
        due_.push_back(e.pair);
      else
        bucket[keep++] = e;
    }
    bucket.resize(keep);
    std::sort(due_.begin(), due_.end());
    for (auto idx : due_) {
      const auto& pr = pairs_[idx];
      out.push_back({static_cast<int>(pr.id / ports_), static_cast<int>(pr.id % ports_)});
      schedule(idx, now_ + 1 + gap(pr, rng));
    }
    ++now_;
  }

  std::size_t ports_;
  std::vector<Pair> pairs_;
  std::vector<std::vector<Pending>> wheel_;
  std::vector<std::uint32_t> due_;
  Slot now_ = 0;
};

// Geometric ON/OFF parameters: P(ON lasts t) = p (1-p)^t and
// P(OFF lasts t) = q (1-q)^t for t >= 0.
struct BurstParams {
  double p = 0.5;
  double q = 0.5;
};

// p gives a mean ON duration (1-p)/p of `mean_burst` slots; q sets the mean
// OFF duration (1-q)/q so that ON occupies a fraction `load` of the time.
inline BurstParams burst_params(double mean_burst, double load) {
  if (!(mean_burst >= 1.0)) throw std::invalid_argument("burst size must be >= 1");
  if (!(load > 0.0 && load < 1.0)) throw std::invalid_argument("on-off load must be in (0,1)");
  BurstParams bp;
  bp.p = 1.0 / (mean_burst + 1.0);
  bp.q = load / (load + mean_burst * (1.0 - load));
  if (!(bp.p > 0.0 && bp.p < 1.0 && bp.q > 0.0 && bp.q < 1.0))
    throw std::invalid_argument("burst parameters fall outside (0,1)");
  return bp;
}

struct BurstState {
  bool on = false;
  int dest = 0;               // valid while on
  std::uint64_t remaining = 0;  // slots left in the current phase
};

// Two-state ON/OFF bursty arrivals. An ON input emits one packet per slot,
// all to the destination drawn from its pattern row when the burst began;
// an OFF input is silent.
class OnOffSource : public ArrivalProcess {
 public:
  OnOffSource(const TrafficMatrix& pattern, BurstParams params, Rng& rng)
      : ports_(pattern.ports()), params_(params), cumulative_(ports_ * ports_), states_(ports_) {
    if (!(params.p > 0.0 && params.p < 1.0 && params.q > 0.0 && params.q < 1.0))
      throw std::invalid_argument("OnOffSource: p and q must be in (0,1)");
    for (std::size_t i = 0; i < ports_; ++i) {
      double acc = 0;
      for (std::size_t j = 0; j < ports_; ++j) {
        acc += pattern.rate(i, j);
        cumulative_[i * ports_ + j] = acc;
      }
    }
    const double mean_on = (1.0 - params.p) / params.p;
    const double mean_off = (1.0 - params.q) / params.q;
    const double on_fraction = mean_on / (mean_on + mean_off);
    for (std::size_t i = 0; i < ports_; ++i) {
      auto& s = states_[i];
      s.on = bernoulli(rng, on_fraction);
      if (s.on) s.dest = draw_destination(i, rng);
      s.remaining = geometric0(rng, s.on ? params.p : params.q);
    }
  }

  const BurstParams& params() const { return params_; }
  const BurstState& state(std::size_t input) const { return states_.at(input); }
  void set_state(std::size_t input, BurstState s) { states_.at(input) = s; }
  std::uint64_t bursts_started() const { return bursts_; }

  void generate(Slot /*slot*/, Rng& rng, std::vector<Arrival>& out) override {
    out.clear();
    for (std::size_t i = 0; i < ports_; ++i) {
      auto& s = states_[i];
      while (s.remaining == 0) {
        s.on = !s.on;
        if (s.on) {
          s.dest = draw_destination(i, rng);
          ++bursts_;
        }
        s.remaining = geometric0(rng, s.on ? params_.p : params_.q);
      }
      if (s.on) out.push_back({static_cast<int>(i), s.dest});
      --s.remaining;
    }
  }

 private:
  int draw_destination(std::size_t input, Rng& rng) const {
    const auto row = std::span<const double>(cumulative_).subspan(input * ports_, ports_);
    const double u = uniform01(rng) * row.back();
    auto it = std::upper_bound(row.begin(), row.end(), u);
    if (it == row.end()) --it;
    return static_cast<int>(it - row.begin());
  }

  std::size_t ports_;
  BurstParams params_;
  std::vector<double> cumulative_;
  std::vector<BurstState> states_;
  std::uint64_t bursts_ = 0;
};

}  // namespace qps
