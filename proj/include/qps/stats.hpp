#pragma once

#include <boost/math/distributions/normal.hpp>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "qps/voq.hpp"

namespace qps {

// Running mean and variance of the per-batch mean delays (Welford).
class BatchMeans {
 public:
  void add(double batch_mean) {
    ++count_;
    const double d = batch_mean - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (batch_mean - mean_);
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }

  // Normal-approximation half-width of the confidence interval for the
  // mean at two-sided level `confidence`. Infinite below two batches.
  double half_width(double confidence) const {
    if (count_ < 2) return std::numeric_limits<double>::infinity();
    const boost::math::normal_distribution<double> std_normal;
    const double z = boost::math::quantile(std_normal, 0.5 + confidence / 2.0);
    return z * std::sqrt(variance() / static_cast<double>(count_));
  }

  friend bool operator==(const BatchMeans&, const BatchMeans&) = default;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct BacklogSample {
  Slot slot = 0;
  std::uint64_t backlog = 0;
  std::uint64_t arrivals = 0;  // cumulative

  friend bool operator==(const BacklogSample&, const BacklogSample&) = default;
};

enum class Stability { Stable, Unstable };

struct StabilityRule {
  // Unstable when, at each of the last `checkpoints` samples, backlog has
  // grown since the run's midpoint by more than this fraction of the
  // packets that arrived over the same span.
  double growth_fraction = 0.05;
  std::size_t checkpoints = 3;
};

struct RunStats {
  Slot slots = 0;
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
  std::uint64_t delay_sum = 0;
  std::uint64_t max_delay = 0;
  BatchMeans delay_batches;
  std::vector<BacklogSample> backlog_samples;

  // Filled in when a run finishes.
  double mean_delay = std::numeric_limits<double>::quiet_NaN();
  double delay_half_width = std::numeric_limits<double>::quiet_NaN();
  double throughput = 0.0;
  bool stable = true;

  std::uint64_t backlog() const { return arrivals - departures; }
};

// Trend test on the backlog series; see StabilityRule.
inline Stability stability_check(const std::vector<BacklogSample>& samples, const StabilityRule& rule) {
  const std::size_t n = samples.size();
  if (n < 2 || rule.checkpoints == 0) return Stability::Stable;
  const std::size_t k = std::min(rule.checkpoints, n - 1);
  for (std::size_t c = n - k; c < n; ++c) {
    const auto& end = samples[c];
    const auto& mid = samples[c / 2];
    const std::uint64_t arrived = end.arrivals - mid.arrivals;
    if (arrived == 0 || end.backlog <= mid.backlog) return Stability::Stable;
    const double growth = static_cast<double>(end.backlog - mid.backlog);
    if (growth <= rule.growth_fraction * static_cast<double>(arrived)) return Stability::Stable;
  }
  return Stability::Unstable;
}

inline Stability stability_check(const RunStats& stats, const StabilityRule& rule = {}) {
  return stability_check(stats.backlog_samples, rule);
}

}  // namespace qps
