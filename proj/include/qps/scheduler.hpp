#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "qps/matching.hpp"
#include "qps/rng.hpp"
#include "qps/voq.hpp"

namespace qps {

enum class Algorithm { SbQps, SwQps, Qps1, Islip, Mwm };

inline constexpr std::array<Algorithm, 5> kAllAlgorithms = {
    Algorithm::SbQps, Algorithm::SwQps, Algorithm::Qps1, Algorithm::Islip, Algorithm::Mwm};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::SbQps: return "sbqps";
    case Algorithm::SwQps: return "swqps";
    case Algorithm::Qps1: return "qps1";
    case Algorithm::Islip: return "islip";
    case Algorithm::Mwm: return "mwm";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (auto a : kAllAlgorithms)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

// What the QPS sampler of a calendar-based scheduler (SB-QPS, SW-QPS)
// weighs outputs by.
enum class ProposalWeights {
  // Packets not yet given a calendar cell. A packet leaves its sampler
  // weight once accepted, so each packet is packed into at most one cell.
  Unscheduled,
  // Full VOQ lengths; accepted but unserved packets can be proposed again.
  Queued,
};

// How a QPS-1 output picks among the proposals it receives.
enum class SingleAccept { LongestVoq, Random };

struct SchedulerOptions {
  std::size_t window = 16;   // T
  std::size_t knockout = 3;  // K
  ProposalWeights weights = ProposalWeights::Unscheduled;
  SingleAccept qps1_accept = SingleAccept::LongestVoq;
};

// A crossbar scheduler. The engine reports every enqueue and dequeue so
// that schedulers can keep incremental state, then asks for the matching
// of the current slot once per slot.
class Scheduler {
 public:
  virtual ~Scheduler() = default;

  virtual Algorithm algorithm() const = 0;
  virtual void on_arrival(int /*input*/, int /*output*/) {}
  virtual void on_departure(int /*input*/, int /*output*/) {}
  virtual Matching schedule(const VoqMatrix& voqs, Rng& rng) = 0;
};

}  // namespace qps
